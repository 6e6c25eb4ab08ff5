//! Named maps and vector fields defined coordinate-wise by expressions.

use super::{diff, parse, EvalError, Expr, ExprError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SystemKind {
    #[serde(rename = "discrete-map")]
    DiscreteMap,
    #[serde(rename = "vector-field")]
    VectorField,
}

impl SystemKind {
    pub fn label(self) -> &'static str {
        match self {
            SystemKind::DiscreteMap => "discrete-map",
            SystemKind::VectorField => "vector-field",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SystemError {
    #[error("system `{name}` declares {variables} variables but {equations} equations")]
    CoordinateCount {
        name: String,
        variables: usize,
        equations: usize,
    },
    #[error("system needs at least one variable")]
    ZeroDimensional,
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("in equation {index}: {source}")]
    Expr {
        index: usize,
        #[source]
        source: ExprError,
    },
    #[error("malformed system definition: {0}")]
    Format(String),
}

/// A map or vector field on R^n. Coordinate `i` of `coords` gives
/// `T_i(x)` for maps and `dx_i/dt` for fields. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemDef {
    name: String,
    kind: SystemKind,
    variables: Vec<String>,
    parameters: BTreeMap<String, f64>,
    coords: Vec<Expr>,
}

impl SystemDef {
    pub fn new(
        name: &str,
        kind: SystemKind,
        variables: &[&str],
        parameters: BTreeMap<String, f64>,
        equations: &[&str],
    ) -> Result<SystemDef, SystemError> {
        let variables: Vec<String> = variables.iter().map(|s| s.to_string()).collect();
        if variables.is_empty() {
            return Err(SystemError::ZeroDimensional);
        }
        for (i, v) in variables.iter().enumerate() {
            if variables[..i].contains(v) {
                return Err(SystemError::DuplicateVariable(v.clone()));
            }
        }
        if equations.len() != variables.len() {
            return Err(SystemError::CoordinateCount {
                name: name.to_string(),
                variables: variables.len(),
                equations: equations.len(),
            });
        }
        let coords = equations
            .iter()
            .enumerate()
            .map(|(index, text)| {
                parse(text, &variables, &parameters)
                    .map_err(|source| SystemError::Expr { index, source })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SystemDef {
            name: name.to_string(),
            kind,
            variables,
            parameters,
            coords,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn coord(&self, i: usize) -> &Expr {
        &self.coords[i]
    }

    pub fn equation_strings(&self) -> Vec<String> {
        self.coords.iter().map(|e| e.to_string()).collect()
    }

    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) -> Result<(), EvalError> {
        debug_assert_eq!(out.len(), self.coords.len());
        for (o, e) in out.iter_mut().zip(&self.coords) {
            *o = e.eval(x)?;
        }
        Ok(())
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>, EvalError> {
        let mut out = vec![0.0; self.dimension()];
        self.eval_into(x, &mut out)?;
        Ok(out)
    }

    /// Symbolic partial `d coords[i] / d x_j`.
    pub fn partial(&self, i: usize, j: usize) -> Expr {
        diff(&self.coords[i], j)
    }

    /// Serializes to the system definition file format.
    pub fn to_json_string(&self) -> String {
        let file = SystemFile {
            name: self.name.clone(),
            kind: self.kind,
            variables: self.variables.clone(),
            parameters: self.parameters.clone(),
            equations: self.equation_strings(),
        };
        serde_json::to_string_pretty(&file).expect("system serialization cannot fail")
    }

    /// Loads a system from the JSON definition format:
    /// `{name, kind, variables[], parameters{}, equations[]}` with
    /// equations in document order matching `variables`.
    pub fn from_json_str(text: &str) -> Result<SystemDef, SystemError> {
        let file: SystemFile =
            serde_json::from_str(text).map_err(|e| SystemError::Format(e.to_string()))?;
        let vars: Vec<&str> = file.variables.iter().map(|s| s.as_str()).collect();
        let eqs: Vec<&str> = file.equations.iter().map(|s| s.as_str()).collect();
        SystemDef::new(&file.name, file.kind, &vars, file.parameters, &eqs)
    }
}

#[derive(Serialize, Deserialize)]
struct SystemFile {
    name: String,
    kind: SystemKind,
    variables: Vec<String>,
    #[serde(default)]
    parameters: BTreeMap<String, f64>,
    equations: Vec<String>,
}
