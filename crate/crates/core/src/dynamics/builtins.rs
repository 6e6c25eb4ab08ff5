//! Catalog of built-in systems addressable by name.

use super::DynamicsError;
use crate::expr::{SystemDef, SystemKind};
use std::collections::BTreeMap;

/// Resolves a builtin system by name.
///
/// Names: `lorenz-classical`, `lorenz-paper-literal`, `logistic(r)`,
/// `tent`, `doubling`, `coop-lv-2d`, `identity(n)`.
///
/// `lorenz-classical` is the usual Lorenz field with sigma = 10, rho = 28,
/// beta = 8/3. `lorenz-paper-literal` keeps the variant first equation
/// `10*(y - z)` exactly as sometimes printed; it is shipped for fidelity
/// and is not used by the chaos experiments.
pub fn builtin(name: &str) -> Result<SystemDef, DynamicsError> {
    let sys = |n: &str, kind, vars: &[&str], eqs: &[&str]| {
        SystemDef::new(n, kind, vars, BTreeMap::new(), eqs)
            .expect("builtin definitions are well formed")
    };
    match name {
        "lorenz-classical" => Ok(sys(
            name,
            SystemKind::VectorField,
            &["x", "y", "z"],
            &["10*(y - x)", "28*x - y - x*z", "x*y - (8/3)*z"],
        )),
        "lorenz-paper-literal" => Ok(sys(
            name,
            SystemKind::VectorField,
            &["x", "y", "z"],
            &["10*(y - z)", "28*x - y - x*z", "x*y - (8/3)*z"],
        )),
        "tent" => Ok(sys(
            name,
            SystemKind::DiscreteMap,
            &["x"],
            &["1 - 2*abs(x - 0.5)"],
        )),
        "doubling" => Ok(sys(
            name,
            SystemKind::DiscreteMap,
            &["x"],
            &["2*x - floor(2*x)"],
        )),
        "coop-lv-2d" => Ok(sys(
            name,
            SystemKind::VectorField,
            &["x", "y"],
            &["x*(1 - x + 0.5*y)", "y*(1 - y + 0.5*x)"],
        )),
        _ => {
            if let Some(arg) = call_argument(name, "logistic") {
                let r: f64 = arg.parse().map_err(|_| {
                    DynamicsError::InvalidParameter(format!(
                        "logistic parameter `{arg}` is not a number"
                    ))
                })?;
                let mut params = BTreeMap::new();
                params.insert("r".to_string(), r);
                return Ok(SystemDef::new(
                    name,
                    SystemKind::DiscreteMap,
                    &["x"],
                    params,
                    &["r*x*(1 - x)"],
                )
                .expect("logistic definition is well formed"));
            }
            if let Some(arg) = call_argument(name, "identity") {
                let n: usize = arg.parse().map_err(|_| {
                    DynamicsError::InvalidParameter(format!(
                        "identity dimension `{arg}` is not a positive integer"
                    ))
                })?;
                if n == 0 {
                    return Err(DynamicsError::InvalidParameter(
                        "identity dimension must be at least 1".into(),
                    ));
                }
                let vars: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
                let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
                let eqs = var_refs.clone();
                return Ok(SystemDef::new(
                    name,
                    SystemKind::DiscreteMap,
                    &var_refs,
                    BTreeMap::new(),
                    &eqs,
                )
                .expect("identity definition is well formed"));
            }
            Err(DynamicsError::UnknownBuiltin(name.to_string()))
        }
    }
}

fn call_argument<'a>(name: &'a str, head: &str) -> Option<&'a str> {
    name.strip_prefix(head)?
        .strip_prefix('(')?
        .strip_suffix(')')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_literal_first_coordinate() {
        let sys = builtin("lorenz-paper-literal").unwrap();
        assert_eq!(sys.coord(0).to_string(), "10*(y - z)");
    }

    #[test]
    fn classical_second_coordinate() {
        let sys = builtin("lorenz-classical").unwrap();
        assert_eq!(sys.coord(1).to_string(), "28*x - y - x*z");
    }

    #[test]
    fn identity_builtin_dimensions() {
        let sys = builtin("identity(3)").unwrap();
        assert_eq!(sys.dimension(), 3);
        assert_eq!(sys.eval(&[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn logistic_parameter_binds() {
        let sys = builtin("logistic(3.2)").unwrap();
        assert!((sys.eval(&[0.5]).unwrap()[0] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn tent_peak() {
        let sys = builtin("tent").unwrap();
        assert_eq!(sys.eval(&[0.5]).unwrap()[0], 1.0);
        assert_eq!(sys.eval(&[0.25]).unwrap()[0], 0.5);
    }

    #[test]
    fn unknown_name_is_an_error() {
        assert!(matches!(
            builtin("rossler"),
            Err(DynamicsError::UnknownBuiltin(_))
        ));
    }
}
