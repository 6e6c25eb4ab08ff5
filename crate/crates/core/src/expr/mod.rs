//! Scalar expressions over named variables and parameters.
//!
//! Expressions are parsed from text ([`parse`]), evaluated at points
//! ([`Expr::eval`]), differentiated symbolically ([`diff`]) and evaluated
//! over interval boxes ([`interval_eval`]). They are immutable after
//! construction, so all evaluation entry points are reentrant.

mod deriv;
mod interval;
mod parse;
mod system;

pub use deriv::diff;
pub use interval::{interval_eval, Interval, IntervalBox};
pub use parse::parse;
pub use system::{SystemDef, SystemError, SystemKind};

use std::fmt;
use thiserror::Error;

/// Univariate functions admitted by the expression grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
    Abs,
    Floor,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Floor => "floor",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "exp" => Some(Func::Exp),
            "log" => Some(Func::Log),
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "sqrt" => Some(Func::Sqrt),
            "abs" => Some(Func::Abs),
            "floor" => Some(Func::Floor),
            _ => None,
        }
    }
}

/// Expression tree. Variables carry the index assigned by the declaration
/// list they were parsed against; parameters carry their bound value.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    Var { name: String, index: usize },
    Param { name: String, value: f64 },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Func(Func, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("empty expression")]
    Empty,
}

/// Runtime evaluation failures. The offending subexpression is reported in
/// printed form.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero in `{0}`")]
    DivisionByZero(String),
    #[error("{func} domain error in `{expr}`")]
    Domain { func: &'static str, expr: String },
    #[error("point has dimension {got}, expression expects index {index}")]
    DimensionMismatch { index: usize, got: usize },
}

impl Expr {
    /// Evaluates at a point whose coordinates follow the variable
    /// declaration order this expression was parsed against.
    pub fn eval(&self, point: &[f64]) -> Result<f64, EvalError> {
        match self {
            Expr::Number(c) => Ok(*c),
            Expr::Param { value, .. } => Ok(*value),
            Expr::Var { index, .. } => point.get(*index).copied().ok_or({
                EvalError::DimensionMismatch {
                    index: *index,
                    got: point.len(),
                }
            }),
            Expr::Neg(e) => Ok(-e.eval(point)?),
            Expr::Add(a, b) => Ok(a.eval(point)? + b.eval(point)?),
            Expr::Sub(a, b) => Ok(a.eval(point)? - b.eval(point)?),
            Expr::Mul(a, b) => Ok(a.eval(point)? * b.eval(point)?),
            Expr::Div(a, b) => {
                let den = b.eval(point)?;
                if den == 0.0 {
                    return Err(EvalError::DivisionByZero(self.to_string()));
                }
                Ok(a.eval(point)? / den)
            }
            Expr::Pow(base, n) => {
                let v = base.eval(point)?;
                if *n < 0 && v == 0.0 {
                    return Err(EvalError::DivisionByZero(self.to_string()));
                }
                Ok(v.powi(*n))
            }
            Expr::Func(f, arg) => {
                let v = arg.eval(point)?;
                match f {
                    Func::Exp => Ok(v.exp()),
                    Func::Log => {
                        if v <= 0.0 {
                            Err(EvalError::Domain {
                                func: "log",
                                expr: self.to_string(),
                            })
                        } else {
                            Ok(v.ln())
                        }
                    }
                    Func::Sin => Ok(v.sin()),
                    Func::Cos => Ok(v.cos()),
                    Func::Sqrt => {
                        if v < 0.0 {
                            Err(EvalError::Domain {
                                func: "sqrt",
                                expr: self.to_string(),
                            })
                        } else {
                            Ok(v.sqrt())
                        }
                    }
                    Func::Abs => Ok(v.abs()),
                    Func::Floor => Ok(v.floor()),
                }
            }
        }
    }

    /// Collects the variable indices referenced by this expression.
    pub fn free_variables(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.visit(&mut |e| {
            if let Expr::Var { index, .. } = e {
                if !out.contains(index) {
                    out.push(*index);
                }
            }
        });
        out.sort_unstable();
        out
    }

    fn visit(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Number(_) | Expr::Var { .. } | Expr::Param { .. } => {}
            Expr::Neg(e) | Expr::Pow(e, _) | Expr::Func(_, e) => e.visit(f),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Number(c) if *c < 0.0 => 4,
            _ => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < min {
            write!(f, "(")?;
            self.fmt_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Number(c) => write!(f, "{c}"),
            Expr::Var { name, .. } | Expr::Param { name, .. } => write!(f, "{name}"),
            Expr::Add(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " + ")?;
                b.fmt_prec(f, 2)
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " - ")?;
                b.fmt_prec(f, 2)
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "*")?;
                b.fmt_prec(f, 3)
            }
            Expr::Div(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "/")?;
                b.fmt_prec(f, 3)
            }
            Expr::Neg(e) => {
                write!(f, "-")?;
                // A bare negative literal would re-parse as a folded
                // constant, so keep the parentheses in that case.
                if matches!(**e, Expr::Number(_)) {
                    write!(f, "(")?;
                    e.fmt_prec(f, 0)?;
                    write!(f, ")")
                } else {
                    e.fmt_prec(f, 3)
                }
            }
            Expr::Pow(base, n) => {
                // The base of a power is an atom in the grammar.
                let bare = matches!(
                    **base,
                    Expr::Pow(..) | Expr::Var { .. } | Expr::Param { .. } | Expr::Func(..)
                ) || matches!(**base, Expr::Number(c) if c >= 0.0);
                if bare {
                    base.fmt_prec(f, 4)?;
                } else {
                    write!(f, "(")?;
                    base.fmt_prec(f, 0)?;
                    write!(f, ")")?;
                }
                write!(f, "^{n}")
            }
            Expr::Func(func, arg) => {
                write!(f, "{}(", func.name())?;
                arg.fmt_prec(f, 0)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn p(text: &str, names: &[&str]) -> Expr {
        parse(text, &vars(names), &BTreeMap::new()).unwrap()
    }

    #[test]
    fn lorenz_second_coordinate_structure() {
        let e = p("28*x - y - x*z", &["x", "y", "z"]);
        let x = Expr::Var {
            name: "x".into(),
            index: 0,
        };
        let y = Expr::Var {
            name: "y".into(),
            index: 1,
        };
        let z = Expr::Var {
            name: "z".into(),
            index: 2,
        };
        let expected = Expr::Sub(
            Box::new(Expr::Sub(
                Box::new(Expr::Mul(Box::new(Expr::Number(28.0)), Box::new(x.clone()))),
                Box::new(y),
            )),
            Box::new(Expr::Mul(Box::new(x), Box::new(z))),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn free_variables_of_logistic_like_expression() {
        let e = p("x*(1 - x + 0.5*y)", &["x", "y"]);
        assert_eq!(e.free_variables(), vec![0, 1]);
    }

    #[test]
    fn eval_lorenz_third_coordinate() {
        let e = p("x*y - (8/3)*z", &["x", "y", "z"]);
        assert_eq!(e.eval(&[1.0, 1.0, 3.0]).unwrap(), -7.0);
    }

    #[test]
    fn eval_identity() {
        let e = p("x", &["x"]);
        assert_eq!(e.eval(&[5.0]).unwrap(), 5.0);
    }

    #[test]
    fn eval_division_by_zero() {
        let e = p("1/x", &["x"]);
        let err = e.eval(&[0.0]).unwrap_err();
        assert_eq!(err, EvalError::DivisionByZero("1/x".into()));
    }

    #[test]
    fn eval_log_domain_error_names_subexpression() {
        let e = p("1 + log(x - 2)", &["x"]);
        let err = e.eval(&[1.0]).unwrap_err();
        assert_eq!(
            err,
            EvalError::Domain {
                func: "log",
                expr: "log(x - 2)".into()
            }
        );
    }

    #[test]
    fn display_matches_source_for_builtin_shapes() {
        for (text, names) in [
            ("10*(y - x)", vec!["x", "y", "z"]),
            ("28*x - y - x*z", vec!["x", "y", "z"]),
            ("x*y - 8/3*z", vec!["x", "y", "z"]),
            ("x*(1 - x + 0.5*y)", vec!["x", "y"]),
        ] {
            let e = p(text, &names);
            assert_eq!(e.to_string(), text);
        }
        // Redundant parentheses drop out but the tree is unchanged.
        let a = p("x*y - (8/3)*z", &["x", "y", "z"]);
        let b = p("x*y - 8/3*z", &["x", "y", "z"]);
        assert_eq!(a, b);
    }
}
