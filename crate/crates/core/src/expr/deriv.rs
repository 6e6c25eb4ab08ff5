//! Exact symbolic partial derivatives.
//!
//! The only simplification applied is constant folding (and the usual
//! `0`/`1` identities it implies); anything further is out of scope.

use super::{Expr, Func};

/// Partial derivative of `e` with respect to the variable at `index`.
pub fn diff(e: &Expr, index: usize) -> Expr {
    match e {
        Expr::Number(_) | Expr::Param { .. } => Expr::Number(0.0),
        Expr::Var { index: i, .. } => {
            if *i == index {
                Expr::Number(1.0)
            } else {
                Expr::Number(0.0)
            }
        }
        Expr::Neg(a) => neg(diff(a, index)),
        Expr::Add(a, b) => add(diff(a, index), diff(b, index)),
        Expr::Sub(a, b) => sub(diff(a, index), diff(b, index)),
        Expr::Mul(a, b) => add(
            mul(diff(a, index), (**b).clone()),
            mul((**a).clone(), diff(b, index)),
        ),
        Expr::Div(a, b) => {
            // (a'b - ab') / b^2
            let num = sub(
                mul(diff(a, index), (**b).clone()),
                mul((**a).clone(), diff(b, index)),
            );
            div(num, pow((**b).clone(), 2))
        }
        Expr::Pow(base, n) => {
            // n * base^(n-1) * base'
            if *n == 0 {
                return Expr::Number(0.0);
            }
            let outer = mul(Expr::Number(f64::from(*n)), pow((**base).clone(), n - 1));
            mul(outer, diff(base, index))
        }
        Expr::Func(f, arg) => {
            let inner = diff(arg, index);
            let outer = match f {
                Func::Exp => Expr::Func(Func::Exp, arg.clone()),
                Func::Log => return div(inner, (**arg).clone()),
                Func::Sin => Expr::Func(Func::Cos, arg.clone()),
                Func::Cos => neg(Expr::Func(Func::Sin, arg.clone())),
                Func::Sqrt => {
                    return div(
                        inner,
                        mul(Expr::Number(2.0), Expr::Func(Func::Sqrt, arg.clone())),
                    )
                }
                // d|u|/du = u/|u| away from the kink.
                Func::Abs => div((**arg).clone(), Expr::Func(Func::Abs, arg.clone())),
                // Zero almost everywhere.
                Func::Floor => return Expr::Number(0.0),
            };
            mul(outer, inner)
        }
    }
}

fn is_zero(e: &Expr) -> bool {
    matches!(e, Expr::Number(c) if *c == 0.0)
}

fn is_one(e: &Expr) -> bool {
    matches!(e, Expr::Number(c) if *c == 1.0)
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Number(c) => Expr::Number(-c),
        other => Expr::Neg(Box::new(other)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) {
        return b;
    }
    if is_zero(&b) {
        return a;
    }
    if let (Expr::Number(x), Expr::Number(y)) = (&a, &b) {
        let v = x + y;
        if v.is_finite() {
            return Expr::Number(v);
        }
    }
    Expr::Add(Box::new(a), Box::new(b))
}

fn sub(a: Expr, b: Expr) -> Expr {
    if is_zero(&b) {
        return a;
    }
    if is_zero(&a) {
        return neg(b);
    }
    if let (Expr::Number(x), Expr::Number(y)) = (&a, &b) {
        let v = x - y;
        if v.is_finite() {
            return Expr::Number(v);
        }
    }
    Expr::Sub(Box::new(a), Box::new(b))
}

fn mul(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) || is_zero(&b) {
        return Expr::Number(0.0);
    }
    if is_one(&a) {
        return b;
    }
    if is_one(&b) {
        return a;
    }
    if let (Expr::Number(x), Expr::Number(y)) = (&a, &b) {
        let v = x * y;
        if v.is_finite() {
            return Expr::Number(v);
        }
    }
    Expr::Mul(Box::new(a), Box::new(b))
}

fn div(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) && !is_zero(&b) {
        return Expr::Number(0.0);
    }
    if is_one(&b) {
        return a;
    }
    if let (Expr::Number(x), Expr::Number(y)) = (&a, &b) {
        if *y != 0.0 {
            let v = x / y;
            if v.is_finite() {
                return Expr::Number(v);
            }
        }
    }
    Expr::Div(Box::new(a), Box::new(b))
}

fn pow(base: Expr, n: i32) -> Expr {
    match n {
        0 => Expr::Number(1.0),
        1 => base,
        _ => {
            if let Expr::Number(c) = &base {
                let v = c.powi(n);
                if v.is_finite() {
                    return Expr::Number(v);
                }
            }
            Expr::Pow(Box::new(base), n)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;
    use std::collections::BTreeMap;

    fn p(text: &str, names: &[&str]) -> Expr {
        let vars: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        parse(text, &vars, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn lorenz_partial_in_x() {
        let e = p("28*x - y - x*z", &["x", "y", "z"]);
        let d = diff(&e, 0);
        assert_eq!(d, p("28 - z", &["x", "y", "z"]));
    }

    #[test]
    fn linear_partial_is_constant() {
        let e = p("x*y - (8/3)*z", &["x", "y", "z"]);
        let d = diff(&e, 2);
        // The 8/3 ratio folds to a single constant.
        assert_eq!(d.eval(&[0.0, 0.0, 0.0]).unwrap(), -(8.0 / 3.0));
    }

    #[test]
    fn product_rule_with_folding() {
        let e = p("x*(1 - x + 0.5*y)", &["x", "y"]);
        let d = diff(&e, 1);
        let v = d.eval(&[3.0, 7.0]).unwrap();
        assert_eq!(v, 1.5); // 0.5 * x
    }

    #[test]
    fn chain_rule_through_functions() {
        let e = p("sin(x^2)", &["x"]);
        let d = diff(&e, 0);
        let x = 0.7_f64;
        let expected = (x * x).cos() * 2.0 * x;
        assert!((d.eval(&[x]).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn negative_exponent_power_rule() {
        let e = p("x^-2", &["x"]);
        let d = diff(&e, 0);
        let x = 1.7;
        assert!((d.eval(&[x]).unwrap() - (-2.0 * x.powi(-3))).abs() < 1e-14);
    }

    #[test]
    fn abs_derivative_is_sign() {
        let e = p("abs(x)", &["x"]);
        let d = diff(&e, 0);
        assert_eq!(d.eval(&[-3.0]).unwrap(), -1.0);
        assert_eq!(d.eval(&[2.0]).unwrap(), 1.0);
    }
}
