//! Recursive-descent parser for the expression grammar.
//!
//! Precedence, tightest first: power, unary minus, `*`/`/`, `+`/`-`.
//! Binary operators of equal precedence associate to the left. Power
//! exponents are integer literals.

use super::{Expr, ExprError, Func};
use std::collections::BTreeMap;

/// Parses `text` against a variable declaration list and parameter bindings.
///
/// Every identifier in `text` must be a declared variable, a bound
/// parameter, or a function name applied to an argument.
pub fn parse(
    text: &str,
    variables: &[String],
    parameters: &BTreeMap<String, f64>,
) -> Result<Expr, ExprError> {
    if text.trim().is_empty() {
        return Err(ExprError::Empty);
    }
    let mut p = Parser {
        bytes: text.as_bytes(),
        text,
        pos: 0,
        variables,
        parameters,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    bytes: &'a [u8],
    text: &'a str,
    pos: usize,
    variables: &'a [String],
    parameters: &'a BTreeMap<String, f64>,
}

impl<'a> Parser<'a> {
    fn syntax(&self, message: &str) -> ExprError {
        ExprError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            self.skip_ws();
            // A minus directly in front of a number literal folds into the
            // literal, unless a `^` follows (power binds tighter).
            if self
                .bytes
                .get(self.pos)
                .is_some_and(|b| b.is_ascii_digit())
            {
                let start = self.pos;
                let v = self.number()?;
                if self.peek() == Some(b'^') {
                    self.pos = start;
                } else {
                    return Ok(Expr::Number(-v));
                }
            }
            let inner = self.unary()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let mut base = self.atom()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            let n = self.integer_exponent()?;
            base = Expr::Pow(Box::new(base), n);
        }
        Ok(base)
    }

    fn integer_exponent(&mut self) -> Result<i32, ExprError> {
        self.skip_ws();
        let start = self.pos;
        if self.bytes.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_digit())
        {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.syntax("expected integer exponent"));
        }
        // A fractional or exponent-notation literal is not an integer.
        if self
            .bytes
            .get(self.pos)
            .is_some_and(|b| *b == b'.' || *b == b'e' || *b == b'E')
        {
            return Err(self.syntax("power exponent must be an integer literal"));
        }
        self.text[start..self.pos].parse::<i32>().map_err(|_| {
            ExprError::Syntax {
                offset: start,
                message: "integer exponent out of range".to_string(),
            }
        })
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            None => Err(self.syntax("expected operand, found end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b) if b.is_ascii_digit() => self.number().map(Expr::Number),
            Some(b) if b.is_ascii_alphabetic() || b == b'_' => self.identifier(),
            Some(b) => Err(self.syntax(&format!("unexpected character `{}`", b as char))),
        }
    }

    fn number(&mut self) -> Result<f64, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_digit())
        {
            self.pos += 1;
        }
        if self.bytes.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            while self
                .bytes
                .get(self.pos)
                .is_some_and(|b| b.is_ascii_digit())
            {
                self.pos += 1;
            }
        }
        if self
            .bytes
            .get(self.pos)
            .is_some_and(|b| *b == b'e' || *b == b'E')
        {
            let mark = self.pos;
            self.pos += 1;
            if self
                .bytes
                .get(self.pos)
                .is_some_and(|b| *b == b'+' || *b == b'-')
            {
                self.pos += 1;
            }
            if self
                .bytes
                .get(self.pos)
                .is_some_and(|b| b.is_ascii_digit())
            {
                while self
                    .bytes
                    .get(self.pos)
                    .is_some_and(|b| b.is_ascii_digit())
                {
                    self.pos += 1;
                }
            } else {
                // Not an exponent suffix after all (e.g. variable `e`).
                self.pos = mark;
            }
        }
        self.text[start..self.pos].parse::<f64>().map_err(|_| {
            ExprError::Syntax {
                offset: start,
                message: "malformed number".to_string(),
            }
        })
    }

    fn identifier(&mut self) -> Result<Expr, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
        {
            self.pos += 1;
        }
        let name = &self.text[start..self.pos];
        if let Some(func) = Func::from_name(name) {
            if self.peek() == Some(b'(') {
                self.pos += 1;
                let arg = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected `)` after function argument"));
                }
                self.pos += 1;
                return Ok(Expr::Func(func, Box::new(arg)));
            }
        }
        if let Some(index) = self.variables.iter().position(|v| v == name) {
            return Ok(Expr::Var {
                name: name.to_string(),
                index,
            });
        }
        if let Some(&value) = self.parameters.get(name) {
            return Ok(Expr::Param {
                name: name.to_string(),
                value,
            });
        }
        Err(ExprError::UnknownIdentifier {
            offset: start,
            name: name.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn p(text: &str, names: &[&str]) -> Result<Expr, ExprError> {
        parse(text, &vars(names), &BTreeMap::new())
    }

    #[test]
    fn incomplete_input_reports_offset() {
        let err = p("x +", &["x"]).unwrap_err();
        assert_eq!(
            err,
            ExprError::Syntax {
                offset: 3,
                message: "expected operand, found end of input".into()
            }
        );
    }

    #[test]
    fn unknown_identifier_is_named() {
        let err = p("x + w", &["x"]).unwrap_err();
        assert_eq!(
            err,
            ExprError::UnknownIdentifier {
                offset: 4,
                name: "w".into()
            }
        );
    }

    #[test]
    fn empty_input_rejected() {
        assert_eq!(p("  ", &["x"]).unwrap_err(), ExprError::Empty);
    }

    #[test]
    fn left_associativity() {
        let e = p("1 - 2 - 3", &[]).unwrap();
        assert_eq!(e.eval(&[]).unwrap(), -4.0);
        let e = p("8/4/2", &[]).unwrap();
        assert_eq!(e.eval(&[]).unwrap(), 1.0);
    }

    #[test]
    fn power_binds_tighter_than_unary_minus() {
        let e = p("-2^2", &[]).unwrap();
        assert_eq!(e.eval(&[]).unwrap(), -4.0);
        let e = p("(-2)^2", &[]).unwrap();
        assert_eq!(e.eval(&[]).unwrap(), 4.0);
    }

    #[test]
    fn negative_literal_folds() {
        assert_eq!(p("-5", &[]).unwrap(), Expr::Number(-5.0));
        assert_eq!(
            p("--5", &[]).unwrap(),
            Expr::Neg(Box::new(Expr::Number(-5.0)))
        );
    }

    #[test]
    fn parameters_resolve_to_bound_values() {
        let mut params = BTreeMap::new();
        params.insert("r".to_string(), 3.2);
        let e = parse("r*x*(1 - x)", &vars(&["x"]), &params).unwrap();
        let v = e.eval(&[0.5]).unwrap();
        assert!((v - 0.8).abs() < 1e-15);
        assert_eq!(e.to_string(), "r*x*(1 - x)");
    }

    #[test]
    fn power_requires_integer_exponent() {
        assert!(matches!(
            p("x^2.5", &["x"]).unwrap_err(),
            ExprError::Syntax { .. }
        ));
        assert_eq!(p("x^3", &["x"]).unwrap().eval(&[2.0]).unwrap(), 8.0);
        assert_eq!(p("x^-2", &["x"]).unwrap().eval(&[2.0]).unwrap(), 0.25);
    }

    #[test]
    fn function_calls_parse() {
        let e = p("exp(x) + sqrt(abs(x))", &["x"]).unwrap();
        let v = e.eval(&[-4.0]).unwrap();
        assert!((v - ((-4.0f64).exp() + 2.0)).abs() < 1e-12);
    }

    #[test]
    fn scientific_notation() {
        assert_eq!(p("1.5e-3", &[]).unwrap(), Expr::Number(0.0015));
        assert_eq!(p("2E2", &[]).unwrap(), Expr::Number(200.0));
    }
}
