use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::Expr;
use crate::field::{FieldError, LcNumber};
use crate::rational::{self, Rational};

pub type Binding = BTreeMap<String, LcNumber>;
pub type RationalBinding = BTreeMap<String, Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable '{0}'")]
    Unbound(String),
    #[error("division by zero in {0}")]
    ZeroDivision(String),
    #[error("{0} has no exact rational root")]
    NotAPerfectSquare(String),
    #[error("in {subexpr}: {source}")]
    Field { subexpr: String, source: FieldError },
}

impl EvalError {
    fn from_field(e: &Expr, err: FieldError) -> Self {
        match err {
            FieldError::ZeroDivision => EvalError::ZeroDivision(e.to_string()),
            source => EvalError::Field {
                subexpr: e.to_string(),
                source,
            },
        }
    }

    /// Underlying field error, if any.
    pub fn field_error(&self) -> Option<&FieldError> {
        match self {
            EvalError::Field { source, .. } => Some(source),
            _ => None,
        }
    }

    pub fn is_undecidable(&self) -> bool {
        matches!(self.field_error(), Some(FieldError::Undecidable(_)))
    }
}

/// Evaluates `e` in the field, with `depth` controlling every reciprocal and root.
pub fn eval_field(e: &Expr, binding: &Binding, depth: u32) -> Result<LcNumber, EvalError> {
    let rec = |x: &Expr| eval_field(x, binding, depth);
    let lift = |r: Result<LcNumber, FieldError>| r.map_err(|err| EvalError::from_field(e, err));
    match e {
        Expr::Var(v) => binding.get(v).cloned().ok_or_else(|| EvalError::Unbound(v.clone())),
        Expr::Num(q) => Ok(LcNumber::from_rational(q.clone())),
        Expr::Neg(a) => Ok(-rec(a)?),
        Expr::Add(a, b) => Ok(rec(a)? + rec(b)?),
        Expr::Sub(a, b) => Ok(rec(a)? - rec(b)?),
        Expr::Mul(a, b) => Ok(rec(a)? * rec(b)?),
        Expr::Div(a, b) => {
            let num = rec(a)?;
            let den = rec(b)?;
            lift(num.div(&den, depth))
        }
        Expr::Pow(a, q) => lift(rec(a)?.pow_rational(q, depth)),
        Expr::Sqrt(a) => lift(rec(a)?.nth_root(2, depth)),
    }
}

/// Evaluates `e` over the rationals.
pub fn eval_rational(e: &Expr, binding: &RationalBinding) -> Result<Rational, EvalError> {
    let rec = |x: &Expr| eval_rational(x, binding);
    match e {
        Expr::Var(v) => binding.get(v).cloned().ok_or_else(|| EvalError::Unbound(v.clone())),
        Expr::Num(q) => Ok(q.clone()),
        Expr::Neg(a) => Ok(-rec(a)?),
        Expr::Add(a, b) => Ok(rec(a)? + rec(b)?),
        Expr::Sub(a, b) => Ok(rec(a)? - rec(b)?),
        Expr::Mul(a, b) => Ok(rec(a)? * rec(b)?),
        Expr::Div(a, b) => {
            let num = rec(a)?;
            let den = rec(b)?;
            if den.is_zero() {
                return Err(EvalError::ZeroDivision(e.to_string()));
            }
            Ok(num / den)
        }
        Expr::Pow(a, q) => {
            let base = rec(a)?;
            let p = q.numer().to_i32().expect("exponent numerator fits in i32");
            let root = q.denom().to_u32().expect("exponent denominator fits in u32");
            if base.is_zero() && p < 0 {
                return Err(EvalError::ZeroDivision(e.to_string()));
            }
            let powered = num_traits::pow::Pow::pow(&base, p);
            if root == 1 {
                Ok(powered)
            } else {
                rational::nth_root(&powered, root).ok_or_else(|| EvalError::NotAPerfectSquare(e.to_string()))
            }
        }
        Expr::Sqrt(a) => {
            let v = rec(a)?;
            rational::nth_root(&v, 2).ok_or_else(|| EvalError::NotAPerfectSquare(e.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::field::DEFAULT_DEPTH;
    use crate::rational::int;

    fn bind(pairs: &[(&str, LcNumber)]) -> Binding {
        pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    fn lc(s: &str) -> LcNumber {
        s.parse().unwrap()
    }

    #[test]
    fn binomial_at_infinitesimal_offset() {
        let e = parse("x^2").unwrap();
        let v = eval_field(&e, &bind(&[("x", lc("1 + eps"))]), DEFAULT_DEPTH).unwrap();
        assert_eq!(v, lc("1 + 2*eps + eps^2"));
    }

    #[test]
    fn oblique_line_at_unlimited_intercept() {
        let e = parse("1 - x/H").unwrap();
        let h = LcNumber::eps().inv(DEFAULT_DEPTH).unwrap();
        let v = eval_field(&e, &bind(&[("x", LcNumber::from_int(7)), ("H", h)]), DEFAULT_DEPTH).unwrap();
        assert_eq!(v, lc("1 - 7*eps"));
    }

    #[test]
    fn product_increment() {
        let e = parse("(x+dx)*(y+dy) - x*y").unwrap();
        let b = bind(&[
            ("x", LcNumber::from_int(2)),
            ("y", LcNumber::from_int(3)),
            ("dx", LcNumber::eps()),
            ("dy", LcNumber::eps()),
        ]);
        assert_eq!(eval_field(&e, &b, DEFAULT_DEPTH).unwrap(), lc("5*eps + eps^2"));
    }

    #[test]
    fn field_errors_name_the_subexpression() {
        let e = parse("1/(x - x)").unwrap();
        let err = eval_field(&e, &bind(&[("x", LcNumber::eps())]), 4).unwrap_err();
        assert_eq!(err, EvalError::ZeroDivision("(1 / (x - x))".into()));
        let e = parse("sqrt(2*x)").unwrap();
        let err = eval_field(&e, &bind(&[("x", LcNumber::one())]), 4).unwrap_err();
        assert!(matches!(err, EvalError::Field { source: FieldError::NotAnNthPower(..), .. }));
        let e = parse("1/x").unwrap();
        let err = eval_field(&e, &bind(&[("x", lc("O(eps)"))]), 4).unwrap_err();
        assert!(err.is_undecidable());
        assert_eq!(
            eval_field(&e, &Binding::new(), 4).unwrap_err(),
            EvalError::Unbound("x".into())
        );
    }

    #[test]
    fn rational_evaluation() {
        let rb = |pairs: &[(&str, i64)]| -> RationalBinding {
            pairs.iter().map(|(k, v)| (k.to_string(), int(*v))).collect()
        };
        assert_eq!(eval_rational(&parse("x^2").unwrap(), &rb(&[("x", 3)])), Ok(int(9)));
        let parabola = parse("(y+2)^2 - (x^2+y^2)").unwrap();
        assert_eq!(eval_rational(&parabola, &rb(&[("x", 2), ("y", 0)])), Ok(int(0)));
        assert_eq!(
            eval_rational(&parse("x/y").unwrap(), &rb(&[("x", 1), ("y", 0)])),
            Err(EvalError::ZeroDivision("(x / y)".into()))
        );
        assert!(matches!(
            eval_rational(&parse("sqrt(x)").unwrap(), &rb(&[("x", 2)])),
            Err(EvalError::NotAPerfectSquare(_))
        ));
        assert_eq!(eval_rational(&parse("x^(3/2)").unwrap(), &rb(&[("x", 4)])), Ok(int(8)));
        assert_eq!(
            eval_rational(&parse("x^-2").unwrap(), &rb(&[("x", 2)])),
            Ok(crate::rational::ratio(1, 4))
        );
    }
}
