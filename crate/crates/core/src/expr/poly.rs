//! Multivariate polynomials with coefficients in a commutative ring.
//!
//! Used to expand expressions symbolically: over the rationals to decide
//! polynomial identities, and over [`LcNumber`] to carry an unlimited
//! parameter through an algebraic derivation while keeping the plane
//! coordinates symbolic.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::Expr;
use crate::field::LcNumber;
use crate::rational::Rational;

pub trait Coefficient: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rational(q: &Rational) -> Self;
    /// Multiplicative inverse. Over the field this is a truncated series
    /// unless the value is an exact monomial.
    fn inverse(&self) -> Option<Self>;
}

impl Coefficient for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

impl Coefficient for LcNumber {
    fn zero() -> Self {
        LcNumber::zero()
    }
    fn one() -> Self {
        LcNumber::one()
    }
    fn is_zero(&self) -> bool {
        self.is_exact_zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(q: &Rational) -> Self {
        LcNumber::from_rational(q.clone())
    }
    fn inverse(&self) -> Option<Self> {
        self.inv(crate::field::DEFAULT_DEPTH).ok()
    }
}

/// Exponent vector keyed by variable name; absent names have exponent 0.
pub type Monomial = BTreeMap<String, u32>;

#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly<C> {
    terms: BTreeMap<Monomial, C>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("{0} is not polynomial")]
    NotPolynomial(String),
    #[error("cannot divide by non-constant {0}")]
    NonConstantDivisor(String),
}

impl<C: Coefficient> MultiPoly<C> {
    pub fn zero() -> Self {
        MultiPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: C) -> Self {
        let mut p = Self::zero();
        p.insert(Monomial::new(), c);
        p
    }

    pub fn variable(name: &str) -> Self {
        let mut m = Monomial::new();
        m.insert(name.to_string(), 1);
        let mut p = Self::zero();
        p.insert(m, C::one());
        p
    }

    fn insert(&mut self, m: Monomial, c: C) {
        let slot = self.terms.entry(m.clone()).or_insert_with(C::zero);
        *slot = slot.add(&c);
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    /// Coefficient of the monomial given as `(name, exponent)` pairs.
    pub fn coeff(&self, monomial: &[(&str, u32)]) -> C {
        let m: Monomial = monomial
            .iter()
            .filter(|(_, k)| *k > 0)
            .map(|(v, k)| (v.to_string(), *k))
            .collect();
        self.terms.get(&m).cloned().unwrap_or_else(C::zero)
    }

    /// The constant value, if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => self.terms.get(&Monomial::new()).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.insert(m.clone(), c.mul(k));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut m = ma.clone();
                for (v, k) in mb {
                    *m.entry(v.clone()).or_insert(0) += k;
                }
                out.insert(m, ca.mul(cb));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(C::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Expands `e`, substituting `constants(name)` for names it knows and
    /// keeping every other variable symbolic.
    pub fn from_expr(e: &Expr, constants: &dyn Fn(&str) -> Option<C>) -> Result<Self, PolyError> {
        let rec = |x: &Expr| Self::from_expr(x, constants);
        match e {
            Expr::Var(v) => Ok(match constants(v) {
                Some(c) => Self::constant(c),
                None => Self::variable(v),
            }),
            Expr::Num(q) => Ok(Self::constant(C::from_rational(q))),
            Expr::Neg(a) => Ok(rec(a)?.neg()),
            Expr::Add(a, b) => Ok(rec(a)?.add(&rec(b)?)),
            Expr::Sub(a, b) => Ok(rec(a)?.sub(&rec(b)?)),
            Expr::Mul(a, b) => Ok(rec(a)?.mul(&rec(b)?)),
            Expr::Div(a, b) => {
                let den = rec(b)?;
                let inv = den
                    .as_constant()
                    .and_then(|c| c.inverse())
                    .ok_or_else(|| PolyError::NonConstantDivisor(b.to_string()))?;
                Ok(rec(a)?.scale(&inv))
            }
            Expr::Pow(a, q) => {
                let base = rec(a)?;
                let k = (q.is_integer() && !q.is_negative())
                    .then(|| q.numer().to_u32())
                    .flatten();
                match k {
                    Some(k) => Ok(base.pow(k)),
                    None => {
                        // a negative power of a constant is still polynomial
                        let inv = base.as_constant().and_then(|c| c.inverse());
                        match (inv, q.is_integer()) {
                            (Some(inv), true) => {
                                let k = (-q).numer().to_u32().ok_or_else(|| PolyError::NotPolynomial(e.to_string()))?;
                                Ok(Self::constant(inv).pow(k))
                            }
                            _ => Err(PolyError::NotPolynomial(e.to_string())),
                        }
                    }
                }
            }
            Expr::Sqrt(_) => Err(PolyError::NotPolynomial(e.to_string())),
        }
    }
}

impl MultiPoly<Rational> {
    /// Expression with one product term per monomial, in monomial order.
    pub fn to_expr(&self) -> Expr {
        let mut out: Option<Expr> = None;
        for (m, c) in &self.terms {
            let mut term: Option<Expr> = None;
            for (v, k) in m {
                let factor = if *k == 1 { Expr::var(v) } else { Expr::var(v).powi(*k as i64) };
                term = Some(match term {
                    Some(t) => t * factor,
                    None => factor,
                });
            }
            let magnitude = c.abs();
            let term = match term {
                Some(t) if magnitude.is_one() => t,
                Some(t) => Expr::num(magnitude) * t,
                None => Expr::num(magnitude),
            };
            out = Some(match (out, c.is_negative()) {
                (None, false) => term,
                (None, true) => -term,
                (Some(acc), false) => acc + term,
                (Some(acc), true) => acc - term,
            });
        }
        out.unwrap_or_else(|| Expr::int(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{eval_rational, parse, RationalBinding};
    use crate::rational::{int, ratio};

    fn expand(src: &str) -> MultiPoly<Rational> {
        MultiPoly::from_expr(&parse(src).unwrap(), &|_| None).unwrap()
    }

    #[test]
    fn binomial_square() {
        let p = expand("(a+b)^2 - (a^2 + 2*a*b + b^2)");
        assert!(p.is_zero());
        let q = expand("(a - 1)*(a + 1)");
        assert_eq!(q.coeff(&[("a", 2)]), int(1));
        assert_eq!(q.coeff(&[]), int(-1));
    }

    #[test]
    fn division_by_constants_only() {
        let p = expand("x/4 + x^2/2");
        assert_eq!(p.coeff(&[("x", 1)]), ratio(1, 4));
        let err = MultiPoly::<Rational>::from_expr(&parse("1/x").unwrap(), &|_| None).unwrap_err();
        assert_eq!(err, PolyError::NonConstantDivisor("x".into()));
        assert!(MultiPoly::<Rational>::from_expr(&parse("sqrt(x)").unwrap(), &|_| None).is_err());
        assert_eq!(expand("2^-2").as_constant(), Some(ratio(1, 4)));
    }

    #[test]
    fn constants_substituted() {
        let p = MultiPoly::from_expr(&parse("x + H").unwrap(), &|v| (v == "H").then(|| int(5))).unwrap();
        assert_eq!(p.coeff(&[]), int(5));
    }

    #[test]
    fn field_coefficients() {
        let h = LcNumber::eps_pow(int(-1));
        let p = MultiPoly::from_expr(&parse("(y - H)^2").unwrap(), &|v| (v == "H").then(|| h.clone())).unwrap();
        assert_eq!(p.coeff(&[("y", 1)]), LcNumber::eps_pow(int(-1)).scale(&int(-2)));
        assert_eq!(p.coeff(&[]), LcNumber::eps_pow(int(-2)));
    }

    #[test]
    fn to_expr_evaluates_the_same() {
        let src = "(x - 2*y)^3 + 3/2*x*y - 7";
        let p = expand(src);
        let back = p.to_expr();
        let b: RationalBinding = [("x".to_string(), ratio(3, 7)), ("y".to_string(), int(-2))].into();
        assert_eq!(eval_rational(&back, &b), eval_rational(&parse(src).unwrap(), &b));
        assert!(expand(&back.to_string()).sub(&p).is_zero());
    }
}
