//! Truncated Levi-Civita series with rational exponents.
//!
//! An [`LcNumber`] is a finite sum `Σ c_q ε^q` plus an optional error
//! term `O(ε^T)`, where `ε` is a fixed positive infinitesimal. Larger
//! exponents are smaller in magnitude, so the leading (lowest-exponent)
//! term decides sign and order of magnitude.
//!
//! Addition, subtraction, multiplication and integer powers of exact
//! (untruncated) numbers stay exact. Reciprocals and roots of numbers
//! with more than one term have infinite support; they are cut off at a
//! caller-supplied `depth`, counted in steps of the exponent granularity
//! of the operand.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::rational::{self, Rational};
use crate::Sign;

/// Number of exponent steps kept by `inv` and `nth_root` when no depth is given.
pub const DEFAULT_DEPTH: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    ZeroDivision,
    #[error("undecidable: {0}")]
    Undecidable(String),
    #[error("value is unlimited")]
    Unlimited,
    #[error("operand is zero")]
    ZeroInput,
    #[error("leading coefficient {0} has no rational {1}-th root")]
    NotAnNthPower(Rational, u32),
    #[error("even root of negative leading coefficient {0}")]
    NegativeRoot(Rational),
}

/// Exponent threshold below which every term of a number is known.
///
/// `Bounded(t) < Unbounded` for all `t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Truncation {
    Bounded(Rational),
    Unbounded,
}

impl Truncation {
    fn shift(&self, by: &Rational) -> Truncation {
        match self {
            Truncation::Bounded(t) => Truncation::Bounded(t + by),
            Truncation::Unbounded => Truncation::Unbounded,
        }
    }

    fn admits(&self, exponent: &Rational) -> bool {
        match self {
            Truncation::Bounded(t) => exponent < t,
            Truncation::Unbounded => true,
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, Truncation::Bounded(_))
    }
}

/// Leading exponent and sign of a number: its order of magnitude.
///
/// Numbers in distinct classes are incomparable: no finite multiple of
/// the smaller one exceeds the larger.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct OrderClass {
    #[serde(serialize_with = "crate::serialize_rational")]
    pub leading_exponent: Rational,
    pub sign: Sign,
}

/// Standard part together with the sign of the infinitesimal remainder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Shadow {
    #[serde(serialize_with = "crate::serialize_rational")]
    pub value: Rational,
    pub residue: Sign,
}

/// An element of the infinitesimal-enriched field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LcNumber {
    terms: BTreeMap<Rational, Rational>,
    trunc: Truncation,
}

impl LcNumber {
    /// Builds a number from `(exponent, coefficient)` pairs, summing
    /// repeated exponents and discarding zero coefficients and terms at or
    /// beyond the truncation.
    pub fn from_terms<I>(terms: I, trunc: Truncation) -> Self
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let mut map: BTreeMap<Rational, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if trunc.admits(&e) {
                *map.entry(e).or_insert_with(Rational::zero) += c;
            }
        }
        map.retain(|_, c| !c.is_zero());
        LcNumber { terms: map, trunc }
    }

    pub fn zero() -> Self {
        LcNumber {
            terms: BTreeMap::new(),
            trunc: Truncation::Unbounded,
        }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::monomial(q, Rational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rational::int(n))
    }

    /// `c·ε^e`, exactly.
    pub fn monomial(coeff: Rational, exponent: Rational) -> Self {
        Self::from_terms([(exponent, coeff)], Truncation::Unbounded)
    }

    /// The positive infinitesimal `ε`.
    pub fn eps() -> Self {
        Self::eps_pow(Rational::one())
    }

    pub fn eps_pow(exponent: Rational) -> Self {
        Self::monomial(Rational::one(), exponent)
    }

    /// `O(ε^t)`: a number of which nothing below exponent `t` is known to be nonzero.
    pub fn big_o(t: Rational) -> Self {
        LcNumber {
            terms: BTreeMap::new(),
            trunc: Truncation::Bounded(t),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.terms.iter()
    }

    pub fn truncation(&self) -> &Truncation {
        &self.trunc
    }

    /// Coefficient at `exponent` (zero when absent).
    pub fn coeff(&self, exponent: &Rational) -> Rational {
        self.terms.get(exponent).cloned().unwrap_or_else(Rational::zero)
    }

    /// Lowest-exponent term, if any term is known.
    pub fn leading(&self) -> Option<(&Rational, &Rational)> {
        self.terms.iter().next()
    }

    /// Leading exponent, with 0 for numbers without known terms.
    fn lambda(&self) -> Rational {
        self.leading().map(|(e, _)| e.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn is_exact(&self) -> bool {
        !self.trunc.is_bounded()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.is_exact()
    }

    /// True when no term is known, whether or not the number is truncated.
    pub fn is_zero_up_to_truncation(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every known term has exponent zero and the number is exact.
    pub fn is_standard(&self) -> bool {
        self.is_exact() && self.terms.keys().all(Zero::is_zero)
    }

    /// Drops the error term, keeping the known terms as an exact number.
    pub fn without_truncation(&self) -> Self {
        LcNumber {
            terms: self.terms.clone(),
            trunc: Truncation::Unbounded,
        }
    }

    /// Cuts the number at exponent `t` (no-op if already cut lower).
    pub fn truncate(&self, t: Rational) -> Self {
        let trunc = self.trunc.clone().min(Truncation::Bounded(t));
        Self::from_terms(self.terms.clone(), trunc)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        LcNumber {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
            trunc: self.trunc.clone(),
        }
    }

    /// Exponent granularity relative to the leading term: the gcd of all
    /// `e - λ` over non-leading exponents `e`.
    pub fn step(&self) -> Option<Rational> {
        let lam = self.leading()?.0.clone();
        self.terms
            .keys()
            .skip(1)
            .map(|e| e - &lam)
            .reduce(|g, d| rational::gcd(&g, &d))
    }

    /// Reciprocal. Exact for monomials; otherwise correct up to
    /// `depth` exponent steps past the leading term.
    pub fn inv(&self, depth: u32) -> Result<Self, FieldError> {
        if self.terms.is_empty() {
            return Err(if self.is_exact() {
                FieldError::ZeroDivision
            } else {
                Undecidable::err("reciprocal of a number that is zero up to truncation")
            });
        }
        let (_, c0) = self.leading().unwrap();
        let lead = c0.recip();
        Ok(self.unit_power(&-Rational::one(), lead, depth))
    }

    /// `self / other`, with `other` inverted at `depth`.
    pub fn div(&self, other: &Self, depth: u32) -> Result<Self, FieldError> {
        if self.is_exact_zero() && !other.terms.is_empty() {
            return Ok(Self::zero());
        }
        Ok(self * &other.inv(depth)?)
    }

    /// Integer power; negative powers invert at `depth`.
    pub fn powi(&self, k: i64, depth: u32) -> Result<Self, FieldError> {
        if k < 0 {
            return self.powi(-k, depth)?.inv(depth);
        }
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Principal `n`-th root `b` with `bⁿ = self` up to truncation.
    ///
    /// The leading coefficient must have an exact rational `n`-th root.
    /// The result is exact when the operand is exact and the cut-off root
    /// reproduces it exactly.
    pub fn nth_root(&self, n: u32, depth: u32) -> Result<Self, FieldError> {
        assert!(n > 0, "root index must be positive");
        let Some((_, c0)) = self.leading() else {
            return if self.is_exact() {
                Ok(Self::zero())
            } else {
                Err(Undecidable::err("root of a number that is zero up to truncation"))
            };
        };
        if c0.is_negative() && n.is_multiple_of(2) {
            return Err(FieldError::NegativeRoot(c0.clone()));
        }
        let lead = rational::nth_root(c0, n).ok_or_else(|| FieldError::NotAnNthPower(c0.clone(), n))?;
        let alpha = Rational::new(1.into(), n.into());
        let root = self.unit_power(&alpha, lead, depth);
        if self.is_exact() && root.trunc.is_bounded() {
            let candidate = root.without_truncation();
            if candidate.powi(n as i64, depth)? == *self {
                return Ok(candidate);
            }
        }
        Ok(root)
    }

    /// `self^(p/q)` as the `q`-th root of the `p`-th power.
    pub fn pow_rational(&self, exponent: &Rational, depth: u32) -> Result<Self, FieldError> {
        let p = rational::to_i64(&Rational::from_integer(exponent.numer().clone()))
            .expect("exponent numerator fits in i64");
        let q: u32 = num_traits::ToPrimitive::to_u32(exponent.denom()).expect("exponent denominator fits in u32");
        let powered = self.powi(p, depth)?;
        if q == 1 {
            Ok(powered)
        } else {
            powered.nth_root(q, depth)
        }
    }

    /// `lead · ε^(λα) · (1 + r)^α` where `self = c0 ε^λ (1 + r)`.
    ///
    /// `lead` must already be `c0^α`. The caller guarantees `self` has a
    /// known leading term.
    fn unit_power(&self, alpha: &Rational, lead: Rational, depth: u32) -> Self {
        let (lam, c0) = self.leading().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let base_exp = &lam * alpha;
        let step = self.step();
        let depth_precision = step.as_ref().map(|s| s * rational::int(depth as i64));
        let trunc_precision = match &self.trunc {
            Truncation::Bounded(t) => Some(t - &lam),
            Truncation::Unbounded => None,
        };
        let precision = match (depth_precision, trunc_precision) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => return Self::monomial(lead, base_exp),
        };
        let trunc = Truncation::Bounded(&base_exp + &precision);
        let Some(step) = step else {
            return Self::from_terms([(base_exp, lead)], trunc);
        };
        let n_terms = rational::ceil(&(&precision / &step));
        let n_terms: usize = num_traits::ToPrimitive::to_usize(&n_terms).unwrap_or(0);
        let unit: Vec<Rational> = (0..n_terms)
            .map(|k| self.coeff(&(&lam + &step * rational::int(k as i64))) / &c0)
            .collect();
        let series = series_pow(&unit, alpha, n_terms);
        Self::from_terms(
            series
                .into_iter()
                .enumerate()
                .map(|(k, f)| (&base_exp + &step * rational::int(k as i64), f * &lead)),
            trunc,
        )
    }

    /// Total order on decidable comparisons: the sign of the leading
    /// coefficient of `other - self`.
    pub fn compare(&self, other: &Self) -> Result<Ordering, FieldError> {
        let diff = other - self;
        match diff.leading() {
            Some((_, c)) if c.is_positive() => Ok(Ordering::Less),
            Some(_) => Ok(Ordering::Greater),
            None if diff.is_exact() => Ok(Ordering::Equal),
            None => Err(Undecidable::err("operands agree up to truncation")),
        }
    }

    /// Standard part: the unique rational infinitely close to a limited number.
    pub fn st(&self) -> Result<Rational, FieldError> {
        if let Some((e, _)) = self.leading() {
            if e.is_negative() {
                return Err(FieldError::Unlimited);
            }
        }
        if let Truncation::Bounded(t) = &self.trunc {
            if !t.is_positive() {
                return Err(Undecidable::err("truncation hides the standard part"));
            }
        }
        Ok(self.coeff(&Rational::zero()))
    }

    /// Standard part plus the sign of `self - st(self)`.
    pub fn shadow(&self) -> Result<Shadow, FieldError> {
        let value = self.st()?;
        let rest = self - &Self::from_rational(value.clone());
        let residue = match rest.leading() {
            Some((_, c)) => rational::sign_of(c),
            None if rest.is_exact() => Sign::Zero,
            None => return Err(Undecidable::err("residue is hidden by truncation")),
        };
        Ok(Shadow { value, residue })
    }

    /// Transcendental law of homogeneity: keep only the dominant term.
    pub fn tlh(&self) -> Result<Self, FieldError> {
        let (e, c) = self.leading().ok_or(FieldError::ZeroInput)?;
        Ok(Self::monomial(c.clone(), e.clone()))
    }

    pub fn order_class(&self) -> Result<OrderClass, FieldError> {
        match self.leading() {
            Some((e, c)) => Ok(OrderClass {
                leading_exponent: e.clone(),
                sign: rational::sign_of(c),
            }),
            None if self.is_exact() => Ok(OrderClass {
                leading_exponent: Rational::zero(),
                sign: Sign::Zero,
            }),
            None => Err(Undecidable::err("truncation hides the leading term")),
        }
    }

    /// Zero or smaller in magnitude than every positive rational.
    pub fn is_infinitesimal(&self) -> Result<bool, FieldError> {
        match (self.leading(), &self.trunc) {
            (Some((e, _)), _) => Ok(e.is_positive()),
            (None, Truncation::Unbounded) => Ok(true),
            (None, Truncation::Bounded(t)) if t.is_positive() => Ok(true),
            (None, _) => Err(Undecidable::err("truncation hides the leading term")),
        }
    }

    /// Bounded in magnitude by some rational.
    pub fn is_limited(&self) -> Result<bool, FieldError> {
        match (self.leading(), &self.trunc) {
            (Some((e, _)), _) => Ok(!e.is_negative()),
            (None, Truncation::Unbounded) => Ok(true),
            (None, Truncation::Bounded(t)) if !t.is_negative() => Ok(true),
            (None, _) => Err(Undecidable::err("truncation hides the leading term")),
        }
    }

    /// Infinite closeness: `self - other` is infinitesimal.
    pub fn infinitely_close(&self, other: &Self) -> Result<bool, FieldError> {
        (self - other).is_infinitesimal()
    }

    /// Approximate value at a concrete small `eps`, for plotting.
    pub fn approx_at(&self, eps: f64) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| rational::to_f64(c) * eps.powf(rational::to_f64(e)))
            .sum()
    }
}

struct Undecidable;

impl Undecidable {
    fn err(why: &str) -> FieldError {
        FieldError::Undecidable(why.to_string())
    }
}

/// First `n` coefficients of `g^α` for a power series `g` with `g[0] = 1`.
///
/// Uses the recurrence from `g·f' = α·g'·f`:
/// `k·f_k = Σ_{j=1..k} (α·j − (k−j))·g_j·f_{k−j}`.
fn series_pow(g: &[Rational], alpha: &Rational, n: usize) -> Vec<Rational> {
    let mut f: Vec<Rational> = Vec::with_capacity(n);
    if n == 0 {
        return f;
    }
    f.push(Rational::one());
    for k in 1..n {
        let mut acc = Rational::zero();
        for j in 1..=k.min(g.len().saturating_sub(1)) {
            if g[j].is_zero() {
                continue;
            }
            let weight = alpha * rational::int(j as i64) - rational::int((k - j) as i64);
            acc += weight * &g[j] * &f[k - j];
        }
        f.push(acc / rational::int(k as i64));
    }
    f
}

fn add_impl(a: &LcNumber, b: &LcNumber, negate_b: bool) -> LcNumber {
    let trunc = a.trunc.clone().min(b.trunc.clone());
    let b_terms = b.terms.iter().map(|(e, c)| {
        let c = if negate_b { -c } else { c.clone() };
        (e.clone(), c)
    });
    LcNumber::from_terms(a.terms.clone().into_iter().chain(b_terms), trunc)
}

fn mul_impl(a: &LcNumber, b: &LcNumber) -> LcNumber {
    if a.is_exact_zero() || b.is_exact_zero() {
        return LcNumber::zero();
    }
    let trunc = a.trunc.shift(&b.lambda()).min(b.trunc.shift(&a.lambda()));
    let mut acc: BTreeMap<Rational, Rational> = BTreeMap::new();
    for (ea, ca) in &a.terms {
        for (eb, cb) in &b.terms {
            let e = ea + eb;
            if !trunc.admits(&e) {
                // b's exponents ascend, so the rest of this row is cut too
                break;
            }
            *acc.entry(e).or_insert_with(Rational::zero) += ca * cb;
        }
    }
    LcNumber::from_terms(acc, trunc)
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&LcNumber> for &LcNumber {
            type Output = LcNumber;
            fn $method(self, rhs: &LcNumber) -> LcNumber {
                $body(self, rhs)
            }
        }
        impl $trait<LcNumber> for LcNumber {
            type Output = LcNumber;
            fn $method(self, rhs: LcNumber) -> LcNumber {
                $body(&self, &rhs)
            }
        }
        impl $trait<&LcNumber> for LcNumber {
            type Output = LcNumber;
            fn $method(self, rhs: &LcNumber) -> LcNumber {
                $body(&self, rhs)
            }
        }
        impl $trait<LcNumber> for &LcNumber {
            type Output = LcNumber;
            fn $method(self, rhs: LcNumber) -> LcNumber {
                $body(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| add_impl(a, b, false));
forward_binop!(Sub, sub, |a, b| add_impl(a, b, true));
forward_binop!(Mul, mul, mul_impl);

impl Neg for &LcNumber {
    type Output = LcNumber;
    fn neg(self) -> LcNumber {
        self.scale(&-Rational::one())
    }
}

impl Neg for LcNumber {
    type Output = LcNumber;
    fn neg(self) -> LcNumber {
        -&self
    }
}

impl From<Rational> for LcNumber {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl From<i64> for LcNumber {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

// ---------------------------------------------------------------------------
// Canonical text form

fn fmt_eps(exponent: &Rational) -> String {
    if exponent.is_one() {
        "eps".to_string()
    } else if rational::is_integer(exponent) && exponent.is_positive() {
        format!("eps^{exponent}")
    } else {
        format!("eps^({exponent})")
    }
}

fn fmt_term(exponent: &Rational, coeff: &Rational) -> String {
    if exponent.is_zero() {
        return coeff.to_string();
    }
    let eps = fmt_eps(exponent);
    if coeff.is_one() {
        eps
    } else if *coeff == -Rational::one() {
        format!("-{eps}")
    } else {
        format!("{coeff}*{eps}")
    }
}

impl fmt::Display for LcNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            if first {
                f.write_str(&fmt_term(e, c))?;
                first = false;
            } else if c.is_negative() {
                write!(f, " - {}", fmt_term(e, &-c))?;
            } else {
                write!(f, " + {}", fmt_term(e, c))?;
            }
        }
        if let Truncation::Bounded(t) = &self.trunc {
            let o = if t.is_zero() {
                "O(1)".to_string()
            } else {
                format!("O({})", fmt_eps(t))
            };
            if first {
                f.write_str(&o)?;
            } else {
                write!(f, " + {o}")?;
            }
        } else if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Serialize for LcNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid number literal at byte {pos}: {msg}")]
pub struct ParseLcError {
    pub pos: usize,
    pub msg: String,
}

struct LiteralParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> LiteralParser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(w.as_bytes()) {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, msg: &str) -> Result<T, ParseLcError> {
        Err(ParseLcError {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    /// Unsigned integer, fraction `a/b`, or decimal.
    fn unsigned_number(&mut self) -> Result<Rational, ParseLcError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.') {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail("expected a number");
        }
        let mut text = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
        let save = self.pos;
        if self.eat(b'/') {
            self.skip_ws();
            let dstart = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if dstart == self.pos {
                self.pos = save;
                return self.fail("expected a denominator");
            }
            text.push('/');
            text.push_str(std::str::from_utf8(&self.src[dstart..self.pos]).unwrap());
        }
        match rational::parse_rational(&text) {
            Some(q) => Ok(q),
            None => {
                self.pos = start;
                self.fail("malformed number")
            }
        }
    }

    fn exponent(&mut self) -> Result<Rational, ParseLcError> {
        if self.eat(b'(') {
            let neg = self.eat(b'-');
            if !neg {
                self.eat(b'+');
            }
            let q = self.unsigned_number()?;
            if !self.eat(b')') {
                return self.fail("expected ')'");
            }
            Ok(if neg { -q } else { q })
        } else {
            let neg = self.eat(b'-');
            let q = self.unsigned_number()?;
            Ok(if neg { -q } else { q })
        }
    }

    /// `eps` or `eps^k`, returning the exponent.
    fn eps_factor(&mut self) -> Result<Rational, ParseLcError> {
        if !self.eat_word("eps") {
            return self.fail("expected 'eps'");
        }
        if self.eat(b'^') {
            self.exponent()
        } else {
            Ok(Rational::one())
        }
    }

    fn parse(mut self) -> Result<LcNumber, ParseLcError> {
        let mut terms = Vec::new();
        let mut trunc = Truncation::Unbounded;
        let mut negative = self.eat(b'-');
        if !negative {
            self.eat(b'+');
        }
        loop {
            match self.peek() {
                Some(b'O') => {
                    self.pos += 1;
                    if !self.eat(b'(') {
                        return self.fail("expected '(' after O");
                    }
                    let t = if self.peek() == Some(b'1') {
                        self.pos += 1;
                        Rational::zero()
                    } else {
                        self.eps_factor()?
                    };
                    if !self.eat(b')') {
                        return self.fail("expected ')'");
                    }
                    trunc = trunc.min(Truncation::Bounded(t));
                }
                Some(b'e') => {
                    let e = self.eps_factor()?;
                    terms.push((e, if negative { -Rational::one() } else { Rational::one() }));
                }
                Some(_) => {
                    let c = self.unsigned_number()?;
                    let e = if self.eat(b'*') { self.eps_factor()? } else { Rational::zero() };
                    terms.push((e, if negative { -c } else { c }));
                }
                None => return self.fail("expected a term"),
            }
            match self.peek() {
                None => break,
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                Some(_) => return self.fail("expected '+' or '-'"),
            }
            self.pos += 1;
        }
        Ok(LcNumber::from_terms(terms, trunc))
    }
}

impl FromStr for LcNumber {
    type Err = ParseLcError;

    /// Parses the canonical text form, e.g. `3 + 2*eps - eps^(3/2) + O(eps^2)`.
    fn from_str(s: &str) -> Result<Self, ParseLcError> {
        LiteralParser {
            src: s.as_bytes(),
            pos: 0,
        }
        .parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn lc(s: &str) -> LcNumber {
        s.parse().unwrap()
    }

    #[test]
    fn add_examples() {
        let eps = LcNumber::eps();
        assert_eq!(&eps + &LcNumber::zero(), eps);
        assert_eq!(LcNumber::from_int(3) + LcNumber::eps(), lc("3 + eps"));
        // 1 - eps + O(eps^2) plus eps
        assert_eq!(lc("1 - eps + O(eps^2)") + LcNumber::eps(), lc("1 + O(eps^2)"));
    }

    #[test]
    fn mul_examples() {
        let x = LcNumber::from_int(2) + LcNumber::eps();
        let y = LcNumber::from_int(3) + LcNumber::eps();
        let lhs = &x * &y - LcNumber::from_int(6);
        assert_eq!(lhs, lc("5*eps + eps^2"));
        assert_eq!(LcNumber::eps() * LcNumber::eps(), LcNumber::eps_pow(int(2)));
        let back = lc("1 + eps") * lc("1 - eps + eps^2 + O(eps^3)");
        assert_eq!(back, lc("1 + O(eps^3)"));
    }

    #[test]
    fn mul_truncation_rule() {
        // T = min(T_a + λ_b, T_b + λ_a)
        let a = lc("eps + O(eps^3)");
        let b = lc("eps^(-2) + 1");
        assert_eq!((&a * &b).truncation(), &Truncation::Bounded(int(1)));
        assert_eq!(a * b, lc("eps^(-1) + O(eps)"));
    }

    #[test]
    fn inv_examples() {
        let h = LcNumber::eps().inv(DEFAULT_DEPTH).unwrap();
        assert_eq!(h, LcNumber::eps_pow(int(-1)));
        assert!(h.is_exact());
        assert_eq!(LcNumber::from_int(2).inv(3).unwrap(), LcNumber::from_rational(ratio(1, 2)));
        let r = lc("1 + eps").inv(3).unwrap();
        assert_eq!(r, lc("1 - eps + eps^2 + O(eps^3)"));
        assert_eq!(r * lc("1 + eps"), lc("1 + O(eps^3)"));
    }

    #[test]
    fn inv_errors() {
        assert_eq!(LcNumber::zero().inv(4), Err(FieldError::ZeroDivision));
        assert!(matches!(LcNumber::big_o(int(2)).inv(4), Err(FieldError::Undecidable(_))));
    }

    #[test]
    fn inv_respects_operand_truncation() {
        // 1 + eps + O(eps^2): only relative precision 2 is known
        let r = lc("1 + eps + O(eps^2)").inv(10).unwrap();
        assert_eq!(r, lc("1 - eps + O(eps^2)"));
    }

    #[test]
    fn inv_fractional_granularity() {
        let a = lc("1 + eps^(1/2)");
        let r = a.inv(4).unwrap();
        assert_eq!(r, lc("1 - eps^(1/2) + eps - eps^(3/2) + O(eps^2)"));
    }

    #[test]
    fn compare_examples() {
        let micro = LcNumber::from_rational(ratio(1, 1_000_000));
        assert_eq!(LcNumber::eps().compare(&micro), Ok(Ordering::Less));
        assert_eq!(LcNumber::from_int(3).compare(&LcNumber::from_int(3)), Ok(Ordering::Equal));
        assert_eq!(LcNumber::eps().compare(&LcNumber::eps_pow(int(2))), Ok(Ordering::Greater));
        let a = lc("1 + O(eps)");
        assert!(matches!(a.compare(&LcNumber::one()), Err(FieldError::Undecidable(_))));
    }

    #[test]
    fn st_examples() {
        assert_eq!(lc("2 + eps").st(), Ok(int(2)));
        assert_eq!(LcNumber::from_int(5).st(), Ok(int(5)));
        assert_eq!(lc("eps + eps^2").st(), Ok(int(0)));
        assert_eq!(lc("eps^(-1) + 3").st(), Err(FieldError::Unlimited));
        assert!(matches!(lc("O(1)").st(), Err(FieldError::Undecidable(_))));
        assert_eq!(lc("3 + O(eps)").st(), Ok(int(3)));
    }

    #[test]
    fn shadow_residue() {
        let s = lc("3 - eps^2").shadow().unwrap();
        assert_eq!(s, Shadow { value: int(3), residue: Sign::Negative });
        assert_eq!(LcNumber::from_int(4).shadow().unwrap().residue, Sign::Zero);
        assert!(lc("3 + O(eps)").shadow().is_err());
    }

    #[test]
    fn tlh_examples() {
        let a0 = LcNumber::from_int(7);
        assert_eq!((&a0 + &LcNumber::eps()).tlh(), Ok(a0));
        assert_eq!(lc("eps + eps^2").tlh(), Ok(LcNumber::eps()));
        assert_eq!(LcNumber::zero().tlh(), Err(FieldError::ZeroInput));
        assert_eq!(lc("O(eps)").tlh(), Err(FieldError::ZeroInput));
    }

    #[test]
    fn root_examples() {
        let r = LcNumber::eps().nth_root(2, DEFAULT_DEPTH).unwrap();
        assert_eq!(r, LcNumber::eps_pow(ratio(1, 2)));
        assert_eq!(&r * &r, LcNumber::eps());
        assert_eq!(LcNumber::from_int(4).nth_root(2, 3).unwrap(), LcNumber::from_int(2));
        let r = lc("4 + eps").nth_root(2, 3).unwrap();
        assert_eq!(r, lc("2 + 1/4*eps - 1/64*eps^2 + O(eps^3)"));
        assert_eq!(&r * &r, lc("4 + eps + O(eps^3)"));
    }

    #[test]
    fn root_recovers_exact_square() {
        let a = lc("1 + eps");
        let sq = &a * &a;
        assert_eq!(sq.nth_root(2, DEFAULT_DEPTH).unwrap(), a);
        let c = lc("-2 + eps^2");
        assert_eq!(c.powi(3, 4).unwrap().nth_root(3, DEFAULT_DEPTH).unwrap(), c);
    }

    #[test]
    fn root_errors() {
        assert_eq!(
            LcNumber::from_int(2).nth_root(2, 4),
            Err(FieldError::NotAnNthPower(int(2), 2))
        );
        assert_eq!(lc("-4 + eps").nth_root(2, 4), Err(FieldError::NegativeRoot(int(-4))));
        assert_eq!(lc("-8 + eps").nth_root(3, 2).unwrap(), lc("-2 + 1/12*eps + O(eps^2)"));
    }

    #[test]
    fn classification() {
        let eps = LcNumber::eps();
        assert_eq!(eps.is_infinitesimal(), Ok(true));
        assert_eq!(eps.inv(4).unwrap().is_limited(), Ok(false));
        assert_eq!(LcNumber::from_int(3).is_infinitesimal(), Ok(false));
        let x = LcNumber::from_rational(ratio(5, 3));
        let delta = lc("-7*eps^(3/2) + eps^3");
        assert_eq!((&x + &delta).infinitely_close(&x), Ok(true));
        assert!(lc("O(eps^(-1))").is_limited().is_err());
        let oc = lc("-eps^(1/3) + 1/2*eps").order_class().unwrap();
        assert_eq!(oc.leading_exponent, ratio(1, 3));
        assert_eq!(oc.sign, Sign::Negative);
    }

    #[test]
    fn canonical_text_form() {
        let n = LcNumber::from_terms(
            [
                (int(-1), int(1)),
                (int(0), ratio(-3, 2)),
                (ratio(1, 2), int(2)),
                (int(1), int(-1)),
                (int(2), int(5)),
            ],
            Truncation::Bounded(int(3)),
        );
        assert_eq!(n.to_string(), "eps^(-1) - 3/2 + 2*eps^(1/2) - eps + 5*eps^2 + O(eps^3)");
        assert_eq!(n.to_string().parse::<LcNumber>().unwrap(), n);
        assert_eq!(LcNumber::zero().to_string(), "0");
        assert_eq!(LcNumber::big_o(int(0)).to_string(), "O(1)");
        assert_eq!(lc("-eps").to_string(), "-eps");
        assert_eq!(lc(" 3 +2*eps-eps^2 ").to_string(), "3 + 2*eps - eps^2");
        assert_eq!(lc("eps + eps").to_string(), "2*eps");
    }

    #[test]
    fn literal_errors() {
        assert!("".parse::<LcNumber>().is_err());
        assert!("3 +".parse::<LcNumber>().is_err());
        assert!("3 * x".parse::<LcNumber>().is_err());
        let e = "1 + epx".parse::<LcNumber>().unwrap_err();
        assert_eq!(e.pos, 4);
    }

    #[test]
    fn series_pow_matches_binomial() {
        // (1 + t)^(1/2) = 1 + t/2 - t^2/8 + t^3/16
        let g = vec![int(1), int(1)];
        let f = series_pow(&g, &ratio(1, 2), 4);
        assert_eq!(f, vec![int(1), ratio(1, 2), ratio(-1, 8), ratio(1, 16)]);
    }
}
