//! Sequences of rationals, the raw material of the infinitesimals.
//!
//! The supported class is decidable: rational functions `p(n)/q(n)` with
//! integer coefficients, plus decimal-truncation streams of a declared
//! constant (`3.1, 3.14, 3.141, ...` for π). Two sequences that differ
//! only at finitely many indices are identified; a sequence tending to
//! zero is a null sequence and represents an infinitesimal.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::expr::{parse, Expr, SyntaxError};
use crate::field::{FieldError, LcNumber};
use crate::rational::{self, Rational};
use crate::Sign;

/// Known digits of a decimal stream when a literal does not say.
pub const DEFAULT_DIGITS: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("unsupported for {0}")]
    UnsupportedKind(String),
    #[error("sequence is unbounded")]
    Unbounded,
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("not a rational function of n: {0}")]
    NotRationalFunction(String),
    #[error("unknown constant '{0}'")]
    UnknownConstant(String),
    #[error("digits {0} do not match the declared constant")]
    DigitsMismatch(String),
    #[error("bad sequence literal: {0}")]
    Literal(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Univariate polynomial in `n`, coefficients lowest degree first, no
/// trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Poly(Vec<Rational>);

impl Poly {
    fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    fn constant(q: Rational) -> Self {
        Poly::new(vec![q])
    }

    fn n() -> Self {
        Poly::new(vec![Rational::zero(), Rational::one()])
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lead(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    fn coeff(&self, k: usize) -> Rational {
        self.0.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    fn add(&self, o: &Poly) -> Poly {
        let len = self.0.len().max(o.0.len());
        Poly::new((0..len).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    fn scale(&self, k: &Rational) -> Poly {
        Poly::new(self.0.iter().map(|c| c * k).collect())
    }

    fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly(vec![]);
        }
        let mut c = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::constant(Rational::one()), |acc, _| acc.mul(self))
    }

    fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quot = vec![Rational::zero(); self.0.len().saturating_sub(dd).max(1)];
        while let Some(rd) = rem.degree().filter(|&rd| rd >= dd) {
            let k = rem.lead() / d.lead();
            quot[rd - dd] = k.clone();
            let mut shifted = vec![Rational::zero(); rd - dd];
            shifted.extend(d.0.iter().map(|c| c * &k));
            rem = rem.sub(&Poly::new(shifted));
        }
        (Poly::new(quot), rem)
    }

    fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a
    }

    fn eval(&self, n: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * n + c)
    }

    /// Sign of `p(n)` for all sufficiently large `n`.
    fn eventual_sign(&self) -> Sign {
        rational::sign_of(&self.lead())
    }

    fn integer_coeffs(&self) -> Vec<BigInt> {
        self.0.iter().map(|c| c.to_integer()).collect()
    }

    fn to_expr(&self) -> Expr {
        let mut out: Option<Expr> = None;
        for (k, c) in self.0.iter().enumerate().rev().filter(|(_, c)| !c.is_zero()) {
            let mono = match k {
                0 => None,
                1 => Some(Expr::var("n")),
                _ => Some(Expr::var("n").powi(k as i64)),
            };
            let mag = c.abs();
            let term = match mono {
                Some(m) if mag.is_one() => m,
                Some(m) => Expr::num(mag) * m,
                None => Expr::num(mag),
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

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev().filter(|(_, c)| !c.is_zero()) {
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let var = match k {
                0 => String::new(),
                1 => "n".to_string(),
                _ => format!("n^{k}"),
            };
            match (var.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{var}")?,
                (false, false) => write!(f, "{mag}*{var}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A constant known only through its digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Constant {
    Pi,
    Sqrt2,
}

impl Constant {
    pub fn tag(self) -> &'static str {
        match self {
            Constant::Pi => "pi",
            Constant::Sqrt2 => "sqrt2",
        }
    }

    /// `floor(c · 10^k)`.
    pub fn scaled_floor(self, k: usize) -> BigInt {
        const GUARD: usize = 10;
        match self {
            Constant::Sqrt2 => (BigInt::from(2) * BigInt::from(10).pow(2 * k as u32)).sqrt(),
            Constant::Pi => {
                let unity = BigInt::from(10).pow((k + GUARD) as u32);
                let pi = (arctan_inv(5, &unity) * 16) - (arctan_inv(239, &unity) * 4);
                pi / BigInt::from(10).pow(GUARD as u32)
            }
        }
    }

    /// The first `k` decimal digits after the point.
    pub fn digits(self, k: usize) -> String {
        let s = self.scaled_floor(k).to_string();
        s[s.len() - k..].to_string()
    }

    fn integer_part(self) -> BigInt {
        self.scaled_floor(0)
    }
}

impl FromStr for Constant {
    type Err = SeqError;
    fn from_str(s: &str) -> Result<Self, SeqError> {
        match s {
            "pi" => Ok(Constant::Pi),
            "sqrt2" => Ok(Constant::Sqrt2),
            other => Err(SeqError::UnknownConstant(other.to_string())),
        }
    }
}

/// `unity · arctan(1/x)` by its alternating series, truncated toward zero.
fn arctan_inv(x: i64, unity: &BigInt) -> BigInt {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = unity / &x;
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    let mut add = true;
    while !power.is_zero() {
        let term = &power / BigInt::from(k);
        if add {
            sum += term;
        } else {
            sum -= term;
        }
        add = !add;
        power /= &x2;
        k += 2;
    }
    sum
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceKind {
    /// `p(n)/q(n)` in lowest terms with primitive integer coefficients
    /// and positive leading coefficient of `q`.
    RationalFunction { p: Vec<BigInt>, q: Vec<BigInt> },
    /// `floor(c·10^n)/10^n + shift` for `n` up to the number of known digits.
    DecimalTruncation {
        constant: Constant,
        digits: String,
        shift: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSequence {
    kind: SequenceKind,
    /// First index from which every term is defined.
    offset: u64,
}

impl RationalSequence {
    fn from_polys(p: Poly, q: Poly) -> Result<Self, SeqError> {
        if q.is_zero() {
            return Err(SeqError::ZeroDenominator);
        }
        let (mut p, mut q) = if p.is_zero() {
            (p, Poly::constant(Rational::one()))
        } else {
            let g = p.gcd(&q);
            (p.divrem(&g).0, q.divrem(&g).0)
        };
        // clear denominators, then strip the content
        let mut den = BigInt::one();
        for c in p.0.iter().chain(&q.0) {
            den = den.lcm(c.denom());
        }
        let mut content = BigInt::zero();
        for c in p.0.iter().chain(&q.0) {
            content = content.gcd(&(c * Rational::from_integer(den.clone())).to_integer());
        }
        let mut k = Rational::new(den, content);
        if q.lead().is_negative() {
            k = -k;
        }
        p = p.scale(&k);
        q = q.scale(&k);
        let offset = first_defined_index(&q);
        Ok(RationalSequence {
            kind: SequenceKind::RationalFunction {
                p: p.integer_coeffs(),
                q: q.integer_coeffs(),
            },
            offset,
        })
    }

    /// `⟨p(n)/q(n)⟩` from integer coefficients, lowest degree first.
    pub fn rational_function(p: &[i64], q: &[i64]) -> Result<Self, SeqError> {
        let poly = |c: &[i64]| Poly::new(c.iter().map(|&x| rational::int(x)).collect());
        Self::from_polys(poly(p), poly(q))
    }

    /// The constant sequence `⟨c⟩`.
    pub fn constant(c: Rational) -> Self {
        Self::from_polys(Poly::constant(c), Poly::constant(Rational::one())).expect("nonzero denominator")
    }

    /// `⟨1/n⟩`, the null sequence that corresponds to `ε`.
    pub fn reciprocal_n() -> Self {
        Self::from_polys(Poly::constant(Rational::one()), Poly::n()).expect("nonzero denominator")
    }

    /// Decimal truncations of `constant` with `digits` known digits.
    pub fn decimal(constant: Constant, digits: usize) -> Self {
        RationalSequence {
            kind: SequenceKind::DecimalTruncation {
                constant,
                digits: constant.digits(digits),
                shift: Rational::zero(),
            },
            offset: 1,
        }
    }

    /// Decimal truncations from explicitly given digits after the point,
    /// checked against the digit oracle.
    pub fn decimal_with_digits(constant: Constant, digits: &str) -> Result<Self, SeqError> {
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || constant.digits(digits.len()) != digits {
            return Err(SeqError::DigitsMismatch(digits.to_string()));
        }
        Ok(RationalSequence {
            kind: SequenceKind::DecimalTruncation {
                constant,
                digits: digits.to_string(),
                shift: Rational::zero(),
            },
            offset: 1,
        })
    }

    /// Builds `⟨e(n)⟩` for an expression in the single variable `n`.
    pub fn from_expr(e: &Expr) -> Result<Self, SeqError> {
        let (p, q) = to_fraction(e)?;
        Self::from_polys(p, q)
    }

    pub fn kind(&self) -> &SequenceKind {
        &self.kind
    }

    pub fn offset(&self) -> u64 {
        self.offset
    }

    fn polys(&self) -> Option<(Poly, Poly)> {
        match &self.kind {
            SequenceKind::RationalFunction { p, q } => {
                let lift = |c: &[BigInt]| Poly::new(c.iter().map(|x| Rational::from_integer(x.clone())).collect());
                Some((lift(p), lift(q)))
            }
            SequenceKind::DecimalTruncation { .. } => None,
        }
    }

    fn require_polys(&self, op: &str) -> Result<(Poly, Poly), SeqError> {
        self.polys()
            .ok_or_else(|| SeqError::UnsupportedKind(format!("{op} on decimal stream {self}")))
    }

    /// The `n`-th term, if `n` is at or past the offset and (for decimal
    /// streams) within the known digits.
    pub fn term(&self, n: u64) -> Option<Rational> {
        if n < self.offset {
            return None;
        }
        match &self.kind {
            SequenceKind::RationalFunction { .. } => {
                let (p, q) = self.polys()?;
                let n = Rational::from_integer(BigInt::from(n));
                Some(p.eval(&n) / q.eval(&n))
            }
            SequenceKind::DecimalTruncation { constant, digits, shift } => {
                let k = usize::try_from(n).ok().filter(|&k| k <= digits.len())?;
                let scaled: BigInt = format!("{}{}", constant.integer_part(), &digits[..k]).parse().ok()?;
                Some(Rational::new(scaled, BigInt::from(10).pow(k as u32)) + shift)
            }
        }
    }

    /// Degree pair `(deg p, deg q)` of a rational-function sequence.
    pub fn degrees(&self) -> Option<(Option<usize>, usize)> {
        let (p, q) = self.polys()?;
        Some((p.degree(), q.degree().unwrap_or(0)))
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.degrees(), Some((None | Some(0), 0)))
    }
}

fn first_defined_index(q: &Poly) -> u64 {
    // every integer root lies below 1 + max |q_i / q_lead|
    let lead = q.lead().abs();
    let bound = q.0.iter().map(|c| c.abs() / &lead).max().unwrap_or_else(Rational::zero) + Rational::one();
    let bound = rational::ceil(&bound).to_u64().unwrap_or(u64::MAX);
    (1..=bound)
        .filter(|&n| q.eval(&Rational::from_integer(BigInt::from(n))).is_zero())
        .max()
        .map_or(1, |n| n + 1)
}

fn to_fraction(e: &Expr) -> Result<(Poly, Poly), SeqError> {
    let one = || Poly::constant(Rational::one());
    Ok(match e {
        Expr::Var(v) if v == "n" => (Poly::n(), one()),
        Expr::Var(v) => return Err(SeqError::NotRationalFunction(format!("variable '{v}'"))),
        Expr::Num(q) => (Poly::constant(q.clone()), one()),
        Expr::Neg(a) => {
            let (p, q) = to_fraction(a)?;
            (p.neg(), q)
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let (p1, q1) = to_fraction(a)?;
            let (p2, q2) = to_fraction(b)?;
            let (l, r) = (p1.mul(&q2), p2.mul(&q1));
            let p = if matches!(e, Expr::Add(..)) { l.add(&r) } else { l.sub(&r) };
            (p, q1.mul(&q2))
        }
        Expr::Mul(a, b) => {
            let (p1, q1) = to_fraction(a)?;
            let (p2, q2) = to_fraction(b)?;
            (p1.mul(&p2), q1.mul(&q2))
        }
        Expr::Div(a, b) => {
            let (p1, q1) = to_fraction(a)?;
            let (p2, q2) = to_fraction(b)?;
            if p2.is_zero() {
                return Err(SeqError::ZeroDenominator);
            }
            (p1.mul(&q2), q1.mul(&p2))
        }
        Expr::Pow(a, k) => {
            let k = rational::to_i64(k)
                .and_then(|k| i32::try_from(k).ok())
                .ok_or_else(|| SeqError::NotRationalFunction(e.to_string()))?;
            let (p, q) = to_fraction(a)?;
            let m = k.unsigned_abs();
            if k >= 0 {
                (p.pow(m), q.pow(m))
            } else if p.is_zero() {
                return Err(SeqError::ZeroDenominator);
            } else {
                (q.pow(m), p.pow(m))
            }
        }
        Expr::Sqrt(_) => return Err(SeqError::NotRationalFunction(e.to_string())),
    })
}

impl fmt::Display for RationalSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SequenceKind::RationalFunction { .. } => {
                let (p, q) = self.polys().expect("rational function");
                let wrap = |x: &Poly| {
                    if x.0.iter().filter(|c| !c.is_zero()).count() > 1 {
                        format!("({x})")
                    } else {
                        x.to_string()
                    }
                };
                if q.degree() == Some(0) && q.lead().is_one() {
                    write!(f, "{p}")
                } else {
                    write!(f, "{}/{}", wrap(&p), wrap(&q))
                }
            }
            SequenceKind::DecimalTruncation { constant, digits, shift } => {
                write!(f, "const:{}:{}", constant.tag(), digits.len())?;
                match rational::sign_of(shift) {
                    Sign::Zero => Ok(()),
                    Sign::Positive => write!(f, " + {shift}"),
                    Sign::Negative => write!(f, " - {}", -shift),
                }
            }
        }
    }
}

impl Serialize for RationalSequence {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for RationalSequence {
    type Err = SeqError;

    /// `poly(n)/poly(n)` in the expression grammar, or `const:TAG[:DIGITS]`.
    fn from_str(s: &str) -> Result<Self, SeqError> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("const:") {
            let mut parts = rest.split(':');
            let constant: Constant = parts.next().unwrap_or_default().parse()?;
            let digits = match parts.next() {
                Some(d) => d.parse::<usize>().map_err(|_| SeqError::Literal(s.to_string()))?,
                None => DEFAULT_DIGITS,
            };
            if parts.next().is_some() || digits == 0 {
                return Err(SeqError::Literal(s.to_string()));
            }
            return Ok(RationalSequence::decimal(constant, digits));
        }
        Self::from_expr(&parse(s)?)
    }
}

/// Termwise sum. A decimal stream may only be shifted by a constant.
pub fn seq_add(a: &RationalSequence, b: &RationalSequence) -> Result<RationalSequence, SeqError> {
    match (&a.kind, &b.kind) {
        (SequenceKind::RationalFunction { .. }, SequenceKind::RationalFunction { .. }) => {
            let (p1, q1) = a.require_polys("add")?;
            let (p2, q2) = b.require_polys("add")?;
            RationalSequence::from_polys(p1.mul(&q2).add(&p2.mul(&q1)), q1.mul(&q2))
        }
        (SequenceKind::DecimalTruncation { .. }, SequenceKind::RationalFunction { .. }) => shift_decimal(a, b),
        (SequenceKind::RationalFunction { .. }, SequenceKind::DecimalTruncation { .. }) => shift_decimal(b, a),
        _ => Err(SeqError::UnsupportedKind(format!("sum of decimal streams {a} and {b}"))),
    }
}

fn shift_decimal(dec: &RationalSequence, c: &RationalSequence) -> Result<RationalSequence, SeqError> {
    let (p, q) = c.require_polys("add")?;
    if !c.is_constant() {
        return Err(SeqError::UnsupportedKind(format!("sum of decimal stream {dec} and non-constant {c}")));
    }
    let SequenceKind::DecimalTruncation { constant, digits, shift } = &dec.kind else {
        unreachable!("caller passes a decimal stream")
    };
    Ok(RationalSequence {
        kind: SequenceKind::DecimalTruncation {
            constant: *constant,
            digits: digits.clone(),
            shift: shift + p.coeff(0) / q.coeff(0),
        },
        offset: dec.offset,
    })
}

/// Termwise product of two rational-function sequences.
pub fn seq_mul(a: &RationalSequence, b: &RationalSequence) -> Result<RationalSequence, SeqError> {
    let (p1, q1) = a.require_polys("product")?;
    let (p2, q2) = b.require_polys("product")?;
    RationalSequence::from_polys(p1.mul(&p2), q1.mul(&q2))
}

pub fn seq_neg(a: &RationalSequence) -> Result<RationalSequence, SeqError> {
    let (p, q) = a.require_polys("negation")?;
    RationalSequence::from_polys(p.neg(), q)
}

/// Tends to zero.
pub fn is_null(a: &RationalSequence) -> Result<bool, SeqError> {
    match &a.kind {
        SequenceKind::RationalFunction { .. } => {
            let (p, q) = a.require_polys("is_null")?;
            Ok(p.degree().is_none_or(|dp| dp < q.degree().unwrap_or(0)))
        }
        // a stream within 10^-k of c + shift, with c irrational, never nears 0
        SequenceKind::DecimalTruncation { .. } => Ok(false),
    }
}

/// Zero from some index on; in this class, identically zero.
pub fn eventually_zero(a: &RationalSequence) -> Result<bool, SeqError> {
    let (p, _) = a.require_polys("eventually_zero")?;
    Ok(p.is_zero())
}

/// `a_n > b_n` for all sufficiently large `n`.
pub fn eventually_dominates(a: &RationalSequence, b: &RationalSequence) -> Result<bool, SeqError> {
    let (p1, q1) = a.require_polys("eventually_dominates")?;
    let (p2, q2) = b.require_polys("eventually_dominates")?;
    // q1, q2 have positive leading coefficients, so sign(a - b) = sign(p1 q2 - p2 q1)
    Ok(p1.mul(&q2).sub(&p2.mul(&q1)).eventual_sign() == Sign::Positive)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StandardPart {
    Rational {
        #[serde(serialize_with = "crate::serialize_rational")]
        value: Rational,
    },
    Constant {
        constant: Constant,
        #[serde(serialize_with = "crate::serialize_rational")]
        shift: Rational,
    },
}

impl fmt::Display for StandardPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StandardPart::Rational { value } => write!(f, "{value}"),
            StandardPart::Constant { constant, shift } => {
                write!(f, "{}", constant.tag())?;
                match rational::sign_of(shift) {
                    Sign::Zero => Ok(()),
                    Sign::Positive => write!(f, " + {shift}"),
                    Sign::Negative => write!(f, " - {}", -shift),
                }
            }
        }
    }
}

/// A sequence as a constant plus a null sequence of known eventual sign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub standard_part: StandardPart,
    pub residue_sign: Sign,
}

pub fn decompose(a: &RationalSequence) -> Result<Decomposition, SeqError> {
    match &a.kind {
        SequenceKind::RationalFunction { .. } => {
            let (p, q) = a.require_polys("decompose")?;
            let dq = q.degree().unwrap_or(0);
            let limit = match p.degree() {
                Some(dp) if dp > dq => return Err(SeqError::Unbounded),
                Some(dp) if dp == dq => p.lead() / q.lead(),
                _ => Rational::zero(),
            };
            // a_n - L = (p - L q)/q and q is eventually positive
            let residue = p.sub(&q.scale(&limit));
            Ok(Decomposition {
                standard_part: StandardPart::Rational { value: limit },
                residue_sign: residue.eventual_sign(),
            })
        }
        SequenceKind::DecimalTruncation { constant, shift, .. } => Ok(Decomposition {
            standard_part: StandardPart::Constant {
                constant: *constant,
                shift: shift.clone(),
            },
            // truncations of an irrational fall strictly short of it
            residue_sign: Sign::Negative,
        }),
    }
}

/// The field element of `⟨p(n)/q(n)⟩` under `n = 1/ε`, expanded in
/// powers of `ε` with `depth` steps kept.
pub fn asymptotic_embed(a: &RationalSequence, depth: u32) -> Result<LcNumber, SeqError> {
    let (p, q) = a.require_polys("asymptotic_embed")?;
    let lift = |x: &Poly| {
        LcNumber::from_terms(
            x.0.iter()
                .enumerate()
                .map(|(k, c)| (-rational::int(k as i64), c.clone())),
            crate::Truncation::Unbounded,
        )
    };
    Ok(lift(&p).div(&lift(&q), depth)?)
}

/// Expression `p(n)/q(n)` for a rational-function sequence.
pub fn to_expr(a: &RationalSequence) -> Result<Expr, SeqError> {
    let (p, q) = a.require_polys("to_expr")?;
    Ok(if q.degree() == Some(0) && q.lead().is_one() {
        p.to_expr()
    } else {
        p.to_expr() / q.to_expr()
    })
}
