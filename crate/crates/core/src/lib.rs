//! Exact arithmetic in an infinitesimal-enriched ordered field.
//!
//! The field is modelled by truncated Levi-Civita series in a fixed
//! positive infinitesimal `ε` with exact rational exponents and
//! coefficients. On top of it sit an expression language whose
//! evaluation carries finite rules over to infinitesimal and unlimited
//! values, a differentiation engine built on the standard part, the
//! classical shadow constructions, and a decidable model of sequences
//! of rationals modulo eventually-zero sequences.

pub mod calculus;
pub mod expr;
pub mod field;
pub mod rational;
pub mod sequence;
pub mod shadows;
pub mod svg;

use serde::{Serialize, Serializer};

pub use expr::{parse, Expr};
pub use field::{FieldError, LcNumber, OrderClass, Shadow, Truncation, DEFAULT_DEPTH};
pub use rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Negative => "negative",
            Sign::Zero => "zero",
            Sign::Positive => "positive",
        })
    }
}

pub(crate) fn serialize_rational<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(q)
}
