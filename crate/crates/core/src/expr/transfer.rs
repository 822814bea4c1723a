//! Equational transfer: an identity between terms that holds at rational
//! points must also hold at infinitesimal and unlimited points.

use std::cmp::Ordering;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::poly::{MultiPoly, PolyError};
use super::{eval_field, eval_rational, Binding, Expr, RationalBinding};
use crate::field::{LcNumber, DEFAULT_DEPTH};
use crate::rational::{self, Rational};

const DEFAULT_SEED: u64 = 0x1e1b_1701;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Realm {
    Rational,
    Field,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub realm: Realm,
    /// `(variable, value)` in canonical text form.
    pub binding: Vec<(String, String)>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum TransferOutcome {
    Pass,
    Fail(Counterexample),
    /// The two sides agree up to truncation only.
    Undecidable(Counterexample),
    /// No trial in some realm could be evaluated on both sides.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferReport {
    pub outcome: TransferOutcome,
    pub rational_trials: usize,
    pub field_trials: usize,
    /// Trials where a side failed to evaluate (e.g. division by zero).
    pub skipped: usize,
}

impl TransferReport {
    pub fn passed(&self) -> bool {
        matches!(self.outcome, TransferOutcome::Pass)
    }
}

/// Checks `lhs = rhs` at `trials` random rational points and at `trials`
/// random points where at least one variable is infinitesimal or
/// unlimited. Deterministic for a given input.
pub fn transfer_check(lhs: &Expr, rhs: &Expr, trials: usize) -> TransferReport {
    transfer_check_seeded(lhs, rhs, trials, DEFAULT_SEED)
}

pub fn transfer_check_seeded(lhs: &Expr, rhs: &Expr, trials: usize, seed: u64) -> TransferReport {
    let mut vars = lhs.free_vars();
    vars.extend(rhs.free_vars());
    let vars: Vec<String> = vars.into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = TransferReport {
        outcome: TransferOutcome::Pass,
        rational_trials: 0,
        field_trials: 0,
        skipped: 0,
    };

    for _ in 0..trials {
        let b: RationalBinding = vars.iter().map(|v| (v.clone(), random_rational(&mut rng))).collect();
        let (Ok(l), Ok(r)) = (eval_rational(lhs, &b), eval_rational(rhs, &b)) else {
            report.skipped += 1;
            continue;
        };
        report.rational_trials += 1;
        if l != r {
            report.outcome = TransferOutcome::Fail(Counterexample {
                realm: Realm::Rational,
                binding: b.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
                lhs: l.to_string(),
                rhs: r.to_string(),
            });
            return report;
        }
    }

    for i in 0..trials {
        let forced = if vars.is_empty() { usize::MAX } else { i % vars.len() };
        let b: Binding = vars
            .iter()
            .enumerate()
            .map(|(j, v)| (v.clone(), random_field_value(&mut rng, j == forced)))
            .collect();
        let (Ok(l), Ok(r)) = (eval_field(lhs, &b, DEFAULT_DEPTH), eval_field(rhs, &b, DEFAULT_DEPTH)) else {
            report.skipped += 1;
            continue;
        };
        report.field_trials += 1;
        let witness = || Counterexample {
            realm: Realm::Field,
            binding: b.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
            lhs: l.to_string(),
            rhs: r.to_string(),
        };
        match l.compare(&r) {
            Ok(Ordering::Equal) => {}
            Ok(_) => {
                report.outcome = TransferOutcome::Fail(witness());
                return report;
            }
            Err(_) => {
                report.outcome = TransferOutcome::Undecidable(witness());
                return report;
            }
        }
    }

    if trials > 0 && (report.rational_trials == 0 || report.field_trials == 0) {
        report.outcome = TransferOutcome::Inconclusive;
    }
    report
}

/// Decides `lhs = rhs` as polynomials over the rationals by full expansion.
pub fn is_polynomial_identity(lhs: &Expr, rhs: &Expr) -> Result<bool, PolyError> {
    let diff = MultiPoly::<Rational>::from_expr(&(lhs.clone() - rhs.clone()), &|_| None)?;
    Ok(diff.is_zero())
}

fn random_rational(rng: &mut impl Rng) -> Rational {
    let n: i64 = rng.gen_range(-30..=30);
    let d: i64 = rng.gen_range(1..=12);
    rational::ratio(n, d)
}

fn random_nonzero(rng: &mut impl Rng) -> Rational {
    loop {
        let q = random_rational(rng);
        if !q.is_zero() {
            return q;
        }
    }
}

/// A random field element; when `nonstandard` is set the value is
/// guaranteed to be infinitesimal-perturbed, infinitesimal or unlimited.
fn random_field_value(rng: &mut impl Rng, nonstandard: bool) -> LcNumber {
    let exponents = [rational::int(1), rational::int(2), rational::ratio(1, 2), rational::ratio(3, 2)];
    let pick = |rng: &mut dyn rand::RngCore| exponents[rng.gen_range(0..exponents.len())].clone();
    let kind = if nonstandard { rng.gen_range(1..5) } else { rng.gen_range(0..5) };
    match kind {
        0 => LcNumber::from_rational(random_rational(rng)),
        1 => {
            let e = pick(rng);
            LcNumber::from_rational(random_rational(rng)) + LcNumber::monomial(random_nonzero(rng), e)
        }
        2 => {
            let e = pick(rng);
            LcNumber::monomial(random_nonzero(rng), e)
        }
        3 => {
            let e = pick(rng);
            LcNumber::monomial(random_nonzero(rng), -e)
        }
        _ => {
            let (e1, e2) = (pick(rng), pick(rng));
            LcNumber::monomial(random_nonzero(rng), -e1)
                + LcNumber::from_rational(random_rational(rng))
                + LcNumber::monomial(random_nonzero(rng), e2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn binomial_identity_transfers() {
        let lhs = parse("(a+b)^2").unwrap();
        let rhs = parse("a^2 + 2*a*b + b^2").unwrap();
        assert_eq!(is_polynomial_identity(&lhs, &rhs), Ok(true));
        let report = transfer_check(&lhs, &rhs, 40);
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.rational_trials, 40);
        assert_eq!(report.field_trials, 40);
    }

    #[test]
    fn identity_at_infinitesimal_and_unlimited_pair() {
        let lhs = parse("(a+b)^2").unwrap();
        let rhs = parse("a^2 + 2*a*b + b^2").unwrap();
        let b: Binding = [
            ("a".to_string(), LcNumber::eps()),
            ("b".to_string(), LcNumber::eps().inv(DEFAULT_DEPTH).unwrap()),
        ]
        .into();
        let l = eval_field(&lhs, &b, DEFAULT_DEPTH).unwrap();
        let r = eval_field(&rhs, &b, DEFAULT_DEPTH).unwrap();
        assert_eq!(l, r);
        assert_eq!(l.to_string(), "eps^(-2) + 2 + eps^2");
    }

    #[test]
    fn non_identity_fails_with_counterexample() {
        let report = transfer_check(&parse("a^2").unwrap(), &parse("a").unwrap(), 20);
        match report.outcome {
            TransferOutcome::Fail(c) => {
                assert_eq!(c.realm, Realm::Rational);
                assert_ne!(c.lhs, c.rhs);
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn undecidable_is_tagged() {
        // 1/(1+x) - (1 - x + x^2 - ...) agrees only up to truncation
        let lhs = parse("(1+x)*(1/(1+x))").unwrap();
        let rhs = parse("1").unwrap();
        let report = transfer_check(&lhs, &rhs, 30);
        assert!(matches!(report.outcome, TransferOutcome::Undecidable(_)), "{report:?}");
    }

    #[test]
    fn deterministic() {
        let lhs = parse("(a-b)*(a+b)").unwrap();
        let rhs = parse("a^2-b^2").unwrap();
        assert_eq!(transfer_check(&lhs, &rhs, 15), transfer_check(&lhs, &rhs, 15));
    }
}
