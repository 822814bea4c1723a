//! Small helpers over exact rationals.

use num_bigint::{BigInt, Sign as BigSign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `a`, `-a`, `a/b` or a terminating decimal such as `3.14`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{whole_digits}{frac}");
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(n, d);
        return Some(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rational::from_integer(n))
}

/// Exact rational `n`-th root, if one exists.
pub fn nth_root(q: &Rational, n: u32) -> Option<Rational> {
    if n == 0 {
        return None;
    }
    if q.is_zero() {
        return Some(Rational::zero());
    }
    let negative = q.is_negative();
    if negative && n.is_multiple_of(2) {
        return None;
    }
    let num = int_nth_root(&q.numer().abs(), n)?;
    let den = int_nth_root(q.denom(), n)?;
    let root = Rational::new(num, den);
    Some(if negative { -root } else { root })
}

fn int_nth_root(x: &BigInt, n: u32) -> Option<BigInt> {
    let r = x.nth_root(n);
    if num_traits::pow(r.clone(), n as usize) == *x {
        Some(r)
    } else {
        None
    }
}

/// Greatest common divisor of two positive rationals: the largest `g`
/// such that both are integer multiples of `g`.
pub fn gcd(a: &Rational, b: &Rational) -> Rational {
    let num = a.numer().gcd(b.numer());
    let den = a.denom().lcm(b.denom());
    Rational::new(num, den)
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

/// Integer value of `q` if it is an integer fitting in `i64`.
pub fn to_i64(q: &Rational) -> Option<i64> {
    if is_integer(q) {
        q.numer().to_i64()
    } else {
        None
    }
}

/// Smallest integer `k` with `k >= q`.
pub fn ceil(q: &Rational) -> BigInt {
    q.ceil().to_integer()
}

/// Lossy conversion for plotting only.
pub fn to_f64(q: &Rational) -> f64 {
    let (n, d) = (q.numer(), q.denom());
    match (n.to_f64(), d.to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // scale both down to keep the quotient representable
            let shift = n.bits().max(d.bits()).saturating_sub(900);
            let n = (n >> shift).to_f64().unwrap_or(0.0);
            let d = (d >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

pub fn sign_of(q: &Rational) -> crate::Sign {
    match q.numer().sign() {
        BigSign::Minus => crate::Sign::Negative,
        BigSign::NoSign => crate::Sign::Zero,
        BigSign::Plus => crate::Sign::Positive,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!(parse_rational("3"), Some(int(3)));
        assert_eq!(parse_rational("-3/6"), Some(ratio(-1, 2)));
        assert_eq!(parse_rational("3.14"), Some(ratio(157, 50)));
        assert_eq!(parse_rational("-0.5"), Some(ratio(-1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational("1."), None);
    }

    #[test]
    fn roots() {
        assert_eq!(nth_root(&ratio(9, 4), 2), Some(ratio(3, 2)));
        assert_eq!(nth_root(&int(-8), 3), Some(int(-2)));
        assert_eq!(nth_root(&int(-4), 2), None);
        assert_eq!(nth_root(&int(2), 2), None);
    }

    #[test]
    fn rational_gcd() {
        assert_eq!(gcd(&ratio(1, 2), &int(1)), ratio(1, 2));
        assert_eq!(gcd(&ratio(2, 3), &ratio(1, 2)), ratio(1, 6));
        assert_eq!(gcd(&int(4), &int(6)), int(2));
    }
}
