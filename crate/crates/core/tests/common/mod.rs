//! Independent oracles shared by the integration and acceptance tests.
//! Nothing here touches the field implementation.
#![allow(dead_code)]

use bcontinuum::expr::{eval_rational, RationalBinding};
use bcontinuum::{Expr, Rational};
use num_traits::{One, Zero};
use rand::Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Symbolic derivative by the textbook rules, no simplification.
pub fn d(e: &Expr, x: &str) -> Expr {
    match e {
        Expr::Var(v) if v == x => Expr::int(1),
        Expr::Var(_) | Expr::Num(_) => Expr::int(0),
        Expr::Neg(a) => -d(a, x),
        Expr::Add(a, b) => d(a, x) + d(b, x),
        Expr::Sub(a, b) => d(a, x) - d(b, x),
        Expr::Mul(a, b) => d(a, x) * (**b).clone() + (**a).clone() * d(b, x),
        Expr::Div(a, b) => {
            let (a, b) = ((**a).clone(), (**b).clone());
            (d(&a, x) * b.clone() - a * d(&b, x)) / b.powi(2)
        }
        Expr::Pow(a, k) => Expr::num(k.clone()) * (**a).clone().pow(k - Rational::one()) * d(a, x),
        Expr::Sqrt(a) => d(a, x) / (Expr::int(2) * (**a).clone().sqrt()),
    }
}

pub fn at(e: &Expr, x: &str, v: &Rational) -> Option<Rational> {
    let b: RationalBinding = [(x.to_string(), v.clone())].into();
    eval_rational(e, &b).ok()
}

/// Random rational function of `x` built from `+ - * /` and integer powers.
pub fn random_rational_fn(rng: &mut impl Rng, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.6) {
            Expr::var("x")
        } else {
            Expr::num(q(rng.gen_range(-5..=5), rng.gen_range(1..=3)))
        };
    }
    let a = random_rational_fn(rng, depth - 1);
    match rng.gen_range(0..6) {
        0 => a + random_rational_fn(rng, depth - 1),
        1 => a - random_rational_fn(rng, depth - 1),
        2 | 3 => a * random_rational_fn(rng, depth - 1),
        4 => a / random_rational_fn(rng, depth - 1),
        _ => a.powi(rng.gen_range(-2..=3)),
    }
}

/// Shadow of `ddy/ddx` along `x = g(t)` at `t0` as Taylor expansion of
/// the three sample points predicts it: `(Y''·g'² + Y'·g'') / g''` with
/// `Y(x) = x·v(x)/a`.
pub fn second_difference_quotient_shadow(v: &Expr, a: &Rational, g: &Expr, t0: &Rational) -> Option<Rational> {
    let y = Expr::var("x") * v.clone() / Expr::num(a.clone());
    let x0 = at(g, "t", t0)?;
    let g1 = at(&d(g, "t"), "t", t0)?;
    let g2 = at(&d(&d(g, "t"), "t"), "t", t0)?;
    let y1 = at(&d(&y, "x"), "x", &x0)?;
    let y2 = at(&d(&d(&y, "x"), "x"), "x", &x0)?;
    if g2.is_zero() {
        return None;
    }
    Some((y2 * &g1 * &g1 + y1 * &g2) / g2)
}

/// Coefficients of `p(n)/q(n)` in powers of `1/n`, starting at `n^(deg p - deg q)`,
/// by schoolbook long division. Coefficients lowest degree first.
pub fn long_division_in_inverse_n(p: &[Rational], q: &[Rational], terms: usize) -> (i64, Vec<Rational>) {
    let trim = |c: &[Rational]| {
        let mut c = c.to_vec();
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        c
    };
    let (p, q) = (trim(p), trim(q));
    if p.is_empty() {
        return (0, vec![]);
    }
    // reversed: p(n) = n^dp · P(1/n)
    let mut rem: Vec<Rational> = p.iter().rev().cloned().collect();
    let den: Vec<Rational> = q.iter().rev().cloned().collect();
    let shift = (q.len() as i64) - (p.len() as i64);
    let mut out = Vec::new();
    for k in 0..terms {
        let c = rem.get(k).cloned().unwrap_or_else(Rational::zero) / &den[0];
        for (j, dj) in den.iter().enumerate() {
            if rem.len() <= k + j {
                rem.resize(k + j + 1, Rational::zero());
            }
            rem[k + j] -= &c * dj;
        }
        out.push(c);
    }
    (shift, out)
}

/// Random polynomial with small integer coefficients, lowest degree first.
pub fn random_poly(rng: &mut impl Rng, max_degree: usize) -> Vec<i64> {
    let deg = rng.gen_range(0..=max_degree);
    let mut c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-4..=4)).collect();
    if c[deg] == 0 {
        c[deg] = 1;
    }
    c
}
