//! Assignable shadows of inassignable figures: an oblique line with an
//! unlimited intercept, an ellipse with one focus at an unlimited
//! distance, and a secant through two infinitely close points.

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::calculus::{self, CalculusError};
use crate::expr::poly::{MultiPoly, PolyError};
use crate::expr::{eval_field, parse, Binding, EvalError, Expr};
use crate::field::{FieldError, LcNumber, DEFAULT_DEPTH};
use crate::rational::{self, Rational};

/// Oblique line with y-intercept 1 and x-intercept `H`.
pub const LINE_LH: &str = "1 - x/H";
/// Ellipse with foci at the origin and `(0, H)` and vertex `(0, -1)`, left side; right side is `H + 2`.
pub const ELLIPSE_LHS: &str = "sqrt(x^2 + y^2) + sqrt(x^2 + (y - H)^2)";
pub const ELLIPSE_RHS: &str = "H + 2";
/// The same curve after squaring twice and cancelling, normalized by `H²`.
pub const CONIC_LHS: &str = "(y + 2 + 2/H)^2 - (x^2 + y^2)*(1 + 4/H + 4/H^2)";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShadowError {
    #[error("H = {0} is limited; an unlimited value is required")]
    NotUnlimited(String),
    #[error("shadow relation is not linear in y at x0 = {0}")]
    NotLinearInY(Rational),
    #[error("sample points do not lie on one parabola")]
    FitMismatch,
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn expr(src: &str) -> Expr {
    parse(src).expect("built-in expression parses")
}

/// The default unlimited parameter `H = 1/ε`.
pub fn default_h() -> LcNumber {
    LcNumber::eps_pow(-Rational::one())
}

fn require_unlimited(h: &LcNumber) -> Result<(), ShadowError> {
    if h.is_limited()? {
        Err(ShadowError::NotUnlimited(h.to_string()))
    } else {
        Ok(())
    }
}

fn binding(pairs: [(&str, LcNumber); 3]) -> Binding {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinePoint {
    pub x: LcNumber,
    pub y: LcNumber,
    #[serde(serialize_with = "crate::serialize_rational")]
    pub shadow_x: Rational,
    #[serde(serialize_with = "crate::serialize_rational")]
    pub shadow_y: Rational,
}

impl LinePoint {
    pub fn on_shadow_line(&self) -> bool {
        self.shadow_y.is_one()
    }
}

/// Point of the oblique line at finite `x`, with `H = 1/ε`, and its shadow.
pub fn line_lh_shadow(x: &Rational) -> Result<LinePoint, ShadowError> {
    line_lh_shadow_with(&default_h(), x)
}

pub fn line_lh_shadow_with(h: &LcNumber, x: &Rational) -> Result<LinePoint, ShadowError> {
    require_unlimited(h)?;
    let x = LcNumber::from_rational(x.clone());
    let mut b = Binding::new();
    b.insert("x".into(), x.clone());
    b.insert("H".into(), h.clone());
    let y = eval_field(&expr(LINE_LH), &b, DEFAULT_DEPTH)?;
    Ok(LinePoint {
        shadow_x: x.st()?,
        shadow_y: y.st()?,
        x,
        y,
    })
}

/// Slope `-1/H` of the oblique line.
pub fn line_lh_slope(h: &LcNumber) -> Result<LcNumber, ShadowError> {
    require_unlimited(h)?;
    Ok(-h.inv(DEFAULT_DEPTH)?)
}

/// The deformed conic at a given `H` and its real shadow `y0 = A·x0² + B·x0 + C`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConicState {
    #[serde(rename = "H")]
    pub h: LcNumber,
    #[serde(serialize_with = "serialize_expr")]
    pub lhs_expr: Expr,
    #[serde(serialize_with = "serialize_rationals")]
    pub shadow_coeffs: [Rational; 3],
    #[serde(serialize_with = "serialize_points")]
    pub points: Vec<(Rational, Rational)>,
}

impl ConicState {
    /// The shadow as text, e.g. `y0 = 1/4*x0^2 - 1`.
    pub fn equation(&self) -> String {
        format!("y0 = {}", quadratic(&self.shadow_coeffs, "x0"))
    }
}

/// `a*x^2 + b*x + c` with unit coefficients and zero terms omitted.
fn quadratic(coeffs: &[Rational; 3], var: &str) -> String {
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate() {
        let power = 2 - k;
        if *c == rational::int(0) {
            continue;
        }
        let negative = *c < rational::int(0);
        let mag = if negative { -c.clone() } else { c.clone() };
        match (out.is_empty(), negative) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        let monomial = match power {
            0 => String::new(),
            1 => var.to_string(),
            p => format!("{var}^{p}"),
        };
        let unit = mag == rational::int(1);
        match (monomial.is_empty(), unit) {
            (true, _) => out.push_str(&mag.to_string()),
            (false, true) => out.push_str(&monomial),
            (false, false) => out.push_str(&format!("{mag}*{monomial}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn serialize_expr<S: serde::Serializer>(e: &Expr, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(e)
}

fn serialize_rationals<S: serde::Serializer>(qs: &[Rational; 3], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(qs.iter().map(|q| q.to_string()))
}

fn serialize_points<S: serde::Serializer>(ps: &[(Rational, Rational)], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(ps.iter().map(|(x, y)| [x.to_string(), y.to_string()]))
}

/// Standard part of every coefficient of the conic's left side, with `x`
/// and `y` kept symbolic: the shadow relation in the real plane.
pub fn shadow_relation(h: &LcNumber) -> Result<MultiPoly<Rational>, ShadowError> {
    require_unlimited(h)?;
    let poly = MultiPoly::<LcNumber>::from_expr(&expr(CONIC_LHS), &|v| (v == "H").then(|| h.clone()))?;
    let mut out = MultiPoly::<Rational>::zero();
    for (m, c) in poly.terms() {
        let term: Vec<(&str, u32)> = m.iter().map(|(v, k)| (v.as_str(), *k)).collect();
        let mut mono = MultiPoly::constant(c.st()?);
        for (v, k) in term {
            mono = mono.mul(&MultiPoly::variable(v).pow(k));
        }
        out = out.add(&mono);
    }
    Ok(out)
}

fn eval_poly(p: &MultiPoly<Rational>, x: &Rational, y: &Rational) -> Rational {
    p.terms()
        .map(|(m, c)| {
            let mut t = c.clone();
            for (v, k) in m {
                let base = if v == "x" { x } else { y };
                t *= num_traits::pow(base.clone(), *k as usize);
            }
            t
        })
        .sum()
}

/// Solves the shadow relation for `y0` at each sample `x0` and fits the
/// parabola through the resulting points.
pub fn conic_shadow(h: &LcNumber, samples: &[Rational]) -> Result<ConicState, ShadowError> {
    let relation = shadow_relation(h)?;
    let mut points = Vec::with_capacity(samples.len());
    for x0 in samples {
        // relation(x0, y) = c1·y + c0 once the y² terms have cancelled
        let c0 = eval_poly(&relation, x0, &Rational::zero());
        let c1 = eval_poly(&relation, x0, &Rational::one()) - &c0;
        let c2 = eval_poly(&relation, x0, &rational::int(2)) - &c0 - c1.clone() * rational::int(2);
        if !c2.is_zero() || c1.is_zero() {
            return Err(ShadowError::NotLinearInY(x0.clone()));
        }
        points.push((x0.clone(), -c0 / c1));
    }
    let shadow_coeffs = fit_parabola(&relation, &points)?;
    Ok(ConicState {
        h: h.clone(),
        lhs_expr: expr(CONIC_LHS),
        shadow_coeffs,
        points,
    })
}

/// Coefficients `[A, B, C]` of `y = A·x² + B·x + C`. Taken from the shadow
/// relation (solved for `y`) and, with three or more distinct samples,
/// cross-checked against the interpolating parabola.
fn fit_parabola(relation: &MultiPoly<Rational>, points: &[(Rational, Rational)]) -> Result<[Rational; 3], ShadowError> {
    let c1 = relation.coeff(&[("y", 1)]);
    if c1.is_zero() {
        return Err(ShadowError::FitMismatch);
    }
    let coeffs = [
        -relation.coeff(&[("x", 2)]) / &c1,
        -relation.coeff(&[("x", 1)]) / &c1,
        -relation.coeff(&[]) / &c1,
    ];
    let mut distinct: Vec<&(Rational, Rational)> = Vec::new();
    for p in points {
        if distinct.iter().all(|q| q.0 != p.0) {
            distinct.push(p);
        }
    }
    if distinct.len() >= 3 {
        let (p0, p1, p2) = (distinct[0], distinct[1], distinct[2]);
        let interp = |x: &Rational| lagrange(&[p0, p1, p2], x);
        for (x, y) in points {
            let on_fit = interp(x) == *y;
            let on_coeffs = &coeffs[0] * x * x + &coeffs[1] * x + &coeffs[2] == *y;
            if !on_fit || !on_coeffs {
                return Err(ShadowError::FitMismatch);
            }
        }
    }
    Ok(coeffs)
}

fn lagrange(nodes: &[&(Rational, Rational)], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for (i, (xi, yi)) in nodes.iter().map(|p| (&p.0, &p.1)).enumerate() {
        let mut basis = Rational::one();
        for (j, p) in nodes.iter().enumerate() {
            if i != j {
                basis *= (x - &p.0) / (xi - &p.0);
            }
        }
        acc += basis * yi;
    }
    acc
}

/// Left side of the normalized conic at a finite point `(x, y)`.
/// Its standard part is `(y + 2)² − (x² + y²)`.
pub fn status_transitus_residual(h: &LcNumber, x: &Rational, y: &Rational) -> Result<LcNumber, ShadowError> {
    require_unlimited(h)?;
    let b = binding([
        ("x", LcNumber::from_rational(x.clone())),
        ("y", LcNumber::from_rational(y.clone())),
        ("H", h.clone()),
    ]);
    Ok(eval_field(&expr(CONIC_LHS), &b, DEFAULT_DEPTH)?)
}

/// Re-derivation of the normalized conic from the two-focus ellipse.
#[derive(Debug, Clone, PartialEq)]
pub struct ConicDerivation {
    /// `R² − 4AB` with `A = x²+y²`, `B = x²+(y−H)²`, `R = (H+2)² − (A+B)`.
    pub squared_twice: MultiPoly<LcNumber>,
    /// The normalized form as written in [`CONIC_LHS`].
    pub printed: MultiPoly<LcNumber>,
    /// Factor with `squared_twice = scale · printed`, read off one
    /// coefficient's leading terms.
    pub scale: LcNumber,
    /// The degree-4 terms of `R²` and `4AB` cancel.
    pub quartic_terms_cancel: bool,
    pub matches_printed: bool,
}

/// Squares the ellipse equation twice with `x`, `y` symbolic and `H`
/// fixed, and compares the result against [`CONIC_LHS`] coefficient by
/// coefficient. `H` must have an exact reciprocal (a monomial).
pub fn rederive_conic(h: &LcNumber) -> Result<ConicDerivation, ShadowError> {
    require_unlimited(h)?;
    let constants = |v: &str| (v == "H").then(|| h.clone());
    let poly = |src: &str| MultiPoly::<LcNumber>::from_expr(&expr(src), &constants);
    let a = poly("x^2 + y^2")?;
    let b = poly("x^2 + (y - H)^2")?;
    let r = poly("(H + 2)^2")?.sub(&a.add(&b));
    let squared_twice = r.mul(&r).sub(&a.mul(&b).scale(&LcNumber::from_int(4)));
    let printed = poly(CONIC_LHS)?;

    let quartic_terms_cancel = squared_twice
        .terms()
        .all(|(m, _)| m.values().sum::<u32>() < 4);

    let (m, pc) = printed.terms().next().ok_or(ShadowError::FitMismatch)?;
    let key: Vec<(&str, u32)> = m.iter().map(|(v, k)| (v.as_str(), *k)).collect();
    let sc = squared_twice.coeff(&key);
    let scale = if sc.is_exact_zero() {
        LcNumber::zero()
    } else {
        sc.tlh()?.div(&pc.tlh()?, DEFAULT_DEPTH)?
    };
    let matches_printed = !scale.is_exact_zero() && squared_twice == printed.scale(&scale);
    Ok(ConicDerivation {
        squared_twice,
        printed,
        scale,
        quartic_terms_cancel,
        matches_printed,
    })
}

/// A finite point on the ellipse with foci `(0,0)`, `(0,H)`: the ray of
/// rational direction `((1−m²), 2m)/(1+m²)` meets it at distance
/// `r = (2H+2) / (H(1−s)+2)` with `s = 2m/(1+m²)`.
pub fn conic_point(h: &LcNumber, m: &Rational, depth: u32) -> Result<(LcNumber, LcNumber), ShadowError> {
    require_unlimited(h)?;
    let one = Rational::one();
    let denom = &one + m * m;
    let c = (&one - m * m) / &denom;
    let s = rational::int(2) * m / &denom;
    let num = h.scale(&rational::int(2)) + LcNumber::from_int(2);
    let den = h.scale(&(&one - &s)) + LcNumber::from_int(2);
    let r = num.div(&den, depth)?;
    Ok((r.scale(&c), r.scale(&s)))
}

/// Residuals of the four equations of the squaring chain at `(x, y)`:
/// the ellipse, its square, the radical isolated, and the normalized conic.
pub fn chain_residuals(h: &LcNumber, x: &LcNumber, y: &LcNumber, depth: u32) -> Result<[LcNumber; 4], ShadowError> {
    let b = binding([("x", x.clone()), ("y", y.clone()), ("H", h.clone())]);
    let eval = |lhs: &str, rhs: &str| -> Result<LcNumber, ShadowError> {
        Ok(eval_field(&expr(lhs), &b, depth)? - eval_field(&expr(rhs), &b, depth)?)
    };
    Ok([
        eval(ELLIPSE_LHS, ELLIPSE_RHS)?,
        eval(
            "x^2 + y^2 + x^2 + (H - y)^2 + 2*sqrt((x^2 + y^2)*(x^2 + (H - y)^2))",
            "H^2 + 4*H + 4",
        )?,
        eval(
            "2*sqrt((x^2 + y^2)*(x^2 + (H - y)^2))",
            "H^2 + 4*H + 4 - (x^2 + y^2 + x^2 + (H - y)^2)",
        )?,
        eval(CONIC_LHS, "0")?,
    ])
}

/// Polynomial identity behind the second squaring: with the radical
/// isolated, squaring and cancelling leaves `4·H²` times the normalized conic.
pub fn second_squaring_identity() -> (Expr, Expr) {
    (
        expr("(H^2 + 4*H + 4 - (x^2 + y^2 + x^2 + (H - y)^2))^2 - 4*(x^2 + y^2)*(x^2 + (H - y)^2)"),
        expr("4*((H*y + 2*H + 2)^2 - (x^2 + y^2)*(H^2 + 4*H + 4))"),
    )
}

/// Slope of the chord through `(x0, f(x0))` and `(x0+ε, f(x0+ε))`, then its shadow.
pub fn secant_to_tangent(f: &Expr, x0: &Rational) -> Result<Rational, ShadowError> {
    let a = LcNumber::from_rational(x0.clone());
    let b = &a + &LcNumber::eps();
    let fa = calculus::eval_at(f, &a, DEFAULT_DEPTH)?;
    let fb = calculus::eval_at(f, &b, DEFAULT_DEPTH)?;
    let slope = (fb - fa).div(&(b - a), DEFAULT_DEPTH)?;
    match slope.st() {
        Err(FieldError::Unlimited) => Err(CalculusError::Unlimited.into()),
        other => Ok(other?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn quadratic_rendering() {
        assert_eq!(quadratic(&[ratio(1, 4), int(0), int(-1)], "x0"), "1/4*x0^2 - 1");
        assert_eq!(quadratic(&[int(-1), int(1), int(0)], "x"), "-x^2 + x");
        assert_eq!(quadratic(&[int(0), int(0), int(0)], "x"), "0");
    }

    #[test]
    fn line_shadow_points() {
        let p = line_lh_shadow(&int(7)).unwrap();
        assert_eq!((p.shadow_x.clone(), p.shadow_y.clone()), (int(7), int(1)));
        assert_eq!(p.y.to_string(), "1 - 7*eps");
        assert!(p.on_shadow_line());
        assert_eq!(line_lh_shadow(&int(0)).unwrap().shadow_y, int(1));
    }

    #[test]
    fn line_slope_is_negative_infinitesimal() {
        let slope = line_lh_slope(&default_h()).unwrap();
        assert_eq!(slope.is_infinitesimal(), Ok(true));
        assert_eq!(slope.compare(&LcNumber::zero()), Ok(std::cmp::Ordering::Less));
        assert!(matches!(
            line_lh_slope(&LcNumber::from_int(100)),
            Err(ShadowError::NotUnlimited(_))
        ));
    }

    #[test]
    fn conic_shadow_points() {
        let state = conic_shadow(&default_h(), &[int(0), int(2), int(4)]).unwrap();
        assert_eq!(state.points, vec![(int(0), int(-1)), (int(2), int(0)), (int(4), int(3))]);
        assert_eq!(state.shadow_coeffs, [ratio(1, 4), int(0), int(-1)]);
        assert!(matches!(
            conic_shadow(&LcNumber::from_int(3), &[int(0)]),
            Err(ShadowError::NotUnlimited(_))
        ));
    }

    #[test]
    fn conic_shadow_is_independent_of_h() {
        let hs = [
            LcNumber::eps_pow(int(-2)),
            LcNumber::eps_pow(ratio(-1, 2)).scale(&int(5)),
            "eps^(-1) + 3".parse().unwrap(),
        ];
        for h in hs {
            let state = conic_shadow(&h, &[int(-2), int(1), ratio(7, 3)]).unwrap();
            assert_eq!(state.shadow_coeffs, [ratio(1, 4), int(0), int(-1)], "H = {h}");
        }
    }

    #[test]
    fn residual_shadows() {
        let h = default_h();
        let st = |x: i64, y: i64| status_transitus_residual(&h, &int(x), &int(y)).unwrap().st().unwrap();
        assert_eq!(st(2, 0), int(0));
        assert_eq!(st(0, 0), int(4));
        assert_eq!(st(0, -1), int(0));
        let r = status_transitus_residual(&h, &int(2), &int(0)).unwrap();
        assert_eq!(r.to_string(), "-8*eps - 12*eps^2");
    }

    #[test]
    fn conic_rederived_from_ellipse() {
        let d = rederive_conic(&default_h()).unwrap();
        assert!(d.quartic_terms_cancel);
        assert!(d.matches_printed);
        assert_eq!(d.scale, LcNumber::eps_pow(int(-2)).scale(&int(4)));
        let d = rederive_conic(&LcNumber::eps_pow(ratio(-3, 2))).unwrap();
        assert!(d.matches_printed);
    }

    #[test]
    fn chain_holds_on_deformed_conic() {
        let h = default_h();
        for m in [ratio(1, 2), ratio(-1, 3), int(2), int(0)] {
            let (x, y) = conic_point(&h, &m, DEFAULT_DEPTH).unwrap();
            assert_eq!(x.is_limited(), Ok(true));
            for (i, r) in chain_residuals(&h, &x, &y, DEFAULT_DEPTH).unwrap().iter().enumerate() {
                assert!(r.is_zero_up_to_truncation(), "equation {i} at m = {m}: {r}");
            }
            // and the shadow point lies on the parabola
            let (x0, y0) = (x.st().unwrap(), y.st().unwrap());
            assert_eq!(y0, &x0 * &x0 / int(4) - int(1));
        }
    }

    #[test]
    fn second_squaring_transfers() {
        let (l, r) = second_squaring_identity();
        assert_eq!(crate::expr::is_polynomial_identity(&l, &r), Ok(true));
        let report = crate::expr::transfer_check(&l, &r, 30);
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn chain_fails_off_the_conic() {
        let h = default_h();
        let r = chain_residuals(&h, &LcNumber::from_int(3), &LcNumber::from_int(4), DEFAULT_DEPTH).unwrap();
        assert!(r.iter().all(|r| !r.is_zero_up_to_truncation()));
    }

    #[test]
    fn secant_slopes() {
        let s = |src: &str, x0: i64| secant_to_tangent(&parse(src).unwrap(), &int(x0)).unwrap();
        assert_eq!(s("x^2", 1), int(2));
        assert_eq!(s("x", -4), int(1));
        assert_eq!(s("x^3 - x", 0), int(-1));
    }
}
