//! Differentiation by standard part of a difference quotient, with the
//! higher-order terms discarded by `st` and `tlh` rather than set to zero.

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::expr::{eval_field, Binding, EvalError, Expr};
use crate::field::{FieldError, LcNumber};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("expected a function of one variable, found {0:?}")]
    NotUnivariate(Vec<String>),
    #[error("difference quotient is unlimited: not differentiable here")]
    Unlimited,
    #[error("increment {0} is not infinitesimal")]
    NotInfinitesimal(String),
    #[error("second difference of the progression vanishes")]
    DegenerateProgression,
    #[error("parameter a must be nonzero")]
    ZeroParameter,
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A derivative together with the difference quotient it is the shadow of.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffResult {
    #[serde(serialize_with = "crate::serialize_rational")]
    pub derivative_value: Rational,
    pub pre_shadow: LcNumber,
}

/// Name of the single free variable of `f` (`x` for constants).
pub fn sole_variable(f: &Expr) -> Result<String, CalculusError> {
    let vars = f.free_vars();
    match vars.len() {
        0 => Ok("x".to_string()),
        1 => Ok(vars.into_iter().next().unwrap()),
        _ => Err(CalculusError::NotUnivariate(vars.into_iter().collect())),
    }
}

/// Evaluates univariate `f` at a field point.
pub fn eval_at(f: &Expr, at: &LcNumber, depth: u32) -> Result<LcNumber, CalculusError> {
    let var = sole_variable(f)?;
    let mut b = Binding::new();
    b.insert(var, at.clone());
    Ok(eval_field(f, &b, depth)?)
}

fn shadow_of_limited(q: &LcNumber) -> Result<Rational, CalculusError> {
    match q.st() {
        Err(FieldError::Unlimited) => Err(CalculusError::Unlimited),
        other => Ok(other?),
    }
}

/// `st((f(x0+ε) − f(x0)) / ε)`.
pub fn derivative(f: &Expr, x0: &Rational, depth: u32) -> Result<DiffResult, CalculusError> {
    derivative_with_increment(f, x0, &LcNumber::eps(), depth)
}

/// `st((f(x0+h) − f(x0)) / h)` for a nonzero infinitesimal `h`.
pub fn derivative_with_increment(
    f: &Expr,
    x0: &Rational,
    h: &LcNumber,
    depth: u32,
) -> Result<DiffResult, CalculusError> {
    if h.is_exact_zero() || !h.is_infinitesimal()? {
        return Err(CalculusError::NotInfinitesimal(h.to_string()));
    }
    let base = LcNumber::from_rational(x0.clone());
    let f0 = eval_at(f, &base, depth)?;
    let f1 = eval_at(f, &(&base + h), depth)?;
    let pre_shadow = (f1 - f0).div(h, depth)?;
    let derivative_value = shadow_of_limited(&pre_shadow)?;
    Ok(DiffResult {
        derivative_value,
        pre_shadow,
    })
}

/// `st((f(x0+2ε) − 2f(x0+ε) + f(x0)) / ε²)`.
pub fn second_derivative(f: &Expr, x0: &Rational, depth: u32) -> Result<Rational, CalculusError> {
    let at = |k: i64| {
        let point = LcNumber::from_rational(x0.clone()) + LcNumber::monomial(rational::int(k), Rational::one());
        eval_at(f, &point, depth)
    };
    let (f0, f1, f2) = (at(0)?, at(1)?, at(2)?);
    let second = f2 - f1.scale(&rational::int(2)) + f0;
    let quotient = second * LcNumber::eps_pow(rational::int(-2));
    shadow_of_limited(&quotient)
}

/// The three stages of `d(uv) = (u+du)(v+dv) − uv`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductTrace {
    #[serde(serialize_with = "crate::serialize_rational")]
    pub u0: Rational,
    #[serde(serialize_with = "crate::serialize_rational")]
    pub v0: Rational,
    pub du: LcNumber,
    pub dv: LcNumber,
    /// `(u+du)(v+dv) − uv`, computed exactly.
    pub expansion: LcNumber,
    /// `u·dv + v·du`: what the law of homogeneity keeps.
    pub tlh: LcNumber,
    /// `du·dv`: what it discards.
    pub discarded: LcNumber,
    /// Whether `discarded` lies in a strictly higher order class than each
    /// nonzero kept term.
    pub discarded_is_higher_order: bool,
}

pub fn product_rule_trace(
    u0: &Rational,
    v0: &Rational,
    du: &LcNumber,
    dv: &LcNumber,
) -> Result<ProductTrace, CalculusError> {
    for d in [du, dv] {
        if !d.is_infinitesimal()? {
            return Err(CalculusError::NotInfinitesimal(d.to_string()));
        }
    }
    let u = LcNumber::from_rational(u0.clone());
    let v = LcNumber::from_rational(v0.clone());
    let expansion = (&u + du) * (&v + dv) - &u * &v;
    let u_dv = &u * dv;
    let v_du = &v * du;
    let tlh = &u_dv + &v_du;
    let discarded = du * dv;

    let discarded_is_higher_order = match discarded.leading() {
        None => true,
        Some((de, _)) => [&u_dv, &v_du]
            .into_iter()
            .filter_map(|kept| kept.leading().map(|(e, _)| e.clone()))
            .all(|ke| *de > ke),
    };

    Ok(ProductTrace {
        u0: u0.clone(),
        v0: v0.clone(),
        du: du.clone(),
        dv: dv.clone(),
        expansion,
        tlh,
        discarded,
        discarded_is_higher_order,
    })
}

/// Outcome of the product-law computation with second differentials along
/// a nonuniform progression `x_i = g(t0 + iε)`, `y = x·v(x)/a`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecondOrderReport {
    pub dx: LcNumber,
    pub ddx: LcNumber,
    pub dv: LcNumber,
    pub ddv: LcNumber,
    pub dy: LcNumber,
    pub ddy: LcNumber,
    /// `a·dy/dx − (x·dv/dx + v + dv)`: vanishes up to truncation.
    pub first_order_residual: LcNumber,
    /// `st(dy/dx)` and `st((x·dv/dx + v)/a)`, the assignable first-order law.
    #[serde(serialize_with = "crate::serialize_rational")]
    pub first_order_lhs_shadow: Rational,
    #[serde(serialize_with = "crate::serialize_rational")]
    pub first_order_rhs_shadow: Rational,
    /// Full six-term second-differential identity, residual before `st`.
    pub full_identity_residual: LcNumber,
    /// `ddy/ddx`.
    pub lhs: LcNumber,
    /// `(x/a)·ddv/ddx + v/a + (2/a)·dx·dv/ddx`.
    pub rhs: LcNumber,
    #[serde(serialize_with = "crate::serialize_rational")]
    pub lhs_shadow: Rational,
    #[serde(serialize_with = "crate::serialize_rational")]
    pub rhs_shadow: Rational,
    /// `st(lhs − rhs)`; zero when the assignable law holds.
    #[serde(serialize_with = "crate::serialize_rational")]
    pub residual_shadow: Rational,
}

impl SecondOrderReport {
    pub fn holds(&self) -> bool {
        self.residual_shadow.is_zero()
    }
}

/// Builds first and second differences of `x`, `v` and `y = x·v/a` along
/// `x_i = g(t0 + iε)` and compares both sides of the assignable
/// second-order product law.
pub fn cum_prodiisset_check(
    v: &Expr,
    a: &Rational,
    g: &Expr,
    t0: &Rational,
    depth: u32,
) -> Result<SecondOrderReport, CalculusError> {
    if a.is_zero() {
        return Err(CalculusError::ZeroParameter);
    }
    if second_derivative(g, t0, depth)?.is_zero() {
        return Err(CalculusError::DegenerateProgression);
    }
    let a_inv = LcNumber::from_rational(a.recip());
    let xs: Vec<LcNumber> = (0..3)
        .map(|i| {
            let t = LcNumber::from_rational(t0.clone()) + LcNumber::monomial(rational::int(i), Rational::one());
            eval_at(g, &t, depth)
        })
        .collect::<Result<_, _>>()?;
    let vs: Vec<LcNumber> = xs.iter().map(|x| eval_at(v, x, depth)).collect::<Result<_, _>>()?;
    let ys: Vec<LcNumber> = xs.iter().zip(&vs).map(|(x, v)| x * v * &a_inv).collect();

    let first = |s: &[LcNumber]| &s[1] - &s[0];
    let second = |s: &[LcNumber]| &s[2] - &s[1].scale(&rational::int(2)) + &s[0];
    let (dx, ddx) = (first(&xs), second(&xs));
    let (dv, ddv) = (first(&vs), second(&vs));
    let (dy, ddy) = (first(&ys), second(&ys));
    if ddx.is_zero_up_to_truncation() {
        return Err(CalculusError::DegenerateProgression);
    }
    let (x, vv) = (&xs[0], &vs[0]);
    let two = rational::int(2);
    let over_dx = |q: &LcNumber| q.div(&dx, depth);
    let over_ddx = |q: &LcNumber| q.div(&ddx, depth);

    // first order: a·dy/dx = x·dv/dx + v + dv
    let a_lc = LcNumber::from_rational(a.clone());
    let dy_dx = over_dx(&dy)?;
    let dv_dx = over_dx(&dv)?;
    let first_order_residual = &a_lc * &dy_dx - (x * &dv_dx + vv + &dv);
    let first_order_lhs_shadow = shadow_of_limited(&dy_dx)?;
    let first_order_rhs_shadow = shadow_of_limited(&((x * &dv_dx + vv) * &a_inv))?;

    let ddy_ddx = over_ddx(&ddy)?;
    let ddv_ddx = over_ddx(&ddv)?;
    let dx_dv_ddx = over_ddx(&(&dx * &dv))?;
    let rhs = (x * &ddv_ddx + vv + dx_dv_ddx.scale(&two)) * &a_inv;
    let dx_ddv_ddx = over_ddx(&(&dx * &ddv))?;
    let full_rhs = &rhs + (dv.scale(&two) + dx_ddv_ddx.scale(&two) + &ddv) * &a_inv;
    let full_identity_residual = &ddy_ddx - &full_rhs;

    let lhs = ddy_ddx;
    let lhs_shadow = shadow_of_limited(&lhs)?;
    let rhs_shadow = shadow_of_limited(&rhs)?;
    let residual_shadow = shadow_of_limited(&(&lhs - &rhs))?;
    Ok(SecondOrderReport {
        dx,
        ddx,
        dv,
        ddv,
        dy,
        ddy,
        first_order_residual,
        first_order_lhs_shadow,
        first_order_rhs_shadow,
        full_identity_residual,
        lhs,
        rhs,
        lhs_shadow,
        rhs_shadow,
        residual_shadow,
    })
}
