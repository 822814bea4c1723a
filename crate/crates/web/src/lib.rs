//! wasm-bindgen entry points for the static demo page in `www/`.
//!
//! Each exported function returns a JSON string. The `*_json` twins hold
//! the logic so it can be tested off the browser.

use bcontinuum::calculus;
use bcontinuum::expr::{eval_field, Binding};
use bcontinuum::rational::{parse_rational, Rational};
use bcontinuum::shadows;
use bcontinuum::{parse, svg, Expr, LcNumber};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn expr(src: &str) -> Result<Expr, String> {
    parse(src).map_err(|e| e.to_string())
}

fn rational(src: &str) -> Result<Rational, String> {
    parse_rational(src.trim()).ok_or_else(|| format!("not a rational number: '{}'", src.trim()))
}

fn number(src: &str) -> Result<LcNumber, String> {
    src.parse().map_err(|e: bcontinuum::field::ParseLcError| e.to_string())
}

fn depth_or_default(depth: u32) -> u32 {
    if depth == 0 {
        bcontinuum::DEFAULT_DEPTH
    } else {
        depth
    }
}

/// Derivative at `at`, the unreduced quotient and the zoom plot.
pub fn differentiate_json(src: &str, at: &str, depth: u32) -> Result<Value, String> {
    let depth = depth_or_default(depth);
    let f = expr(src)?;
    let x0 = rational(at)?;
    let r = calculus::derivative(&f, &x0, depth).map_err(|e| e.to_string())?;
    let plot = svg::zoom_svg(&f, &x0, depth).map_err(|e| e.to_string())?;
    Ok(json!({
        "expr": f.to_string(),
        "at": x0.to_string(),
        "derivative": r.derivative_value.to_string(),
        "pre_shadow": r.pre_shadow.to_string(),
        "svg": plot,
    }))
}

/// Shadow parabola of the deformed conic, sampled at comma-separated `x0`.
pub fn conic_json(samples: &str, h: &str) -> Result<Value, String> {
    let h = number(h)?;
    let xs = samples
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(rational)
        .collect::<Result<Vec<_>, _>>()?;
    let state = shadows::conic_shadow(&h, &xs).map_err(|e| e.to_string())?;
    Ok(json!({
        "H": h.to_string(),
        "equation": state.equation(),
        "points": state.points.iter().map(|(x, y)| [x.to_string(), y.to_string()]).collect::<Vec<_>>(),
        "svg": svg::parabola_svg(&state),
    }))
}

/// Value of `src` under `name=value` bindings, with its standard part when limited.
pub fn evaluate_json(src: &str, bindings: &str, depth: u32) -> Result<Value, String> {
    let e = expr(src)?;
    let mut b = Binding::new();
    for item in bindings.split(',').filter(|s| !s.trim().is_empty()) {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| format!("binding '{}' is not of the form name=value", item.trim()))?;
        b.insert(name.trim().to_string(), number(value)?);
    }
    let v = eval_field(&e, &b, depth_or_default(depth)).map_err(|e| e.to_string())?;
    let shadow = v.shadow().ok();
    Ok(json!({
        "value": v.to_string(),
        "shadow": shadow.as_ref().map(|s| s.value.to_string()),
        "residue": shadow.map(|s| s.residue),
    }))
}

fn to_js(r: Result<Value, String>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn differentiate(src: &str, at: &str, depth: u32) -> Result<String, JsError> {
    to_js(differentiate_json(src, at, depth))
}

#[wasm_bindgen]
pub fn conic(samples: &str, h: &str) -> Result<String, JsError> {
    to_js(conic_json(samples, h))
}

#[wasm_bindgen]
pub fn evaluate(src: &str, bindings: &str, depth: u32) -> Result<String, JsError> {
    to_js(evaluate_json(src, bindings, depth))
}
