//! Static SVG plots. Output is a pure function of the input.

use std::fmt::Write;

use crate::calculus::{self, CalculusError};
use crate::expr::{eval_rational, Expr, RationalBinding};
use crate::field::LcNumber;
use crate::rational::{self, Rational};
use crate::shadows::ConicState;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;

/// A rectangle of the canvas showing `[x0, x1] × [y0, y1]`.
struct Pane {
    left: f64,
    top: f64,
    width: f64,
    height: f64,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Pane {
    fn new(left: f64, top: f64, width: f64, height: f64, xs: (f64, f64), ys: &[f64]) -> Self {
        let (mut y0, mut y1) = ys
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &y| (lo.min(y), hi.max(y)));
        if !y0.is_finite() || !y1.is_finite() {
            (y0, y1) = (-1.0, 1.0);
        }
        if y1 - y0 < 1e-9 {
            y0 -= 1.0;
            y1 += 1.0;
        }
        let pad = (y1 - y0) * 0.08;
        Pane {
            left,
            top,
            width,
            height,
            x0: xs.0,
            x1: xs.1,
            y0: y0 - pad,
            y1: y1 + pad,
        }
    }

    fn px(&self, x: f64) -> f64 {
        self.left + (x - self.x0) / (self.x1 - self.x0) * self.width
    }

    fn py(&self, y: f64) -> f64 {
        self.top + (self.y1 - y) / (self.y1 - self.y0) * self.height
    }

    fn frame(&self, out: &mut String, title: &str) {
        let _ = writeln!(
            out,
            r##"  <rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#999"/>"##,
            self.left, self.top, self.width, self.height
        );
        let _ = writeln!(
            out,
            r#"  <text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13">{}</text>"#,
            self.left + 6.0,
            self.top - 8.0,
            escape(title)
        );
        if self.y0 < 0.0 && self.y1 > 0.0 {
            let y = self.py(0.0);
            let _ = writeln!(
                out,
                r##"  <line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ccc"/>"##,
                self.left,
                self.left + self.width
            );
        }
        if self.x0 < 0.0 && self.x1 > 0.0 {
            let x = self.px(0.0);
            let _ = writeln!(
                out,
                r##"  <line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#ccc"/>"##,
                self.top,
                self.top + self.height
            );
        }
    }

    /// Polyline through the points; `None` breaks the line.
    fn path(&self, out: &mut String, points: &[Option<(f64, f64)>], color: &str) {
        let mut d = String::new();
        let mut pen_down = false;
        for p in points {
            match p {
                Some((x, y)) if *y >= self.y0 && *y <= self.y1 => {
                    let _ = write!(d, "{}{:.2},{:.2} ", if pen_down { "L" } else { "M" }, self.px(*x), self.py(*y));
                    pen_down = true;
                }
                _ => pen_down = false,
            }
        }
        let _ = writeln!(
            out,
            r#"  <path d="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            d.trim_end()
        );
    }

    fn dot(&self, out: &mut String, x: f64, y: f64, label: &str) {
        let (cx, cy) = (self.px(x), self.py(y));
        let _ = writeln!(out, r##"  <circle cx="{cx:.2}" cy="{cy:.2}" r="4" fill="#c0392b"/>"##);
        if !label.is_empty() {
            let _ = writeln!(
                out,
                r#"  <text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11">{}</text>"#,
                cx + 6.0,
                cy - 6.0,
                escape(label)
            );
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn document(body: &str) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" width=\"{WIDTH}\" height=\"{HEIGHT}\">\n\
         {body}</svg>\n"
    )
}

/// The shadow parabola with the sampled points marked.
pub fn parabola_svg(state: &ConicState) -> String {
    let [a, b, c] = state.shadow_coeffs.clone().map(|q| rational::to_f64(&q));
    let xs: Vec<f64> = state.points.iter().map(|(x, _)| rational::to_f64(x)).collect();
    let lo = xs.iter().cloned().fold(-4.0, f64::min) - 1.0;
    let hi = xs.iter().cloned().fold(4.0, f64::max) + 1.0;
    let curve: Vec<(f64, f64)> = (0..=200)
        .map(|i| {
            let x = lo + (hi - lo) * f64::from(i) / 200.0;
            (x, a * x * x + b * x + c)
        })
        .collect();
    let ys: Vec<f64> = curve.iter().map(|p| p.1).collect();
    let pane = Pane::new(40.0, 40.0, WIDTH - 80.0, HEIGHT - 80.0, (lo, hi), &ys);

    let mut body = String::new();
    let title = format!("shadow of the conic at H = {}", state.h);
    pane.frame(&mut body, &title);
    pane.path(&mut body, &curve.into_iter().map(Some).collect::<Vec<_>>(), "#2c3e50");
    for (x, y) in &state.points {
        pane.dot(&mut body, rational::to_f64(x), rational::to_f64(y), &format!("({x}, {y})"));
    }
    document(&body)
}

/// Exact values `st((f(x0 + kε) − f(x0))/ε)` for each `k`: the graph of
/// `f` near `x0` magnified by `1/ε`.
pub fn zoom_samples(f: &Expr, x0: &Rational, ks: &[Rational], depth: u32) -> Result<Vec<(Rational, Rational)>, CalculusError> {
    let base = LcNumber::from_rational(x0.clone());
    let f0 = calculus::eval_at(f, &base, depth)?;
    ks.iter()
        .map(|k| {
            let fk = calculus::eval_at(f, &(&base + &LcNumber::monomial(k.clone(), rational::int(1))), depth)?;
            let scaled = (fk - f0.clone()).div(&LcNumber::eps(), depth)?;
            let v = scaled.st().map_err(|e| match e {
                crate::FieldError::Unlimited => CalculusError::Unlimited,
                other => other.into(),
            })?;
            Ok((k.clone(), v))
        })
        .collect()
}

/// Offsets `-4, -7/2, ..., 4` used by the magnified pane.
pub fn zoom_offsets() -> Vec<Rational> {
    (-8..=8).map(|i| rational::ratio(i, 2)).collect()
}

/// Two panes: `f` on the standard scale around `x0`, and the same graph
/// at the scale of `ε`, where it is indistinguishable from a line.
pub fn zoom_svg(f: &Expr, x0: &Rational, depth: u32) -> Result<String, CalculusError> {
    let var = calculus::sole_variable(f)?;
    let center = rational::to_f64(x0);
    let standard: Vec<Option<(f64, f64)>> = (-40..=40)
        .map(|i| {
            let x = x0 + rational::ratio(i, 20);
            let b: RationalBinding = [(var.clone(), x.clone())].into();
            eval_rational(f, &b).ok().map(|y| (rational::to_f64(&x), rational::to_f64(&y)))
        })
        .collect();
    let fx0 = {
        let b: RationalBinding = [(var.clone(), x0.clone())].into();
        eval_rational(f, &b).ok()
    };
    let zoomed = zoom_samples(f, x0, &zoom_offsets(), depth)?;

    let pane_w = (WIDTH - 90.0) / 2.0;
    let ys: Vec<f64> = standard.iter().flatten().map(|p| p.1).collect();
    let left = Pane::new(30.0, 50.0, pane_w, HEIGHT - 100.0, (center - 2.0, center + 2.0), &ys);
    let zs: Vec<f64> = zoomed.iter().map(|(_, v)| rational::to_f64(v)).collect();
    let right = Pane::new(60.0 + pane_w, 50.0, pane_w, HEIGHT - 100.0, (-4.0, 4.0), &zs);

    let mut body = String::new();
    left.frame(&mut body, &format!("{var} near {x0}"));
    left.path(&mut body, &standard, "#2c3e50");
    if let Some(y) = &fx0 {
        left.dot(&mut body, center, rational::to_f64(y), "");
    }
    right.frame(&mut body, &format!("(f({x0} + k*eps) - f({x0}))/eps, k in [-4, 4]"));
    let pts: Vec<Option<(f64, f64)>> = zoomed
        .iter()
        .map(|(k, v)| Some((rational::to_f64(k), rational::to_f64(v))))
        .collect();
    right.path(&mut body, &pts, "#2c3e50");
    right.dot(&mut body, 0.0, 0.0, "");
    Ok(document(&body))
}

/// The slope seen in the magnified pane, read off the sample at `k = 1`.
pub fn zoom_slope(samples: &[(Rational, Rational)]) -> Option<Rational> {
    samples
        .iter()
        .find(|(k, _)| *k == rational::int(1))
        .map(|(_, v)| v.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::rational::{int, ratio};
    use crate::shadows::{conic_shadow, default_h};

    #[test]
    fn zoomed_graph_is_a_line() {
        let f = parse("x^2").unwrap();
        let s = zoom_samples(&f, &int(1), &zoom_offsets(), 16).unwrap();
        for (k, v) in &s {
            assert_eq!(*v, k * int(2));
        }
        assert_eq!(zoom_slope(&s), Some(int(2)));
        let f = parse("1/x").unwrap();
        let s = zoom_samples(&f, &int(2), &[ratio(-1, 2), int(3)], 16).unwrap();
        assert_eq!(s, vec![(ratio(-1, 2), ratio(1, 8)), (int(3), ratio(-3, 4))]);
    }

    #[test]
    fn zoom_svg_is_deterministic() {
        let f = parse("x^3 - x").unwrap();
        let a = zoom_svg(&f, &int(1), 16).unwrap();
        assert_eq!(a, zoom_svg(&f, &int(1), 16).unwrap());
        assert!(a.starts_with("<?xml"));
        assert!(a.contains("viewBox=\"0 0 640 480\""));
        assert_eq!(a.matches("<path").count(), 2);
    }

    #[test]
    fn zoom_at_pole_fails() {
        let f = parse("1/x").unwrap();
        assert!(zoom_svg(&f, &int(0), 16).is_err());
    }

    #[test]
    fn parabola_marks_samples() {
        let state = conic_shadow(&default_h(), &[int(0), int(2), int(4)]).unwrap();
        let svg = parabola_svg(&state);
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.contains("(4, 3)"));
    }
}
