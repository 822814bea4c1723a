//! Expression language over the field.
//!
//! Expressions are built from variables, rational literals, the four
//! arithmetic operations, rational powers and `sqrt`. The same tree can
//! be evaluated over plain rationals or over [`LcNumber`]s; evaluating
//! it at infinitesimal or unlimited values applies the finite rules
//! verbatim.
//!
//! Grammar (whitespace between tokens is ignored):
//!
//! ```text
//! expr     = term { ("+" | "-") term } ;
//! term     = unary { ("*" | "/") unary } ;
//! unary    = "-" unary | power ;
//! power    = primary { "^" exponent } ;
//! exponent = [ "-" ] number | "(" [ "-" ] number [ "/" number ] ")" ;
//! primary  = number | ident | "sqrt" "(" expr ")" | "(" expr ")" ;
//! number   = digit { digit } [ "." digit { digit } ] ;
//! ident    = letter { letter | digit | "_" } ;
//! ```

mod eval;
mod parse;
pub mod poly;
mod transfer;

use std::collections::BTreeSet;
use std::fmt;
use std::ops;

use num_traits::{Signed, Zero};

use crate::rational::{self, Rational};

pub use eval::{eval_field, eval_rational, Binding, EvalError, RationalBinding};
pub use parse::{parse, SyntaxError};
pub use transfer::{
    is_polynomial_identity, transfer_check, transfer_check_seeded, Counterexample, Realm, TransferOutcome,
    TransferReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(String),
    Num(Rational),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Rational),
    Sqrt(Box<Expr>),
}

impl Expr {
    pub fn var(name: &str) -> Self {
        Expr::Var(name.to_string())
    }

    pub fn num(q: Rational) -> Self {
        Expr::Num(q)
    }

    pub fn int(n: i64) -> Self {
        Expr::Num(rational::int(n))
    }

    pub fn pow(self, exponent: Rational) -> Self {
        Expr::Pow(Box::new(self), exponent)
    }

    pub fn powi(self, k: i64) -> Self {
        self.pow(rational::int(k))
    }

    pub fn sqrt(self) -> Self {
        Expr::Sqrt(Box::new(self))
    }

    /// Variables occurring in the expression, sorted.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Num(_) => {}
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Sqrt(a) => a.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Replaces every occurrence of variable `name` by `with`.
    pub fn substitute(&self, name: &str, with: &Expr) -> Expr {
        let sub = |e: &Expr| Box::new(e.substitute(name, with));
        match self {
            Expr::Var(v) if v == name => with.clone(),
            Expr::Var(_) | Expr::Num(_) => self.clone(),
            Expr::Neg(a) => Expr::Neg(sub(a)),
            Expr::Sqrt(a) => Expr::Sqrt(sub(a)),
            Expr::Pow(a, q) => Expr::Pow(sub(a), q.clone()),
            Expr::Add(a, b) => Expr::Add(sub(a), sub(b)),
            Expr::Sub(a, b) => Expr::Sub(sub(a), sub(b)),
            Expr::Mul(a, b) => Expr::Mul(sub(a), sub(b)),
            Expr::Div(a, b) => Expr::Div(sub(a), sub(b)),
        }
    }
}

/// Decimal digits of `q` if it is a non-negative terminating decimal.
fn decimal_repr(q: &Rational) -> Option<String> {
    if q.is_negative() {
        return None;
    }
    if rational::is_integer(q) {
        return Some(q.numer().to_string());
    }
    let mut d = q.denom().clone();
    let (two, five) = (num_bigint::BigInt::from(2), num_bigint::BigInt::from(5));
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if d != num_bigint::BigInt::from(1) {
        return None;
    }
    let places = twos.max(fives);
    let scaled = q * Rational::from_integer(num_traits::pow(10.into(), places));
    let digits = format!("{:0>width$}", scaled.numer(), width = places + 1);
    let (whole, frac) = digits.split_at(digits.len() - places);
    Some(format!("{whole}.{frac}"))
}

fn fmt_exponent(q: &Rational) -> String {
    if rational::is_integer(q) && !q.is_negative() {
        q.to_string()
    } else {
        format!("({q})")
    }
}

/// Fully parenthesized canonical rendering; `parse` inverts it for every
/// tree that `parse` can produce.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(v) => f.write_str(v),
            Expr::Num(q) => match decimal_repr(q) {
                Some(s) => f.write_str(&s),
                // written the way the parser reads it back
                None if q.is_negative() && rational::is_integer(q) => write!(f, "({q})"),
                None if q.is_negative() => write!(f, "((-{}) / {})", -q.numer(), q.denom()),
                None => write!(f, "({} / {})", q.numer(), q.denom()),
            },
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, q) => write!(f, "({a}^{})", fmt_exponent(q)),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
        }
    }
}

macro_rules! expr_binop {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl ops::$trait for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}

expr_binop!(Add, add, Add);
expr_binop!(Sub, sub, Sub);
expr_binop!(Mul, mul, Mul);
expr_binop!(Div, div, Div);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn render_forms() {
        let e = parse("-x^2 + 3.25*y/(z - 1)").unwrap();
        assert_eq!(e.to_string(), "((-(x^2)) + ((3.25 * y) / (z - 1)))");
        assert_eq!(parse(&e.to_string()).unwrap(), e);
        assert_eq!(Expr::num(ratio(1, 3)).to_string(), "(1 / 3)");
        assert_eq!(Expr::num(ratio(-1, 3)).to_string(), "((-1) / 3)");
        assert_eq!(Expr::var("x").pow(ratio(-1, 2)).to_string(), "(x^(-1/2))");
        assert_eq!(decimal_repr(&ratio(1, 40)).unwrap(), "0.025");
    }

    #[test]
    fn free_vars_sorted() {
        let e = parse("sqrt(x^2+y^2)+sqrt(x^2+(y-H)^2)").unwrap();
        let vars: Vec<_> = e.free_vars().into_iter().collect();
        assert_eq!(vars, ["H", "x", "y"]);
    }

    #[test]
    fn substitution() {
        let e = parse("x^2 + x").unwrap();
        let s = e.substitute("x", &parse("t + 1").unwrap());
        assert_eq!(s, parse("(t+1)^2 + (t+1)").unwrap());
    }
}
