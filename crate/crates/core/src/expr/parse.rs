use num_traits::Zero;
use thiserror::Error;

use super::Expr;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {pos}: {msg}")]
pub struct SyntaxError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(u8),
}

struct Lexed {
    toks: Vec<(usize, Tok)>,
    end: usize,
}

fn lex(src: &str) -> Result<Lexed, SyntaxError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
        } else if b.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                let frac = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if frac == i {
                    return Err(SyntaxError {
                        pos: i,
                        msg: "expected digits after '.'".into(),
                    });
                }
            }
            let q = rational::parse_rational(&src[start..i]).expect("lexed number literal");
            toks.push((start, Tok::Num(q)));
        } else if b.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            toks.push((start, Tok::Ident(src[start..i].to_string())));
        } else if b"+-*/^()".contains(&b) {
            toks.push((i, Tok::Op(b)));
            i += 1;
        } else {
            return Err(SyntaxError {
                pos: i,
                msg: format!("unexpected character {:?}", src[i..].chars().next().unwrap()),
            });
        }
    }
    Ok(Lexed { toks, end: src.len() })
}

struct Parser {
    lexed: Lexed,
    at: usize,
}

impl Parser {
    fn pos(&self) -> usize {
        self.lexed.toks.get(self.at).map(|t| t.0).unwrap_or(self.lexed.end)
    }

    fn peek(&self) -> Option<&Tok> {
        self.lexed.toks.get(self.at).map(|t| &t.1)
    }

    fn eat_op(&mut self, op: u8) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect_op(&mut self, op: u8) -> Result<(), SyntaxError> {
        if self.eat_op(op) {
            Ok(())
        } else {
            self.fail(format!("expected '{}'", op as char))
        }
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat_op(b'+') {
                lhs = lhs + self.term()?;
            } else if self.eat_op(b'-') {
                lhs = lhs - self.term()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat_op(b'*') {
                lhs = lhs * self.unary()?;
            } else if self.eat_op(b'/') {
                lhs = lhs / self.unary()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        if self.eat_op(b'-') {
            Ok(-self.unary()?)
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, SyntaxError> {
        let mut base = self.primary()?;
        while self.eat_op(b'^') {
            let q = self.exponent()?;
            base = base.pow(q);
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<Rational, SyntaxError> {
        match self.peek() {
            Some(Tok::Num(q)) => {
                let q = q.clone();
                self.at += 1;
                Ok(q)
            }
            _ => self.fail("expected a number"),
        }
    }

    fn exponent(&mut self) -> Result<Rational, SyntaxError> {
        if self.eat_op(b'(') {
            let neg = self.eat_op(b'-');
            let mut q = self.number()?;
            if self.eat_op(b'/') {
                let d = self.number()?;
                if d.is_zero() {
                    return self.fail("zero denominator in exponent");
                }
                q /= d;
            }
            self.expect_op(b')')?;
            Ok(if neg { -q } else { q })
        } else {
            let neg = self.eat_op(b'-');
            let q = self.number()?;
            Ok(if neg { -q } else { q })
        }
    }

    fn primary(&mut self) -> Result<Expr, SyntaxError> {
        match self.peek().cloned() {
            Some(Tok::Num(q)) => {
                self.at += 1;
                Ok(Expr::Num(q))
            }
            Some(Tok::Ident(name)) => {
                let start = self.pos();
                self.at += 1;
                if self.peek() == Some(&Tok::Op(b'(')) {
                    if name != "sqrt" {
                        return Err(SyntaxError {
                            pos: start,
                            msg: format!("unknown function '{name}'"),
                        });
                    }
                    self.at += 1;
                    let arg = self.expr()?;
                    self.expect_op(b')')?;
                    Ok(arg.sqrt())
                } else if name == "sqrt" {
                    self.fail("expected '(' after sqrt")
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Some(Tok::Op(b'(')) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect_op(b')')?;
                Ok(e)
            }
            Some(Tok::Op(op)) => self.fail(format!("unexpected '{}'", op as char)),
            None => self.fail("unexpected end of input"),
        }
    }
}

/// Parses an expression with the usual precedence
/// (`^` binds tighter than unary minus, then `* /`, then `+ -`).
pub fn parse(src: &str) -> Result<Expr, SyntaxError> {
    let lexed = lex(src)?;
    let mut p = Parser { lexed, at: 0 };
    let e = p.expr()?;
    if p.at < p.lexed.toks.len() {
        return p.fail("unexpected trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn x() -> Expr {
        Expr::var("x")
    }

    #[test]
    fn power_node() {
        assert_eq!(parse("x^2").unwrap(), x().powi(2));
    }

    #[test]
    fn line_through_unit_intercept() {
        let e = parse("1 - x/H").unwrap();
        assert_eq!(e, Expr::int(1) - x() / Expr::var("H"));
    }

    #[test]
    fn ellipse_left_side() {
        let e = parse("sqrt(x^2+y^2)+sqrt(x^2+(y-H)^2)").unwrap();
        let y = Expr::var("y");
        let h = Expr::var("H");
        let expected = (x().powi(2) + y.clone().powi(2)).sqrt() + (x().powi(2) + (y - h).powi(2)).sqrt();
        assert_eq!(e, expected);
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(parse("-x^2").unwrap(), -(x().powi(2)));
        assert_eq!(parse("a - b - c").unwrap(), (Expr::var("a") - Expr::var("b")) - Expr::var("c"));
        assert_eq!(parse("a / b * c").unwrap(), (Expr::var("a") / Expr::var("b")) * Expr::var("c"));
        assert_eq!(parse("1 + 2*x").unwrap(), Expr::int(1) + Expr::int(2) * x());
        assert_eq!(parse("x^(1/2)").unwrap(), x().pow(ratio(1, 2)));
        assert_eq!(parse("x^-1").unwrap(), x().pow(int(-1)));
        assert_eq!(parse("x^2^3").unwrap(), x().powi(2).powi(3));
        assert_eq!(parse("2.5").unwrap(), Expr::num(ratio(5, 2)));
    }

    #[test]
    fn syntax_errors_carry_position() {
        assert_eq!(parse("").unwrap_err().pos, 0);
        assert_eq!(parse("x +").unwrap_err().pos, 3);
        assert_eq!(parse("x $ y").unwrap_err().pos, 2);
        assert_eq!(parse("foo(x)").unwrap_err().pos, 0);
        assert_eq!(parse("(x").unwrap_err().pos, 2);
        assert_eq!(parse("x y").unwrap_err().pos, 2);
        assert_eq!(parse("x^y").unwrap_err().pos, 2);
        assert_eq!(parse("1.").unwrap_err().pos, 2);
    }
}
