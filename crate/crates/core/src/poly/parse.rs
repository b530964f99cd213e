//! Infix expression grammar for polynomials and operators.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := power ('*' power)*
//! power  := atom ('^' uint)?
//! atom   := number ('/' number)? | ident | '(' expr ')'
//! ```
//!
//! Identifiers are `x`, `y`, `k` and, for operators, `S` or `D`.

use super::{MPoly, Var};
use crate::error::{Error, Result};
use crate::field::Rat;
use num_bigint::BigInt;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Expr {
    Num(Rat),
    Var(Var),
    Op,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    op_symbol: Option<u8>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {}", self.pos))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = if self.peek() == Some(b'-') {
            self.pos += 1;
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = Box::new(self.term()?);
            lhs = if c == b'+' {
                Expr::Add(Box::new(lhs), rhs)
            } else {
                Expr::Sub(Box::new(lhs), rhs)
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.digits()?;
            let e: u32 = e.parse().map_err(|_| self.err("exponent too large"))?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Result<String> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n: BigInt = self.digits()?.parse().expect("digits");
                let save = self.pos;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    if self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                        let d: BigInt = self.digits()?.parse().expect("digits");
                        if d == BigInt::from(0) {
                            return Err(self.err("zero denominator"));
                        }
                        return Ok(Expr::Num(Rat::new(n, d)));
                    }
                    self.pos = save;
                    return Err(self.err("division is only allowed between integer literals"));
                }
                Ok(Expr::Num(Rat::from_integer(n)))
            }
            Some(b'x') => self.ident(Expr::Var(Var::X)),
            Some(b'y') => self.ident(Expr::Var(Var::Y)),
            Some(b'k') => self.ident(Expr::Var(Var::K)),
            Some(c) if Some(c) == self.op_symbol => self.ident(Expr::Op),
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn ident(&mut self, e: Expr) -> Result<Expr> {
        self.pos += 1;
        if self.src.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_') {
            return Err(self.err("unknown identifier"));
        }
        Ok(e)
    }
}

/// Parses `src`; `op_symbol` enables one operator identifier (`S` or `D`).
pub(crate) fn parse_expr(src: &str, op_symbol: Option<char>) -> Result<Expr> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        op_symbol: op_symbol.map(|c| c as u8),
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

fn eval(e: &Expr) -> Result<MPoly<Rat>> {
    Ok(match e {
        Expr::Num(q) => MPoly::constant(q.clone()),
        Expr::Var(v) => MPoly::var(*v),
        Expr::Op => return Err(Error::Parse("operator symbol in polynomial".into())),
        Expr::Neg(a) => eval(a)?.neg(),
        Expr::Add(a, b) => eval(a)?.add(&eval(b)?),
        Expr::Sub(a, b) => eval(a)?.sub(&eval(b)?),
        Expr::Mul(a, b) => eval(a)?.mul(&eval(b)?),
        Expr::Pow(a, n) => eval(a)?.pow(*n),
    })
}

/// Parses a polynomial in `x`, `y`, `k` with rational coefficients.
///
/// ```
/// use odh_core::{parse_poly, Poly};
/// let f = parse_poly("(x + y)*(x - y)").unwrap();
/// assert_eq!(f, parse_poly("x^2 - y^2").unwrap());
/// assert_eq!(f.to_string(), "x^2 - y^2");
/// ```
pub fn parse_poly(src: &str) -> Result<MPoly<Rat>> {
    eval(&parse_expr(src, None)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_garbage() {
        assert!(parse_poly("x +").is_err());
        assert!(parse_poly("2*z").is_err());
        assert!(parse_poly("xy").is_err());
        assert!(parse_poly("1/0").is_err());
        assert!(parse_poly("x/2").is_err());
        assert!(parse_poly("S*x").is_err());
    }

    #[test]
    fn precedence() {
        assert_eq!(parse_poly("-x^2 + 3/6*y").unwrap().to_string(), "-x^2 + 1/2*y");
        assert_eq!(parse_poly("2*(x+1)^2").unwrap(), parse_poly("2*x^2+4*x+2").unwrap());
    }
}
