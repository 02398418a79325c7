use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{ExponentVector, LaurentPoly};
use crate::error::{Error, Result};

/// Parse an expression in `x1..xn` (with `x`, `y`, `z` as aliases for the
/// first three variables). Negative powers and division are accepted only
/// for monomials.
pub fn parse_laurent(text: &str, n: usize) -> Result<LaurentPoly> {
    if n == 0 {
        return Err(Error::Invalid("dimension must be at least 1".into()));
    }
    let mut p = Parser { s: text.as_bytes(), pos: 0, n };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.s.len() {
        return Err(p.err("unexpected character"));
    }
    Ok(v)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    n: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        self.err_at(self.pos, msg)
    }

    fn err_at(&self, offset: usize, msg: &str) -> Error {
        Error::Parse { offset, message: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                b'-' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    let f = self.unary()?;
                    acc = &acc * &f;
                }
                b'/' => {
                    let at = self.pos;
                    self.pos += 1;
                    let f = self.unary()?;
                    let inv = f
                        .monomial_inverse()
                        .ok_or_else(|| self.err_at(at, "division by a non-monomial"))?;
                    acc = &acc * &inv;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<LaurentPoly> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let f = self.unary()?;
                Ok(-&f)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.factor(),
        }
    }

    fn factor(&mut self) -> Result<LaurentPoly> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            let at = self.pos;
            self.pos += 1;
            let k = self
                .signed_int()
                .ok_or_else(|| self.err_at(at, "expected integer exponent after '^'"))?;
            if k >= 0 {
                let k = u32::try_from(k).map_err(|_| self.err_at(at, "exponent too large"))?;
                return Ok(base.pow(k));
            }
            let inv = base
                .monomial_inverse()
                .ok_or_else(|| self.err_at(at, "negative power of a non-monomial"))?;
            let k = u32::try_from(-k).map_err(|_| self.err_at(at, "exponent too large"))?;
            return Ok(inv.pow(k));
        }
        Ok(base)
    }

    fn signed_int(&mut self) -> Option<i64> {
        self.skip_ws();
        let start = self.pos;
        let mut neg = false;
        if let Some(&c) = self.s.get(self.pos) {
            if c == b'-' || c == b'+' {
                neg = c == b'-';
                self.pos += 1;
            }
        }
        let digits_start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return None;
        }
        let v: i64 = std::str::from_utf8(&self.s[digits_start..self.pos]).ok()?.parse().ok()?;
        Some(if neg { -v } else { v })
    }

    fn base(&mut self) -> Result<LaurentPoly> {
        let c = self.peek().ok_or_else(|| self.err("unexpected end of input"))?;
        if c == b'(' {
            self.pos += 1;
            let e = self.expr()?;
            if self.peek() != Some(b')') {
                return Err(self.err("expected ')'"));
            }
            self.pos += 1;
            return Ok(e);
        }
        if c.is_ascii_digit() {
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let v: BigInt = std::str::from_utf8(&self.s[start..self.pos])
                .expect("ascii")
                .parse()
                .map_err(|_| self.err_at(start, "bad integer"))?;
            return Ok(LaurentPoly::constant(self.n, BigRational::from_integer(v)));
        }
        if c.is_ascii_alphabetic() {
            let start = self.pos;
            self.pos += 1;
            let idx = match c {
                b'x' if self.s.get(self.pos).is_some_and(u8::is_ascii_digit) => {
                    let ds = self.pos;
                    while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    let k: usize = std::str::from_utf8(&self.s[ds..self.pos])
                        .expect("ascii")
                        .parse()
                        .map_err(|_| self.err_at(start, "bad variable index"))?;
                    if k == 0 {
                        return Err(self.err_at(start, "variables are numbered from x1"));
                    }
                    k
                }
                b'x' => 1,
                b'y' => 2,
                b'z' => 3,
                _ => return Err(self.err_at(start, "unknown variable")),
            };
            if self.s.get(self.pos).is_some_and(u8::is_ascii_alphanumeric) {
                return Err(self.err_at(start, "unknown variable"));
            }
            if idx > self.n {
                return Err(Error::DimensionMismatch { expected: self.n, found: idx });
            }
            let mut e = vec![0; self.n];
            e[idx - 1] = 1;
            return Ok(LaurentPoly::monomial(self.n, ExponentVector(e), BigRational::one()));
        }
        Err(self.err("unexpected character"))
    }
}
