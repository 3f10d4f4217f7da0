//! Parser for polynomial strings such as `"3/2*x^2*y - (x + 1)^2"`.
//!
//! Variables are `x, y, z` or `x1, x2, …`. Division is allowed only by
//! constants.

use num_traits::Zero;
use thiserror::Error;

use super::poly::MultiPoly;
use super::scalar::{parse_rational, ExactScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("polynomial parse error at byte {pos} in `{input}`: {msg}")]
pub struct ParsePolyError {
    pub input: String,
    pub pos: usize,
    pub msg: String,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    nvars: usize,
}

pub fn parse_poly(input: &str, nvars: usize) -> Result<MultiPoly, ParsePolyError> {
    let mut p = Parser { src: input, pos: 0, nvars };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != input.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ParsePolyError {
        ParsePolyError { input: self.src.to_string(), pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MultiPoly, ParsePolyError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc += &self.term()?;
            } else if self.eat('-') {
                acc -= &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, ParsePolyError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.power()?;
            } else if self.eat('/') {
                let d = self.power()?;
                if d.degree() != 0 || d.is_zero() {
                    return Err(self.error("division only by nonzero constants"));
                }
                let c: ExactScalar = d.coeff(&vec![0; self.nvars]);
                acc = acc.scale(&(ExactScalar::from_integer(1.into()) / c));
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<MultiPoly, ParsePolyError> {
        let base = self.unary()?;
        if self.eat('^') {
            self.skip_ws();
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let k: u32 = self.src[start..self.pos].parse().map_err(|_| self.error("expected integer exponent"))?;
            let mut out = MultiPoly::one(self.nvars);
            for _ in 0..k {
                out = &out * &base;
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<MultiPoly, ParsePolyError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<MultiPoly, ParsePolyError> {
        self.skip_ws();
        if self.eat('(') {
            let inner = self.expr()?;
            if !self.eat(')') {
                return Err(self.error("expected `)`"));
            }
            return Ok(inner);
        }
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == '.' => {
                while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
                    self.pos += 1;
                }
                let q = parse_rational(&self.src[start..self.pos]).map_err(|_| self.error("bad number"))?;
                Ok(MultiPoly::constant(self.nvars, q))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                let idx = match name {
                    "x" => Some(0),
                    "y" => Some(1),
                    "z" => Some(2),
                    _ => name.strip_prefix('x').and_then(|n| n.parse::<usize>().ok()).filter(|&k| k >= 1).map(|k| k - 1),
                };
                match idx {
                    Some(i) if i < self.nvars => Ok(MultiPoly::var(self.nvars, i)),
                    _ => {
                        self.pos = start;
                        Err(self.error(&format!("unknown variable `{name}` for {} variables", self.nvars)))
                    }
                }
            }
            _ => Err(self.error("expected number, variable or `(`")),
        }
    }
}

/// True when the polynomial is a constant equal to zero; convenience for checks.
pub fn is_zero_poly(p: &MultiPoly) -> bool {
    p.is_zero() || p.terms().all(|(_, c)| c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::scalar::{int, ratio};

    #[test]
    fn parses_expressions() {
        let p = parse_poly("3/2*x^2*y - (x + 1)^2", 2).unwrap();
        assert_eq!(p.coeff(&[2, 1]), ratio(3, 2));
        assert_eq!(p.coeff(&[2, 0]), int(-1));
        assert_eq!(p.coeff(&[1, 0]), int(-2));
        assert_eq!(p.coeff(&[0, 0]), int(-1));
        let q = parse_poly("x1*x3 + 0.5*x2", 3).unwrap();
        assert_eq!(q.coeff(&[1, 0, 1]), int(1));
        assert_eq!(q.coeff(&[0, 1, 0]), ratio(1, 2));
        assert_eq!(parse_poly("x/4", 1).unwrap().coeff(&[1]), ratio(1, 4));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_poly("z", 2).is_err());
        assert!(parse_poly("x/y", 2).is_err());
        assert!(parse_poly("(x", 2).is_err());
        assert!(parse_poly("x +", 2).is_err());
        assert!(parse_poly("2 x", 2).is_err());
    }

    #[test]
    fn round_trips_display() {
        let p = parse_poly("x^3 - 2/3*x*y + 7", 2).unwrap();
        assert_eq!(parse_poly(&p.to_string(), 2).unwrap(), p);
        assert!(is_zero_poly(&(&p - &p)));
    }
}
