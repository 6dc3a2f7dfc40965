//! Text syntax for scalars: `theta^2 + 2*theta - 1`, `(theta+1)/(theta^3)`,
//! with `[c0,c1]` coefficients in non-prime fields.

use super::fq::Fq;
use super::ratfunc::RatFunc;
use super::theta::ThetaPoly;
use crate::error::{Error, Result};

struct Parser<'a> {
    fq: &'a Fq,
    s: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }
    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }
    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse(format!("{msg} at position {} in {:?}", self.pos, self.s.iter().collect::<String>())))
    }
    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let txt: String = self.s[start..self.pos].iter().collect();
        txt.parse::<i64>().or_else(|_| self.err("integer out of range"))
    }
    fn coef(&mut self) -> Result<u8> {
        if self.eat('[') {
            let mut c = vec![self.int()?];
            while self.eat(',') {
                c.push(self.int()?);
            }
            if !self.eat(']') {
                return self.err("expected ']'");
            }
            self.fq.from_coords(&c)
        } else {
            let n = self.int()?;
            Ok(self.fq.from_int(n))
        }
    }
    fn theta_pow(&mut self) -> Result<Option<usize>> {
        self.skip_ws();
        let rest: String = self.s[self.pos..].iter().collect();
        let len = if rest.starts_with("theta") {
            5
        } else if rest.starts_with('θ') {
            1
        } else {
            return Ok(None);
        };
        self.pos += len;
        if self.eat('^') {
            Ok(Some(self.int()? as usize))
        } else {
            Ok(Some(1))
        }
    }
    fn term(&mut self) -> Result<ThetaPoly> {
        if self.peek() == Some('(') {
            self.pos += 1;
            let p = self.poly()?;
            if !self.eat(')') {
                return self.err("expected ')'");
            }
            if self.eat('^') {
                let e = self.int()?;
                return Ok(p.pow(e as u64));
            }
            return Ok(p);
        }
        if let Some(k) = self.theta_pow()? {
            return Ok(ThetaPoly::monomial(self.fq, 1, k));
        }
        let c = self.coef()?;
        if self.eat('*') {
            match self.theta_pow()? {
                Some(k) => Ok(ThetaPoly::monomial(self.fq, c, k)),
                None => {
                    let rest = self.term()?;
                    Ok(rest.scale(c))
                }
            }
        } else {
            Ok(ThetaPoly::constant(self.fq, c))
        }
    }
    fn product(&mut self) -> Result<ThetaPoly> {
        let mut acc = self.term()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = acc.mul(&self.term()?);
        }
        Ok(acc)
    }
    fn poly(&mut self) -> Result<ThetaPoly> {
        let neg = self.eat('-');
        let mut acc = self.product()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            if self.eat('+') {
                acc = acc.add(&self.product()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.product()?);
            } else {
                return Ok(acc);
            }
        }
    }
}

/// Parse a polynomial in θ.
pub fn parse_theta_poly(fq: &Fq, s: &str) -> Result<ThetaPoly> {
    let mut p = Parser { fq, s: s.chars().collect(), pos: 0 };
    let r = p.poly()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(r)
}

/// Parse a rational function `num` or `num/den`.
pub fn parse_ratfunc(fq: &Fq, s: &str) -> Result<RatFunc> {
    let mut p = Parser { fq, s: s.chars().collect(), pos: 0 };
    let num = p.poly()?;
    let r = if p.eat('/') {
        let den = p.poly()?;
        RatFunc::new(num, den)?
    } else {
        RatFunc::from_poly(num)
    };
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        let fq = Fq::new(3).unwrap();
        let p = parse_theta_poly(&fq, "2*theta^3 - theta + 1").unwrap();
        assert_eq!(p.coeffs(), &[1, 2, 0, 2]);
        assert_eq!(parse_theta_poly(&fq, &p.to_string()).unwrap(), p);
        let r = parse_ratfunc(&fq, "(theta+1)/(theta^2-1)").unwrap();
        assert_eq!(r.to_string(), "(1)/(theta + 2)");
        assert!(parse_theta_poly(&fq, "theta +").is_err());
        let f4 = Fq::new(4).unwrap();
        let x = parse_theta_poly(&f4, "[0,1]*theta^2 + [1,1]").unwrap();
        assert_eq!(x.coeffs(), &[3, 0, 2]);
        assert_eq!(parse_theta_poly(&f4, &x.to_string()).unwrap(), x);
    }
}
