//! Polynomials in θ over F_q.

use std::fmt;

use super::fq::Fq;
use crate::error::{Error, Result};

/// Element of F_q[θ]; ascending coefficients with no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct ThetaPoly {
    fq: Fq,
    c: Vec<u8>,
}

impl fmt::Debug for ThetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

const KARATSUBA_CUTOFF: usize = 48;

impl ThetaPoly {
    pub fn new(fq: &Fq, mut c: Vec<u8>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        ThetaPoly { fq: fq.clone(), c }
    }
    pub fn zero(fq: &Fq) -> Self {
        ThetaPoly { fq: fq.clone(), c: vec![] }
    }
    pub fn one(fq: &Fq) -> Self {
        Self::constant(fq, 1)
    }
    pub fn constant(fq: &Fq, a: u8) -> Self {
        Self::new(fq, vec![a])
    }
    pub fn theta(fq: &Fq) -> Self {
        Self::monomial(fq, 1, 1)
    }
    pub fn monomial(fq: &Fq, a: u8, k: usize) -> Self {
        let mut c = vec![0u8; k + 1];
        c[k] = a;
        Self::new(fq, c)
    }
    /// θ^(q^i).
    pub fn theta_twist(fq: &Fq, i: u32) -> Self {
        Self::monomial(fq, 1, (fq.q() as usize).pow(i))
    }

    pub fn field(&self) -> &Fq {
        &self.fq
    }
    pub fn coeffs(&self) -> &[u8] {
        &self.c
    }
    pub fn coeff(&self, k: usize) -> u8 {
        self.c.get(k).copied().unwrap_or(0)
    }
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.c == [1]
    }
    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }
    pub fn lead(&self) -> u8 {
        self.c.last().copied().unwrap_or(0)
    }
    /// Index of the lowest nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.c.iter().position(|&x| x != 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let fq = &self.fq;
        let (long, short) = if self.c.len() >= o.c.len() { (&self.c, &o.c) } else { (&o.c, &self.c) };
        let mut c = long.clone();
        for (i, &b) in short.iter().enumerate() {
            c[i] = fq.add(c[i], b);
        }
        Self::new(fq, c)
    }
    pub fn neg(&self) -> Self {
        let fq = &self.fq;
        Self::new(fq, self.c.iter().map(|&a| fq.neg(a)).collect())
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn scale(&self, a: u8) -> Self {
        let row = self.fq.mul_row(a);
        Self::new(&self.fq, self.c.iter().map(|&x| row[x as usize]).collect())
    }
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0u8; k];
        c.extend_from_slice(&self.c);
        ThetaPoly { fq: self.fq.clone(), c }
    }
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.fq);
        }
        let mut out = vec![0u8; self.c.len() + o.c.len() - 1];
        mul_into(&self.fq, &self.c, &o.c, &mut out);
        Self::new(&self.fq, out)
    }
    pub fn pow(&self, mut e: u64) -> Self {
        let mut r = Self::one(&self.fq);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    /// Quotient and remainder; errors on division by zero.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::ZeroDivision)?;
        let fq = &self.fq;
        if self.c.len() <= dd {
            return Ok((Self::zero(fq), self.clone()));
        }
        let linv = fq.inv(d.lead())?;
        let mut r = self.c.clone();
        let mut qv = vec![0u8; r.len() - dd];
        for k in (0..qv.len()).rev() {
            let top = r[k + dd];
            if top == 0 {
                continue;
            }
            let f = fq.mul(top, linv);
            qv[k] = f;
            let row = fq.mul_row(f);
            for (j, &dj) in d.c.iter().enumerate() {
                r[k + j] = fq.sub(r[k + j], row[dj as usize]);
            }
        }
        r.truncate(dd);
        Ok((Self::new(fq, qv), Self::new(fq, r)))
    }
    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d).ok()?;
        r.is_zero().then_some(q)
    }
    pub fn monic(&self) -> Self {
        match self.fq.inv(self.lead()) {
            Ok(i) => self.scale(i),
            Err(_) => self.clone(),
        }
    }
    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.divrem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Frobenius twist θ -> θ^(q^i); F_q coefficients are fixed by x -> x^q.
    pub fn twist(&self, i: u32) -> Self {
        if i == 0 || self.c.len() <= 1 {
            return self.clone();
        }
        let s = (self.fq.q() as usize).pow(i);
        let mut c = vec![0u8; (self.c.len() - 1) * s + 1];
        for (k, &a) in self.c.iter().enumerate() {
            c[k * s] = a;
        }
        ThetaPoly { fq: self.fq.clone(), c }
    }
    /// Twist by a signed amount; negative amounts are rejected.
    pub fn twist_signed(&self, i: i64) -> Result<Self> {
        if i < 0 {
            return Err(Error::NegativeTwist);
        }
        Ok(self.twist(i as u32))
    }
    /// Inverse of [`ThetaPoly::twist`] when every exponent is divisible by q^i.
    pub fn untwist(&self, i: u32) -> Option<Self> {
        let s = (self.fq.q() as usize).pow(i);
        if self.c.iter().enumerate().any(|(k, &a)| a != 0 && k % s != 0) {
            return None;
        }
        Some(Self::new(&self.fq, self.c.iter().step_by(s).copied().collect()))
    }

    /// Evaluate at another polynomial (composition).
    pub fn compose(&self, x: &Self) -> Self {
        let mut acc = Self::zero(&self.fq);
        for &a in self.c.iter().rev() {
            acc = acc.mul(x).add(&Self::constant(&self.fq, a));
        }
        acc
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.c.iter().map(|&a| self.fq.elem_to_json(a)).collect())
    }
    pub fn from_json(fq: &Fq, v: &serde_json::Value) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("polynomial must be a coefficient array".into()))?;
        let c: Result<Vec<u8>> = arr.iter().map(|x| fq.elem_from_json(x)).collect();
        Ok(Self::new(fq, c?))
    }
}

/// out += a * b, schoolbook below the cutoff and Karatsuba above.
fn mul_into(fq: &Fq, a: &[u8], b: &[u8], out: &mut [u8]) {
    if a.len() < KARATSUBA_CUTOFF || b.len() < KARATSUBA_CUTOFF {
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let row = fq.mul_row(x);
            for (j, &y) in b.iter().enumerate() {
                let o = &mut out[i + j];
                *o = fq.add(*o, row[y as usize]);
            }
        }
        return;
    }
    let h = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(h.min(a.len()));
    let (b0, b1) = b.split_at(h.min(b.len()));
    if a1.is_empty() || b1.is_empty() {
        // unbalanced: split only the longer operand
        let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        let (l0, l1) = long.split_at(h);
        mul_into(fq, l0, short, &mut out[..l0.len() + short.len() - 1]);
        mul_into(fq, l1, short, &mut out[h..h + l1.len() + short.len() - 1]);
        return;
    }
    let mut z0 = vec![0u8; a0.len() + b0.len() - 1];
    mul_into(fq, a0, b0, &mut z0);
    let mut z2 = vec![0u8; a1.len() + b1.len() - 1];
    mul_into(fq, a1, b1, &mut z2);
    let sa: Vec<u8> = (0..a0.len().max(a1.len()))
        .map(|i| fq.add(*a0.get(i).unwrap_or(&0), *a1.get(i).unwrap_or(&0)))
        .collect();
    let sb: Vec<u8> = (0..b0.len().max(b1.len()))
        .map(|i| fq.add(*b0.get(i).unwrap_or(&0), *b1.get(i).unwrap_or(&0)))
        .collect();
    let mut z1 = vec![0u8; sa.len() + sb.len() - 1];
    mul_into(fq, &sa, &sb, &mut z1);
    for (i, &x) in z0.iter().enumerate() {
        z1[i] = fq.sub(z1[i], x);
        out[i] = fq.add(out[i], x);
    }
    for (i, &x) in z2.iter().enumerate() {
        z1[i] = fq.sub(z1[i], x);
        out[i + 2 * h] = fq.add(out[i + 2 * h], x);
    }
    for (i, &x) in z1.iter().enumerate() {
        if x != 0 {
            out[i + h] = fq.add(out[i + h], x);
        }
    }
}

impl fmt::Display for ThetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let coef = self.fq.format_elem(a);
            match (k, a == 1) {
                (0, _) => f.write_str(&coef)?,
                (1, true) => f.write_str("theta")?,
                (1, false) => write!(f, "{coef}*theta")?,
                (_, true) => write!(f, "theta^{k}")?,
                (_, false) => write!(f, "{coef}*theta^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32) -> Fq {
        Fq::new(q).unwrap()
    }

    #[test]
    fn karatsuba_matches_schoolbook() {
        let fq = f(3);
        let a = ThetaPoly::new(&fq, (0..200).map(|i| (i * 7 % 3) as u8).collect());
        let b = ThetaPoly::new(&fq, (0..131).map(|i| ((i * i + 1) % 3) as u8).collect());
        let mut slow = vec![0u8; 330];
        for (i, &x) in a.c.iter().enumerate() {
            for (j, &y) in b.c.iter().enumerate() {
                slow[i + j] = fq.add(slow[i + j], fq.mul(x, y));
            }
        }
        assert_eq!(a.mul(&b), ThetaPoly::new(&fq, slow));
    }

    #[test]
    fn divrem_and_gcd() {
        let fq = f(2);
        let t = ThetaPoly::theta(&fq);
        let one = ThetaPoly::one(&fq);
        let a = t.add(&one).pow(3).mul(&t);
        let b = t.add(&one).pow(2).mul(&t.pow(2).add(&t).add(&one));
        assert_eq!(a.gcd(&b), t.add(&one).pow(2));
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(a.divrem(&ThetaPoly::zero(&fq)).is_err());
    }

    #[test]
    fn twist_roundtrip() {
        let fq = f(3);
        let a = ThetaPoly::new(&fq, vec![1, 2, 0, 1]);
        let t2 = a.twist(2);
        assert_eq!(t2.degree(), Some(27));
        assert_eq!(t2.untwist(2).unwrap(), a);
        assert!(a.untwist(1).is_none());
        assert_eq!(a.twist_signed(-1), Err(Error::NegativeTwist));
        // twisting is the q-power Frobenius
        assert_eq!(a.twist(1), a.pow(3));
    }

    #[test]
    fn display() {
        let fq = f(2);
        assert_eq!(ThetaPoly::new(&fq, vec![0, 1, 1]).to_string(), "theta^2 + theta");
    }
}
