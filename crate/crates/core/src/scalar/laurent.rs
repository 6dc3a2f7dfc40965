//! Laurent series in u = 1/θ with tracked absolute precision.

use std::fmt;

use super::fq::Fq;
use super::ratfunc::RatFunc;
use super::theta::ThetaPoly;
use crate::error::{Error, Result};

/// `Σ_{e >= valuation} c_e u^e + O(u^precision)`, or an exact finite sum when
/// `precision` is `None`.
///
/// Invariants: the first stored coefficient is nonzero, no trailing zeros are
/// stored, and every stored exponent is below the precision. A zero series
/// has no coefficients; its valuation equals its precision (0 when exact).
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    fq: Fq,
    val: i64,
    c: Vec<u8>,
    prec: Option<i64>,
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl LaurentSeries {
    fn build(fq: &Fq, val: i64, mut c: Vec<u8>, prec: Option<i64>) -> Self {
        if let Some(n) = prec {
            let keep = (n - val).max(0) as usize;
            if c.len() > keep {
                c.truncate(keep);
            }
        }
        let lead = c.iter().position(|&x| x != 0);
        match lead {
            None => LaurentSeries { fq: fq.clone(), val: prec.unwrap_or(0), c: vec![], prec },
            Some(k) => {
                while c.last() == Some(&0) {
                    c.pop();
                }
                c.drain(..k);
                LaurentSeries { fq: fq.clone(), val: val + k as i64, c, prec }
            }
        }
    }

    /// Series from coefficients starting at exponent `val`.
    pub fn from_coeffs(fq: &Fq, val: i64, c: Vec<u8>, prec: Option<i64>) -> Self {
        Self::build(fq, val, c, prec)
    }
    pub fn zero(fq: &Fq) -> Self {
        Self::build(fq, 0, vec![], None)
    }
    /// The zero series known only to absolute precision `n`.
    pub fn zero_prec(fq: &Fq, n: i64) -> Self {
        Self::build(fq, n, vec![], Some(n))
    }
    pub fn one(fq: &Fq) -> Self {
        Self::monomial(fq, 1, 0)
    }
    /// a * u^e, exact.
    pub fn monomial(fq: &Fq, a: u8, e: i64) -> Self {
        Self::build(fq, e, vec![a], None)
    }
    /// Exact embedding of a polynomial in θ.
    pub fn from_theta_poly(p: &ThetaPoly) -> Self {
        let fq = p.field();
        match p.degree() {
            None => Self::zero(fq),
            Some(d) => {
                let c: Vec<u8> = (0..=d).map(|j| p.coeff(d - j)).collect();
                Self::build(fq, -(d as i64), c, None)
            }
        }
    }
    /// Expansion of a rational function to absolute precision `n`.
    pub fn from_ratfunc(r: &RatFunc, n: i64) -> Self {
        let a = Self::from_theta_poly(r.num());
        if r.is_polynomial() {
            return a.with_precision(n);
        }
        let b = Self::from_theta_poly(r.den());
        Self::div_to_prec(&a, &b, n).expect("denominator is nonzero")
    }

    pub fn field(&self) -> &Fq {
        &self.fq
    }
    /// Valuation; `None` for a (possibly inexact) zero.
    pub fn valuation(&self) -> Option<i64> {
        (!self.c.is_empty()).then_some(self.val)
    }
    /// Lower bound on the valuation, also meaningful for inexact zeros.
    pub fn val_lower_bound(&self) -> i64 {
        if self.c.is_empty() {
            self.prec.unwrap_or(i64::MAX)
        } else {
            self.val
        }
    }
    pub fn precision(&self) -> Option<i64> {
        self.prec
    }
    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    /// Stored coefficients, starting at the valuation.
    pub fn coeffs(&self) -> &[u8] {
        &self.c
    }
    /// Coefficient of u^e (zero outside the stored range).
    pub fn coeff(&self, e: i64) -> u8 {
        if e < self.val {
            return 0;
        }
        self.c.get((e - self.val) as usize).copied().unwrap_or(0)
    }
    /// Lower the absolute precision to at most `n`.
    pub fn with_precision(&self, n: i64) -> Self {
        Self::build(&self.fq, self.val, self.c.clone(), min_prec(self.prec, Some(n)))
    }

    /// Exact polynomial in θ, if the series is exact with no positive powers of u.
    pub fn to_theta_poly(&self) -> Option<ThetaPoly> {
        if !self.is_exact() {
            return None;
        }
        if self.c.is_empty() {
            return Some(ThetaPoly::zero(&self.fq));
        }
        let top = self.val + self.c.len() as i64 - 1;
        if top > 0 {
            return None;
        }
        let deg = (-self.val) as usize;
        let mut v = vec![0u8; deg + 1];
        for (j, &a) in self.c.iter().enumerate() {
            v[deg - j] = a;
        }
        Some(ThetaPoly::new(&self.fq, v))
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = min_prec(self.prec, o.prec);
        if self.c.is_empty() && o.c.is_empty() {
            return Self::build(&self.fq, 0, vec![], prec);
        }
        let lo = match (self.c.is_empty(), o.c.is_empty()) {
            (true, _) => o.val,
            (_, true) => self.val,
            _ => self.val.min(o.val),
        };
        let end_a = if self.c.is_empty() { lo } else { self.val + self.c.len() as i64 };
        let end_b = if o.c.is_empty() { lo } else { o.val + o.c.len() as i64 };
        let mut hi = end_a.max(end_b);
        if let Some(n) = prec {
            hi = hi.min(n);
        }
        if hi <= lo {
            return Self::build(&self.fq, lo, vec![], prec);
        }
        let mut c = vec![0u8; (hi - lo) as usize];
        for (j, &x) in self.c.iter().enumerate() {
            let e = self.val + j as i64;
            if e >= hi {
                break;
            }
            c[(e - lo) as usize] = x;
        }
        for (j, &x) in o.c.iter().enumerate() {
            let e = o.val + j as i64;
            if e >= hi {
                break;
            }
            let s = &mut c[(e - lo) as usize];
            *s = self.fq.add(*s, x);
        }
        Self::build(&self.fq, lo, c, prec)
    }
    pub fn neg(&self) -> Self {
        let fq = &self.fq;
        LaurentSeries { fq: fq.clone(), val: self.val, c: self.c.iter().map(|&x| fq.neg(x)).collect(), prec: self.prec }
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn scale(&self, a: u8) -> Self {
        let row = self.fq.mul_row(a);
        Self::build(&self.fq, self.val, self.c.iter().map(|&x| row[x as usize]).collect(), self.prec)
    }
    /// Multiply by u^k.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            fq: self.fq.clone(),
            val: if self.c.is_empty() && self.prec.is_none() { 0 } else { self.val + k },
            c: self.c.clone(),
            prec: self.prec.map(|n| n + k),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let fq = &self.fq;
        if (self.c.is_empty() && self.prec.is_none()) || (o.c.is_empty() && o.prec.is_none()) {
            return Self::zero(fq);
        }
        let va = self.val_lower_bound();
        let vb = o.val_lower_bound();
        let prec = min_prec(self.prec.map(|p| p + vb), o.prec.map(|p| p + va));
        if self.c.is_empty() || o.c.is_empty() {
            return Self::build(fq, 0, vec![], prec);
        }
        let v = self.val + o.val;
        let full = self.c.len() + o.c.len() - 1;
        let len = match prec {
            Some(n) => ((n - v).max(0) as usize).min(full),
            None => full,
        };
        let mut c = vec![0u8; len];
        for (i, &x) in self.c.iter().enumerate() {
            if i >= len {
                break;
            }
            if x == 0 {
                continue;
            }
            let row = fq.mul_row(x);
            let lim = (len - i).min(o.c.len());
            for (j, &y) in o.c[..lim].iter().enumerate() {
                let s = &mut c[i + j];
                *s = fq.add(*s, row[y as usize]);
            }
        }
        Self::build(fq, v, c, prec)
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

    /// First `n` coefficients of 1/A(u) for a unit power series A.
    fn inv_unit(fq: &Fq, a: &[u8], n: usize) -> Vec<u8> {
        let mut b = vec![0u8; n];
        if n == 0 {
            return b;
        }
        let b0 = fq.inv(a[0]).expect("unit");
        b[0] = b0;
        let nb0 = fq.neg(b0);
        for k in 1..n {
            let mut s = 0u8;
            for j in 1..=k.min(a.len() - 1) {
                s = fq.add(s, fq.mul(a[j], b[k - j]));
            }
            b[k] = fq.mul(nb0, s);
        }
        b
    }

    /// a / b to absolute precision `n` (further limited by inexact inputs).
    pub fn div_to_prec(a: &Self, b: &Self, n: i64) -> Result<Self> {
        if b.c.is_empty() {
            return Err(Error::ZeroDivision);
        }
        let fq = &a.fq;
        let v = a.val_lower_bound().saturating_sub(b.val);
        let rel_b = b.prec.map(|p| p - b.val);
        let mut prec = n;
        if let Some(rb) = rel_b {
            prec = prec.min(a.val_lower_bound().saturating_sub(b.val).saturating_add(rb));
        }
        if let Some(pa) = a.prec {
            prec = prec.min(pa - b.val);
        }
        if a.c.is_empty() {
            return Ok(Self::build(fq, prec, vec![], Some(prec)));
        }
        let r = (prec - v).max(0) as usize;
        let binv = Self::inv_unit(fq, &b.c, r);
        let q = Self::build(fq, -b.val, binv, Some(-b.val + r as i64));
        Ok(a.mul(&q).with_precision(prec))
    }

    /// Division; exact operands must divide exactly as Laurent polynomials.
    pub fn try_div(&self, o: &Self) -> Result<Self> {
        if o.c.is_empty() {
            return Err(Error::ZeroDivision);
        }
        if self.is_exact() && o.is_exact() {
            return self.exact_div(o).ok_or_else(|| {
                Error::Unsupported("division of exact series without a precision".into())
            });
        }
        let a_rel = self.prec.map(|p| p - self.val_lower_bound());
        let b_rel = o.prec.map(|p| p - o.val);
        let rel = match (a_rel, b_rel) {
            (Some(x), Some(y)) => x.min(y),
            (Some(x), None) => x,
            (None, Some(y)) => y,
            (None, None) => unreachable!(),
        };
        let target = self.val_lower_bound().saturating_sub(o.val).saturating_add(rel);
        Self::div_to_prec(self, o, target)
    }

    fn exact_div(&self, o: &Self) -> Option<Self> {
        if self.c.is_empty() {
            return Some(Self::zero(&self.fq));
        }
        // divide A(u) by B(u) as polynomials with nonzero constant terms
        let a = ThetaPoly::new(&self.fq, self.c.clone());
        let b = ThetaPoly::new(&self.fq, o.c.clone());
        let q = a.exact_div(&b)?;
        Some(Self::build(&self.fq, self.val - o.val, q.coeffs().to_vec(), None))
    }

    /// Frobenius twist x -> x^(q^i) (exponents scale by q^i).
    pub fn twist(&self, i: u32) -> Self {
        if i == 0 || self.c.is_empty() && self.prec.is_none() {
            return self.clone();
        }
        let s = (self.fq.q() as i64).pow(i);
        let mut c = vec![0u8; if self.c.is_empty() { 0 } else { (self.c.len() - 1) * s as usize + 1 }];
        for (j, &x) in self.c.iter().enumerate() {
            c[j * s as usize] = x;
        }
        LaurentSeries { fq: self.fq.clone(), val: self.val * s, c, prec: self.prec.map(|p| p * s) }
    }

    /// Valuation of the difference, capped by the joint precision.
    pub fn agreement(&self, o: &Self) -> i64 {
        let d = self.sub(o);
        match d.valuation() {
            Some(v) => v,
            None => d.prec.unwrap_or(i64::MAX),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "var": "1/theta",
            "valuation": self.val,
            "precision": self.prec,
            "coeffs": self.c.iter().map(|&x| self.fq.elem_to_json(x)).collect::<Vec<_>>(),
        })
    }
    pub fn from_json(fq: &Fq, v: &serde_json::Value) -> Result<Self> {
        if v.get("var").and_then(|x| x.as_str()) != Some("1/theta") {
            return Err(Error::Parse("Laurent series must have var \"1/theta\"".into()));
        }
        let val = v.get("valuation").and_then(|x| x.as_i64()).ok_or_else(|| Error::Parse("missing valuation".into()))?;
        let prec = match v.get("precision") {
            None | Some(serde_json::Value::Null) => None,
            Some(x) => Some(x.as_i64().ok_or_else(|| Error::Parse("bad precision".into()))?),
        };
        let coeffs = v.get("coeffs").and_then(|x| x.as_array()).ok_or_else(|| Error::Parse("missing coeffs".into()))?;
        let c: Result<Vec<u8>> = coeffs.iter().map(|x| fq.elem_from_json(x)).collect();
        Ok(Self::build(fq, val, c?, prec))
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let e = self.val + j as i64;
            let coef = self.fq.format_elem(a);
            parts.push(match (e, a == 1) {
                (0, _) => coef,
                (1, true) => "u".to_string(),
                (_, true) => format!("u^{e}"),
                (1, false) => format!("{coef}*u"),
                (_, false) => format!("{coef}*u^{e}"),
            });
        }
        if let Some(n) = self.prec {
            parts.push(format!("O(u^{n})"));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_example() {
        // 1/(θ^2+θ) = u^2 + u^3 + O(u^4) over F_2
        let fq = Fq::new(2).unwrap();
        let r = RatFunc::new(ThetaPoly::one(&fq), ThetaPoly::new(&fq, vec![0, 1, 1])).unwrap();
        let s = LaurentSeries::from_ratfunc(&r, 4);
        assert_eq!(s.to_string(), "u^2 + u^3 + O(u^4)");
        assert_eq!(s.valuation(), Some(2));
    }

    #[test]
    fn precision_propagation() {
        let fq = Fq::new(3).unwrap();
        let a = LaurentSeries::from_coeffs(&fq, -2, vec![1, 2, 1], Some(5));
        let b = LaurentSeries::from_coeffs(&fq, 1, vec![2], Some(3));
        let p = a.mul(&b);
        assert_eq!(p.precision(), Some(1));
        let z = LaurentSeries::zero_prec(&fq, 7);
        assert_eq!(z.valuation(), None);
        assert_eq!(z.val_lower_bound(), 7);
        let q = a.try_div(&a).unwrap();
        assert_eq!(q.agreement(&LaurentSeries::one(&fq)), q.precision().unwrap());
    }

    #[test]
    fn exact_division() {
        let fq = Fq::new(2).unwrap();
        let t = ThetaPoly::theta(&fq);
        let a = LaurentSeries::from_theta_poly(&t.mul(&t.add(&ThetaPoly::one(&fq))));
        let b = LaurentSeries::from_theta_poly(&t.add(&ThetaPoly::one(&fq)));
        assert_eq!(a.try_div(&b).unwrap(), LaurentSeries::from_theta_poly(&t));
        // (θ+1)/(θ^2+θ) = 1/θ is a Laurent polynomial
        assert_eq!(b.try_div(&a).unwrap(), LaurentSeries::monomial(&fq, 1, 1));
        let c = LaurentSeries::from_theta_poly(&t.mul(&t).add(&ThetaPoly::one(&fq)));
        assert!(b.try_div(&c).is_err());
    }

    #[test]
    fn twist_is_frobenius() {
        let fq = Fq::new(3).unwrap();
        let a = LaurentSeries::from_coeffs(&fq, -1, vec![1, 2, 0, 1], Some(6));
        // the generic product loses precision that the Frobenius keeps
        let p = a.pow(3);
        assert_eq!(a.twist(1).agreement(&p), p.precision().unwrap());
        assert_eq!(a.twist(1).precision(), Some(18));
    }

    #[test]
    fn json_roundtrip() {
        let fq = Fq::new(4).unwrap();
        let a = LaurentSeries::from_coeffs(&fq, -3, vec![2, 0, 3, 1], Some(10));
        let back = LaurentSeries::from_json(&fq, &a.to_json()).unwrap();
        assert_eq!(a, back);
    }
}
