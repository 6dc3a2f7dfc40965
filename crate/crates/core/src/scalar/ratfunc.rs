//! Rational functions in θ over F_q.

use std::fmt;

use super::fq::Fq;
use super::theta::ThetaPoly;
use crate::error::{Error, Result};

/// Reduced fraction num/den with den monic and gcd(num, den) = 1.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: ThetaPoly,
    den: ThetaPoly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl RatFunc {
    pub fn new(num: ThetaPoly, den: ThetaPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDivision);
        }
        let fq = num.field().clone();
        if num.is_zero() {
            return Ok(Self::zero(&fq));
        }
        let (num, den) = if den.is_one() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            let (n, d) = if g.is_one() {
                (num, den)
            } else {
                (num.divrem(&g)?.0, den.divrem(&g)?.0)
            };
            let li = fq.inv(d.lead())?;
            (n.scale(li), d.scale(li))
        };
        Ok(RatFunc { num, den })
    }
    pub fn from_poly(p: ThetaPoly) -> Self {
        let fq = p.field().clone();
        RatFunc { num: p, den: ThetaPoly::one(&fq) }
    }
    pub fn zero(fq: &Fq) -> Self {
        Self::from_poly(ThetaPoly::zero(fq))
    }
    pub fn one(fq: &Fq) -> Self {
        Self::from_poly(ThetaPoly::one(fq))
    }
    pub fn constant(fq: &Fq, a: u8) -> Self {
        Self::from_poly(ThetaPoly::constant(fq, a))
    }
    pub fn theta(fq: &Fq) -> Self {
        Self::from_poly(ThetaPoly::theta(fq))
    }

    pub fn field(&self) -> &Fq {
        self.num.field()
    }
    pub fn num(&self) -> &ThetaPoly {
        &self.num
    }
    pub fn den(&self) -> &ThetaPoly {
        &self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }
    pub fn as_poly(&self) -> Option<&ThetaPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    /// Valuation at infinity: deg den - deg num, so |x| = q^(-valuation).
    pub fn valuation(&self) -> Option<i64> {
        let dn = self.num.degree()? as i64;
        Some(self.den.degree().unwrap() as i64 - dn)
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            if self.den.is_one() {
                return Self::from_poly(self.num.add(&o.num));
            }
            return Self::new(self.num.add(&o.num), self.den.clone()).unwrap();
        }
        if self.den.is_one() {
            return RatFunc { num: self.num.mul(&o.den).add(&o.num), den: o.den.clone() };
        }
        if o.den.is_one() {
            return RatFunc { num: o.num.mul(&self.den).add(&self.num), den: self.den.clone() };
        }
        let g = self.den.gcd(&o.den);
        let a = self.den.divrem(&g).unwrap().0;
        let b = o.den.divrem(&g).unwrap().0;
        let num = self.num.mul(&b).add(&o.num.mul(&a));
        Self::new(num, a.mul(&o.den)).unwrap()
    }
    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.field());
        }
        if self.den.is_one() && o.den.is_one() {
            return Self::from_poly(self.num.mul(&o.num));
        }
        // cross-cancel before multiplying to keep sizes down
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n1 = self.num.divrem(&g1).unwrap().0;
        let d2 = o.den.divrem(&g1).unwrap().0;
        let n2 = o.num.divrem(&g2).unwrap().0;
        let d1 = self.den.divrem(&g2).unwrap().0;
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let li = self.field().inv(den.lead()).unwrap();
        RatFunc { num: num.scale(li), den: den.scale(li) }
    }
    pub fn mul_poly(&self, p: &ThetaPoly) -> Self {
        self.mul(&Self::from_poly(p.clone()))
    }
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDivision);
        }
        let li = self.field().inv(self.num.lead())?;
        Ok(RatFunc { num: self.den.scale(li), den: self.num.scale(li) })
    }
    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }
    pub fn pow(&self, e: u64) -> Self {
        RatFunc { num: self.num.pow(e), den: self.den.pow(e) }
    }
    pub fn twist(&self, i: u32) -> Self {
        // twisting preserves coprimality and monicity
        RatFunc { num: self.num.twist(i), den: self.den.twist(i) }
    }
    pub fn twist_signed(&self, i: i64) -> Result<Self> {
        if i < 0 {
            return Err(Error::NegativeTwist);
        }
        Ok(self.twist(i as u32))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "num": self.num.to_json(), "den": self.den.to_json() })
    }
    pub fn from_json(fq: &Fq, v: &serde_json::Value) -> Result<Self> {
        if v.is_array() {
            return Ok(Self::from_poly(ThetaPoly::from_json(fq, v)?));
        }
        let num = ThetaPoly::from_json(fq, v.get("num").ok_or_else(|| Error::Parse("missing num".into()))?)?;
        let den = ThetaPoly::from_json(fq, v.get("den").ok_or_else(|| Error::Parse("missing den".into()))?)?;
        Self::new(num, den)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
