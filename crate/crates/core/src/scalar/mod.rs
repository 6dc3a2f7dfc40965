//! Scalars: F_q, F_q[θ], F_q(θ) and Laurent series in 1/θ.

pub mod fq;
pub mod laurent;
pub mod parse;
pub mod ratfunc;
pub mod theta;

use std::fmt;

pub use fq::{lucas_binomial, Fq, FqElement};
pub use laurent::LaurentSeries;
pub use ratfunc::RatFunc;
pub use theta::ThetaPoly;

use crate::error::{Error, Result};

/// Common arithmetic over the scalar types used as coefficients in t.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// Field of fractions (or the type itself when already a field).
    type Field: Scalar<Field = Self::Field>;

    fn fq(&self) -> &Fq;
    fn zero(fq: &Fq) -> Self;
    fn one(fq: &Fq) -> Self;
    fn from_theta(p: &ThetaPoly) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Division; for polynomials only exact division succeeds.
    fn try_div(&self, o: &Self) -> Result<Self>;
    fn is_zero(&self) -> bool;
    /// Frobenius twist by `i >= 0`.
    fn twist(&self, i: u32) -> Self;
    /// Valuation in u = 1/θ, `None` for zero.
    fn valuation(&self) -> Option<i64>;
    fn to_field(&self) -> Self::Field;
    /// Write a field element as numerator / denominator in this ring.
    fn frac_parts(f: &Self::Field) -> (Self, Self);

    fn from_fq(fq: &Fq, a: u8) -> Self {
        Self::from_theta(&ThetaPoly::constant(fq, a))
    }
    fn scale_fq(&self, a: u8) -> Self {
        self.mul(&Self::from_fq(self.fq(), a))
    }
    fn pow(&self, mut e: u64) -> Self {
        let mut r = Self::one(self.fq());
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
}

impl Scalar for ThetaPoly {
    type Field = RatFunc;
    fn fq(&self) -> &Fq {
        self.field()
    }
    fn zero(fq: &Fq) -> Self {
        ThetaPoly::zero(fq)
    }
    fn one(fq: &Fq) -> Self {
        ThetaPoly::one(fq)
    }
    fn from_theta(p: &ThetaPoly) -> Self {
        p.clone()
    }
    fn add(&self, o: &Self) -> Self {
        ThetaPoly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        ThetaPoly::sub(self, o)
    }
    fn neg(&self) -> Self {
        ThetaPoly::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        ThetaPoly::mul(self, o)
    }
    fn try_div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::ZeroDivision);
        }
        self.exact_div(o).ok_or_else(|| Error::Unsupported("inexact polynomial division".into()))
    }
    fn is_zero(&self) -> bool {
        ThetaPoly::is_zero(self)
    }
    fn twist(&self, i: u32) -> Self {
        ThetaPoly::twist(self, i)
    }
    fn valuation(&self) -> Option<i64> {
        self.degree().map(|d| -(d as i64))
    }
    fn to_field(&self) -> RatFunc {
        RatFunc::from_poly(self.clone())
    }
    fn frac_parts(f: &RatFunc) -> (Self, Self) {
        (f.num().clone(), f.den().clone())
    }
    fn scale_fq(&self, a: u8) -> Self {
        self.scale(a)
    }
    fn pow(&self, e: u64) -> Self {
        ThetaPoly::pow(self, e)
    }
}

impl Scalar for RatFunc {
    type Field = RatFunc;
    fn fq(&self) -> &Fq {
        self.field()
    }
    fn zero(fq: &Fq) -> Self {
        RatFunc::zero(fq)
    }
    fn one(fq: &Fq) -> Self {
        RatFunc::one(fq)
    }
    fn from_theta(p: &ThetaPoly) -> Self {
        RatFunc::from_poly(p.clone())
    }
    fn add(&self, o: &Self) -> Self {
        RatFunc::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RatFunc::sub(self, o)
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        RatFunc::mul(self, o)
    }
    fn try_div(&self, o: &Self) -> Result<Self> {
        self.div(o)
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn twist(&self, i: u32) -> Self {
        RatFunc::twist(self, i)
    }
    fn valuation(&self) -> Option<i64> {
        RatFunc::valuation(self)
    }
    fn to_field(&self) -> RatFunc {
        self.clone()
    }
    fn frac_parts(f: &RatFunc) -> (Self, Self) {
        (f.clone(), RatFunc::one(f.field()))
    }
    fn pow(&self, e: u64) -> Self {
        RatFunc::pow(self, e)
    }
}

impl Scalar for LaurentSeries {
    type Field = LaurentSeries;
    fn fq(&self) -> &Fq {
        self.field()
    }
    fn zero(fq: &Fq) -> Self {
        LaurentSeries::zero(fq)
    }
    fn one(fq: &Fq) -> Self {
        LaurentSeries::one(fq)
    }
    fn from_theta(p: &ThetaPoly) -> Self {
        LaurentSeries::from_theta_poly(p)
    }
    fn add(&self, o: &Self) -> Self {
        LaurentSeries::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        LaurentSeries::sub(self, o)
    }
    fn neg(&self) -> Self {
        LaurentSeries::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        LaurentSeries::mul(self, o)
    }
    fn try_div(&self, o: &Self) -> Result<Self> {
        LaurentSeries::try_div(self, o)
    }
    fn is_zero(&self) -> bool {
        LaurentSeries::is_zero(self)
    }
    fn twist(&self, i: u32) -> Self {
        LaurentSeries::twist(self, i)
    }
    fn valuation(&self) -> Option<i64> {
        LaurentSeries::valuation(self)
    }
    fn to_field(&self) -> LaurentSeries {
        self.clone()
    }
    fn frac_parts(f: &LaurentSeries) -> (Self, Self) {
        (f.clone(), LaurentSeries::one(f.field()))
    }
    fn scale_fq(&self, a: u8) -> Self {
        self.scale(a)
    }
    fn pow(&self, e: u64) -> Self {
        LaurentSeries::pow(self, e)
    }
}

/// Frobenius twist with a signed amount; negative amounts are an error.
pub fn frobenius_twist<S: Scalar>(x: &S, i: i64) -> Result<S> {
    if i < 0 {
        return Err(Error::NegativeTwist);
    }
    Ok(x.twist(i as u32))
}

/// Conversion of exact scalars into Laurent series at a given precision.
pub trait ToLaurent {
    fn to_laurent(&self, prec: i64) -> LaurentSeries;
}
impl ToLaurent for ThetaPoly {
    fn to_laurent(&self, prec: i64) -> LaurentSeries {
        LaurentSeries::from_theta_poly(self).with_precision(prec)
    }
}
impl ToLaurent for RatFunc {
    fn to_laurent(&self, prec: i64) -> LaurentSeries {
        LaurentSeries::from_ratfunc(self, prec)
    }
}
impl ToLaurent for LaurentSeries {
    fn to_laurent(&self, prec: i64) -> LaurentSeries {
        self.with_precision(prec)
    }
}
