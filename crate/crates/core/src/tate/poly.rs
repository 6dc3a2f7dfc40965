//! Dense polynomials in t over a scalar type.

use std::fmt;

use crate::error::Result;
use crate::scalar::{lucas_binomial, Fq, Scalar, ThetaPoly};

/// Polynomial Σ c_i t^i; trailing exact zeros are stripped.
#[derive(Clone, PartialEq)]
pub struct TPoly<S: Scalar> {
    fq: Fq,
    c: Vec<S>,
}

impl<S: Scalar> fmt::Debug for TPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<S: Scalar> fmt::Display for TPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => format!("({a})"),
                1 => format!("({a})*t"),
                _ => format!("({a})*t^{i}"),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        f.write_str(&parts.join(" + "))
    }
}

pub(crate) fn is_exact_zero<S: Scalar>(x: &S) -> bool {
    x.is_zero() && x.valuation().is_none() && *x == S::zero(x.fq())
}

impl<S: Scalar> TPoly<S> {
    pub fn new(fq: &Fq, mut c: Vec<S>) -> Self {
        while c.last().is_some_and(is_exact_zero) {
            c.pop();
        }
        TPoly { fq: fq.clone(), c }
    }
    pub fn zero(fq: &Fq) -> Self {
        TPoly { fq: fq.clone(), c: vec![] }
    }
    pub fn one(fq: &Fq) -> Self {
        Self::constant(S::one(fq))
    }
    pub fn constant(a: S) -> Self {
        let fq = a.fq().clone();
        Self::new(&fq, vec![a])
    }
    /// The polynomial t.
    pub fn t(fq: &Fq) -> Self {
        Self::new(fq, vec![S::zero(fq), S::one(fq)])
    }
    /// t - a.
    pub fn linear(a: &S) -> Self {
        let fq = a.fq().clone();
        Self::new(&fq, vec![a.neg(), S::one(&fq)])
    }
    /// (t - θ^(q^j))^m.
    pub fn theta_factor_pow(fq: &Fq, j: u32, m: u32) -> Self {
        let a = S::from_theta(&ThetaPoly::theta_twist(fq, j));
        Self::linear(&a).pow(m)
    }

    pub fn field(&self) -> &Fq {
        &self.fq
    }
    pub fn coeffs(&self) -> &[S] {
        &self.c
    }
    pub fn coeff(&self, i: usize) -> S {
        self.c.get(i).cloned().unwrap_or_else(|| S::zero(&self.fq))
    }
    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    pub fn len(&self) -> usize {
        self.c.len()
    }
    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }
    /// True when every coefficient is (numerically) zero.
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let z = S::zero(&self.fq);
        let c = (0..n)
            .map(|i| match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => z.clone(),
            })
            .collect();
        Self::new(&self.fq, c)
    }
    pub fn neg(&self) -> Self {
        Self::new(&self.fq, self.c.iter().map(|a| a.neg()).collect())
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn scale(&self, s: &S) -> Self {
        Self::new(&self.fq, self.c.iter().map(|a| a.mul(s)).collect())
    }
    /// Multiply by t^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.c.is_empty() {
            return self.clone();
        }
        let mut c = vec![S::zero(&self.fq); k];
        c.extend(self.c.iter().cloned());
        Self::new(&self.fq, c)
    }
    pub fn mul(&self, o: &Self) -> Self {
        if self.c.is_empty() || o.c.is_empty() {
            return Self::zero(&self.fq);
        }
        let mut c = vec![S::zero(&self.fq); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if is_exact_zero(a) {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if is_exact_zero(b) {
                    continue;
                }
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        Self::new(&self.fq, c)
    }
    pub fn pow(&self, mut e: u32) -> Self {
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
    /// Coefficientwise Frobenius twist (t is fixed).
    pub fn twist(&self, i: u32) -> Self {
        if i == 0 {
            return self.clone();
        }
        Self::new(&self.fq, self.c.iter().map(|a| a.twist(i)).collect())
    }
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> TPoly<T> {
        TPoly::new(&self.fq, self.c.iter().map(f).collect())
    }
    /// Keep the coefficients of degree <= d.
    pub fn truncate(&self, d: usize) -> Self {
        Self::new(&self.fq, self.c.iter().take(d + 1).cloned().collect())
    }

    /// Horner evaluation at t = x.
    pub fn eval(&self, x: &S) -> S {
        let mut acc = S::zero(&self.fq);
        for a in self.c.iter().rev() {
            acc = acc.mul(x).add(a);
        }
        acc
    }

    /// Division by t - x: returns (quotient, remainder = value at x).
    pub fn div_linear(&self, x: &S) -> (Self, S) {
        if self.c.is_empty() {
            return (self.clone(), S::zero(&self.fq));
        }
        let n = self.c.len();
        let mut qv = vec![S::zero(&self.fq); n - 1];
        let mut carry = S::zero(&self.fq);
        for k in (0..n).rev() {
            let v = self.c[k].add(&carry.mul(x));
            if k == 0 {
                return (Self::new(&self.fq, qv), v);
            }
            qv[k - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }

    /// Taylor coefficients ∂^m f(x) for m < order.
    pub fn taylor_at(&self, x: &S, order: usize) -> Vec<S> {
        let mut out = Vec::with_capacity(order);
        let mut cur = self.clone();
        for _ in 0..order {
            let (q, r) = cur.div_linear(x);
            out.push(r);
            cur = q;
        }
        out
    }

    /// Hyperderivative ∂^j: coefficients C(i, j) b_i t^(i-j).
    pub fn hyperderivative(&self, j: usize) -> Self {
        let p = self.fq.p() as u64;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(j)
            .map(|(i, a)| a.scale_fq(lucas_binomial(i as u64, j as u64, p) as u8))
            .collect();
        Self::new(&self.fq, c)
    }

    /// Quotient and remainder modulo a monic polynomial.
    pub fn div_rem_monic(&self, m: &Self) -> (Self, Self) {
        let dm = m.degree().expect("nonzero modulus");
        let mut r = self.c.clone();
        if r.len() <= dm {
            return (Self::zero(&self.fq), self.clone());
        }
        let mut qv = vec![S::zero(&self.fq); r.len() - dm];
        while r.len() > dm {
            let top = r.pop().unwrap();
            let shift = r.len() - dm;
            for (k, mk) in m.c.iter().enumerate().take(dm) {
                r[shift + k] = r[shift + k].sub(&top.mul(mk));
            }
            qv[shift] = top;
        }
        (Self::new(&self.fq, qv), Self::new(&self.fq, r))
    }

    /// Remainder modulo a monic polynomial.
    pub fn rem_monic(&self, m: &Self) -> Result<Self> {
        let dm = m.degree().expect("nonzero modulus");
        let mut r = self.c.clone();
        while r.len() > dm {
            let top = r.pop().unwrap();
            let shift = r.len() - dm;
            for (k, mk) in m.c.iter().enumerate().take(dm) {
                r[shift + k] = r[shift + k].sub(&top.mul(mk));
            }
        }
        Ok(Self::new(&self.fq, r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ThetaPoly;

    #[test]
    fn hyperderivative_leibniz() {
        let fq = Fq::new(3).unwrap();
        let th = ThetaPoly::theta(&fq);
        let f: TPoly<ThetaPoly> = TPoly::new(&fq, vec![th.clone(), ThetaPoly::one(&fq), th.pow(2), ThetaPoly::constant(&fq, 2), th.clone()]);
        let g: TPoly<ThetaPoly> = TPoly::new(&fq, vec![ThetaPoly::one(&fq), th.clone(), ThetaPoly::zero(&fq), th.clone()]);
        for k in 0..6 {
            let lhs = f.mul(&g).hyperderivative(k);
            let mut rhs = TPoly::zero(&fq);
            for a in 0..=k {
                rhs = rhs.add(&f.hyperderivative(a).mul(&g.hyperderivative(k - a)));
            }
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn taylor_matches_hyperderivatives() {
        let fq = Fq::new(2).unwrap();
        let th = ThetaPoly::theta(&fq);
        let f: TPoly<ThetaPoly> = TPoly::linear(&th).pow(3).mul(&TPoly::t(&fq));
        let x = th.pow(2);
        let tay = f.taylor_at(&x, 4);
        for (m, v) in tay.iter().enumerate() {
            assert_eq!(v, &f.hyperderivative(m).eval(&x));
        }
    }
}
