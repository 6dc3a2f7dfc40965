//! Vectors of rational functions in t whose denominators are a scalar times
//! a product of factors (t - θ^(q^j))^m.

use std::collections::BTreeMap;

use super::poly::TPoly;
use crate::error::{Error, Result};
use crate::scalar::{lucas_binomial, Fq, Scalar, ThetaPoly};

/// `num / (den · Π_j (t - θ^(q^j))^poles[j])`, coordinatewise.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalVector<S: Scalar> {
    pub num: Vec<TPoly<S>>,
    pub den: S,
    pub poles: BTreeMap<u32, u32>,
}

/// θ^(q^j) as a scalar.
pub fn theta_point<S: Scalar>(fq: &Fq, j: u32) -> S {
    S::from_theta(&ThetaPoly::theta_twist(fq, j))
}

impl<S: Scalar> RationalVector<S> {
    pub fn from_polys(fq: &Fq, num: Vec<TPoly<S>>) -> Self {
        RationalVector { num, den: S::one(fq), poles: BTreeMap::new() }
    }
    pub fn zero(fq: &Fq, len: usize) -> Self {
        Self::from_polys(fq, vec![TPoly::zero(fq); len])
    }
    /// Unit vector e_k of length `len`.
    pub fn unit(fq: &Fq, len: usize, k: usize) -> Self {
        let mut v = vec![TPoly::zero(fq); len];
        v[k] = TPoly::one(fq);
        Self::from_polys(fq, v)
    }
    pub fn field(&self) -> &Fq {
        self.den.fq()
    }
    pub fn len(&self) -> usize {
        self.num.len()
    }
    pub fn is_empty(&self) -> bool {
        self.num.is_empty()
    }
    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|p| p.is_zero())
    }
    /// True when there is no t-denominator left.
    pub fn is_polynomial_in_t(&self) -> bool {
        self.poles.values().all(|&m| m == 0)
    }
    /// Total pole multiplicity.
    pub fn pole_degree(&self) -> u32 {
        self.poles.values().sum()
    }

    fn denominator_poly(&self) -> TPoly<S> {
        let fq = self.field();
        let mut d = TPoly::one(fq);
        for (&j, &m) in &self.poles {
            d = d.mul(&TPoly::theta_factor_pow(fq, j, m));
        }
        d
    }

    /// Coordinates as polynomials over the field of fractions, when there are
    /// no poles left.
    pub fn to_polys(&self) -> Option<Vec<TPoly<S::Field>>> {
        if !self.is_polynomial_in_t() {
            return None;
        }
        let dinv = S::Field::one(self.field()).try_div(&self.den.to_field()).ok()?;
        Some(self.num.iter().map(|p| p.map(|a| a.to_field().mul(&dinv))).collect())
    }

    /// Coordinates as exact polynomials over S, when possible.
    pub fn to_ring_polys(&self) -> Option<Vec<TPoly<S>>> {
        if !self.is_polynomial_in_t() {
            return None;
        }
        let mut out = Vec::with_capacity(self.num.len());
        for p in &self.num {
            let c: Option<Vec<S>> = p.coeffs().iter().map(|a| a.try_div(&self.den).ok()).collect();
            out.push(TPoly::new(self.field(), c?));
        }
        Some(out)
    }

    pub fn twist(&self, i: u32) -> Self {
        RationalVector {
            num: self.num.iter().map(|p| p.twist(i)).collect(),
            den: self.den.twist(i),
            poles: self.poles.iter().map(|(&j, &m)| (j + i, m)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        RationalVector { num: self.num.iter().map(|p| p.neg()).collect(), den: self.den.clone(), poles: self.poles.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.len(), o.len(), "vector lengths differ");
        let fq = self.field().clone();
        let mut poles = self.poles.clone();
        for (&j, &m) in &o.poles {
            let e = poles.entry(j).or_insert(0);
            *e = (*e).max(m);
        }
        let lift = |v: &Self| -> TPoly<S> {
            let mut f = TPoly::one(&fq);
            for (&j, &m) in &poles {
                let have = v.poles.get(&j).copied().unwrap_or(0);
                if m > have {
                    f = f.mul(&TPoly::theta_factor_pow(&fq, j, m - have));
                }
            }
            f
        };
        let fa = lift(self);
        let fb = lift(o);
        let (ca, cb, den) = if self.den == o.den {
            (S::one(&fq), S::one(&fq), self.den.clone())
        } else {
            (o.den.clone(), self.den.clone(), self.den.mul(&o.den))
        };
        let num = self
            .num
            .iter()
            .zip(&o.num)
            .map(|(a, b)| a.mul(&fa).scale(&ca).add(&b.mul(&fb).scale(&cb)))
            .collect();
        RationalVector { num, den, poles }
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Multiply every coordinate by the scalar a/b.
    pub fn scale_frac(&self, a: &S, b: &S) -> Self {
        RationalVector {
            num: self.num.iter().map(|p| p.scale(a)).collect(),
            den: self.den.mul(b),
            poles: self.poles.clone(),
        }
    }
    pub fn scale(&self, a: &S) -> Self {
        RationalVector { num: self.num.iter().map(|p| p.scale(a)).collect(), den: self.den.clone(), poles: self.poles.clone() }
    }
    /// Multiply every coordinate by a polynomial in t.
    pub fn mul_poly(&self, f: &TPoly<S>) -> Self {
        RationalVector { num: self.num.iter().map(|p| p.mul(f)).collect(), den: self.den.clone(), poles: self.poles.clone() }
    }

    /// Left multiplication by a polynomial matrix (rows of `m` act on `self`).
    pub fn mat_mul(&self, m: &[Vec<TPoly<S>>]) -> Self {
        let fq = self.field();
        let num = m
            .iter()
            .map(|row| {
                let mut acc = TPoly::zero(fq);
                for (a, x) in row.iter().zip(&self.num) {
                    if !a.is_empty() && !x.is_empty() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect();
        RationalVector { num, den: self.den.clone(), poles: self.poles.clone() }
    }

    /// Divide by (t - θ^(q^j))^m and by the scalar `c`.
    pub fn divide(&self, c: &S, j: u32, m: u32) -> Self {
        let mut poles = self.poles.clone();
        if m > 0 {
            *poles.entry(j).or_insert(0) += m;
        }
        RationalVector { num: self.num.clone(), den: self.den.mul(c), poles }
    }

    /// Cancel common factors (t - θ^(q^j)) between numerators and poles.
    pub fn cancel(&self) -> Self {
        let fq = self.field().clone();
        let mut out = self.clone();
        for (&j, m) in out.poles.iter_mut() {
            let a: S = theta_point(&fq, j);
            while *m > 0 {
                let divs: Vec<(TPoly<S>, S)> = out.num.iter().map(|p| p.div_linear(&a)).collect();
                if divs.iter().any(|(_, r)| !r.is_zero()) {
                    break;
                }
                out.num = divs.into_iter().map(|(q, _)| q).collect();
                *m -= 1;
            }
        }
        out.poles.retain(|_, m| *m > 0);
        out
    }

    /// Taylor coefficients ∂^k f_i(c) for k < orders[i], coordinatewise.
    pub fn jets(&self, c: &S, orders: &[usize]) -> Result<Vec<Vec<S::Field>>> {
        let fq = self.field().clone();
        let reduced;
        let mut me = self;
        // poles at the evaluation point must cancel first
        if self.poles.keys().any(|&j| c.sub(&theta_point::<S>(&fq, j)).is_zero()) {
            reduced = self.cancel();
            me = &reduced;
            if let Some((&j, _)) = me.poles.iter().find(|(&j, _)| c.sub(&theta_point::<S>(&fq, j)).is_zero()) {
                return Err(Error::PoleAtEvaluationPoint(format!("t = theta^(q^{j})")));
            }
        }
        let order = orders.iter().copied().max().unwrap_or(0);
        if order == 0 {
            return Ok(orders.iter().map(|_| vec![]).collect());
        }
        // series of 1/(den · Π (c - a_j + x)^m_j) modulo x^order
        let one = S::Field::one(&fq);
        let mut dser: Vec<S::Field> = vec![S::Field::zero(&fq); order];
        dser[0] = one.try_div(&me.den.to_field())?;
        let p = fq.p() as u64;
        for (&j, &m) in &me.poles {
            let delta = c.sub(&theta_point::<S>(&fq, j)).to_field();
            let inv = one.try_div(&delta)?;
            let base = inv.pow(m as u64);
            let mut fac = Vec::with_capacity(order);
            let mut ip = base;
            for k in 0..order {
                let b = lucas_binomial((m as u64) + k as u64 - 1, k as u64, p) as i64;
                let sign = if k % 2 == 0 { b } else { -b };
                fac.push(ip.scale_fq(fq.from_int(sign)));
                ip = ip.mul(&inv);
            }
            dser = series_mul(&dser, &fac, order);
        }
        me.num
            .iter()
            .zip(orders)
            .map(|(nump, &ord)| {
                if ord == 0 {
                    return Ok(vec![]);
                }
                let t: Vec<S::Field> = nump.taylor_at(c, ord).iter().map(|x| x.to_field()).collect();
                Ok(series_mul(&t, &dser[..ord], ord))
            })
            .collect()
    }

    /// Symbolic hyperderivative ∂_t^k of every coordinate.
    pub fn hyperderivative(&self, k: usize) -> Self {
        let fq = self.field().clone();
        let p = fq.p() as u64;
        let factors: Vec<(u32, u32)> = self.poles.iter().map(|(&j, &m)| (j, m)).collect();
        let mut acc = RationalVector { num: vec![TPoly::zero(&fq); self.len()], den: self.den.clone(), poles: BTreeMap::new() };
        // distribute k over the numerator and each pole factor
        let mut comp = vec![0usize; factors.len()];
        loop {
            let used: usize = comp.iter().sum();
            if used <= k {
                let k0 = k - used;
                let mut coef: i64 = 1;
                let mut poles = BTreeMap::new();
                for (idx, &(j, m)) in factors.iter().enumerate() {
                    let kj = comp[idx] as u64;
                    let b = lucas_binomial(m as u64 + kj - 1, kj, p) as i64;
                    coef = coef * (if kj.is_multiple_of(2) { b } else { -b }) % p as i64;
                    poles.insert(j, m + kj as u32);
                }
                if coef != 0 {
                    let c = S::from_fq(&fq, fq.from_int(coef));
                    let num = self.num.iter().map(|f| f.hyperderivative(k0).scale(&c)).collect();
                    acc = acc.add(&RationalVector { num, den: self.den.clone(), poles });
                }
            }
            // next composition
            let mut i = 0;
            loop {
                if i == comp.len() {
                    return acc;
                }
                comp[i] += 1;
                if comp.iter().sum::<usize>() <= k {
                    break;
                }
                comp[i] = 0;
                i += 1;
            }
        }
    }

    /// Residue at t = θ^(q^j) of each coordinate (times dt).
    pub fn residue_at(&self, j: u32) -> Result<Vec<S::Field>> {
        let me = self.cancel();
        let m = me.poles.get(&j).copied().unwrap_or(0);
        if m == 0 {
            return Ok(vec![S::Field::zero(self.field()); self.len()]);
        }
        let mut stripped = me.clone();
        stripped.poles.remove(&j);
        let a: S = theta_point(self.field(), j);
        let orders = vec![m as usize; self.len()];
        Ok(stripped.jets(&a, &orders)?.into_iter().map(|mut v| v.pop().unwrap()).collect())
    }

    /// Residue at infinity of each coordinate: minus the coefficient of 1/t.
    pub fn residue_at_infinity(&self) -> Result<Vec<S::Field>> {
        let d = self.denominator_poly();
        let big_m = d.degree().unwrap_or(0);
        let dinv = S::Field::one(self.field()).try_div(&self.den.to_field())?;
        self.num
            .iter()
            .map(|n| {
                if big_m == 0 {
                    return Ok(S::Field::zero(self.field()));
                }
                let r = n.rem_monic(&d)?;
                Ok(r.coeff(big_m - 1).to_field().mul(&dinv).neg())
            })
            .collect()
    }
}

/// Product of truncated power series.
pub fn series_mul<F: Scalar>(a: &[F], b: &[F], order: usize) -> Vec<F> {
    let fq = a.first().or(b.first()).map(|x| x.fq().clone());
    let Some(fq) = fq else { return vec![] };
    let mut out = vec![F::zero(&fq); order];
    for (i, x) in a.iter().enumerate().take(order) {
        if x.is_zero() && x.valuation().is_none() && *x == F::zero(&fq) {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order - i) {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// ∂^(depth-1) f(c), ..., ∂f(c), f(c) for a scalar rational function f.
pub fn rational_pole_stack<S: Scalar>(f: &RationalVector<S>, c: &S, depth: usize) -> Result<Vec<S::Field>> {
    let mut jets = f.jets(c, &[depth])?.pop().unwrap_or_default();
    jets.reverse();
    Ok(jets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::RatFunc;

    fn fq2() -> Fq {
        Fq::new(2).unwrap()
    }

    #[test]
    fn pole_rule_example() {
        // ∂(1/(t - θ^2)) = -1/(t - θ^2)^2, q = 2
        let fq = fq2();
        let f: RationalVector<ThetaPoly> = RationalVector::unit(&fq, 1, 0).divide(&ThetaPoly::one(&fq), 1, 1);
        let d = f.hyperderivative(1);
        assert_eq!(d.poles.get(&1), Some(&2));
        assert_eq!(d.num[0], TPoly::constant(ThetaPoly::one(&fq)));
        // evaluated at θ: -1/(θ - θ^2)^2
        let th = ThetaPoly::theta(&fq);
        let jets = f.jets(&th, &[2]).unwrap();
        let expect = RatFunc::from_poly(th.sub(&th.pow(2)).pow(2)).inv().unwrap().neg();
        assert_eq!(jets[0][1], expect);
        let direct = d.jets(&th, &[1]).unwrap();
        assert_eq!(direct[0][0], expect);
    }

    #[test]
    fn jets_agree_with_symbolic_derivatives() {
        let fq = Fq::new(3).unwrap();
        let th = ThetaPoly::theta(&fq);
        let num = TPoly::new(&fq, vec![th.clone(), ThetaPoly::one(&fq), th.pow(2)]);
        let f = RationalVector::from_polys(&fq, vec![num]).divide(&th.add(&ThetaPoly::one(&fq)), 1, 2).divide(&ThetaPoly::one(&fq), 2, 1);
        let c = th.clone();
        let jets = f.jets(&c, &[5]).unwrap();
        for k in 0..5 {
            let d = f.hyperderivative(k);
            assert_eq!(d.jets(&c, &[1]).unwrap()[0][0], jets[0][k], "order {k}");
        }
        assert!(f.jets(&th.pow(3), &[1]).is_err());
    }

    #[test]
    fn cancel_removes_removable_poles() {
        let fq = fq2();
        let lin: TPoly<ThetaPoly> = TPoly::theta_factor_pow(&fq, 1, 1);
        let f = RationalVector::from_polys(&fq, vec![lin.mul(&TPoly::t(&fq))]).divide(&ThetaPoly::one(&fq), 1, 2);
        let g = f.cancel();
        assert_eq!(g.poles.get(&1), Some(&1));
        assert_eq!(g.num[0], TPoly::t(&fq));
        let th2 = ThetaPoly::theta_twist(&fq, 1);
        assert!(f.jets(&th2, &[1]).is_err());
    }

    #[test]
    fn residue_theorem() {
        let fq = Fq::new(3).unwrap();
        let th = ThetaPoly::theta(&fq);
        let num = TPoly::new(&fq, vec![th.clone(), ThetaPoly::one(&fq), th.pow(2), ThetaPoly::one(&fq)]);
        let f = RationalVector::from_polys(&fq, vec![num]).divide(&th, 0, 2).divide(&ThetaPoly::one(&fq), 1, 3);
        let mut total = f.residue_at_infinity().unwrap()[0].clone();
        for j in [0, 1] {
            total = total.add(&f.residue_at(j).unwrap()[0]);
        }
        assert!(total.is_zero());
    }
}
