//! Special values: D_i, L_i, Carlitz factorials, ζ_A(n) and MZVs by brute
//! force, Bernoulli-Carlitz numbers, the ratio π̃/ω_C and special points.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::motive::MotiveSpec;
use crate::scalar::{Fq, LaurentSeries, RatFunc, Scalar, ThetaPoly};
use crate::tate::{RationalVector, TPoly, TateElement};

/// Largest number of monic polynomials enumerated in one degree block.
pub const MAX_BLOCK: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    BruteForce,
    ClosedForm,
    ProductFormula,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpecialValue {
    pub label: String,
    pub params: Value,
    pub value: LaurentSeries,
    pub provenance: Provenance,
    /// Number of degree blocks (or terms) summed.
    pub blocks: usize,
}

impl SpecialValue {
    pub fn to_json(&self) -> Value {
        json!({
            "label": self.label,
            "params": self.params,
            "value": self.value.to_json(),
            "precision": self.value.precision(),
            "provenance": match self.provenance {
                Provenance::BruteForce => "brute_force",
                Provenance::ClosedForm => "closed_form",
                Provenance::ProductFormula => "product_formula",
            },
            "blocks": self.blocks,
        })
    }
}

/// D_i = Π_{j<i} (θ^(q^i) - θ^(q^j)) and L_i = Π_{1<=j<=i} (θ - θ^(q^j)), i <= i_max.
pub fn carlitz_products(fq: &Fq, i_max: usize) -> (Vec<ThetaPoly>, Vec<ThetaPoly>) {
    let th = |j: usize| ThetaPoly::theta_twist(fq, j as u32);
    let mut d = Vec::with_capacity(i_max + 1);
    let mut l = Vec::with_capacity(i_max + 1);
    let mut acc = ThetaPoly::one(fq);
    for i in 0..=i_max {
        let mut di = ThetaPoly::one(fq);
        for j in 0..i {
            di = di.mul(&th(i).sub(&th(j)));
        }
        d.push(di);
        if i > 0 {
            acc = acc.mul(&th(0).sub(&th(i)));
        }
        l.push(acc.clone());
    }
    (d, l)
}

/// Γ_{n+1} = Π D_i^(n_i) for n = Σ n_i q^i. Takes n + 1 >= 1.
pub fn gamma_factorial(fq: &Fq, n_plus_1: u64) -> Result<ThetaPoly> {
    if n_plus_1 == 0 {
        return Err(Error::Usage("gamma index must be positive".into()));
    }
    let q = fq.q() as u64;
    let mut n = n_plus_1 - 1;
    let mut digits = vec![];
    while n > 0 {
        digits.push(n % q);
        n /= q;
    }
    let (d, _) = carlitz_products(fq, digits.len());
    let mut out = ThetaPoly::one(fq);
    for (i, &e) in digits.iter().enumerate() {
        out = out.mul(&d[i].pow(e));
    }
    Ok(out)
}

/// Calls `f` on every monic polynomial of degree `deg`.
fn for_each_monic(fq: &Fq, deg: usize, mut f: impl FnMut(&ThetaPoly)) {
    let q = fq.q() as usize;
    let mut c = vec![0u8; deg + 1];
    c[deg] = 1;
    loop {
        f(&ThetaPoly::new(fq, c.clone()));
        let mut i = 0;
        loop {
            if i == deg {
                return;
            }
            if (c[i] as usize) + 1 < q {
                c[i] += 1;
                break;
            }
            c[i] = 0;
            i += 1;
        }
    }
}

/// Power sums S_d(k) = Σ_{a monic, deg a = d} a^-k for d = 0, 1, ... , computed lazily.
struct PowerSums {
    fq: Fq,
    prec: i64,
    exps: Vec<u64>,
    /// sums[d][j] = S_d(exps[j]).
    sums: Vec<Vec<LaurentSeries>>,
}

impl PowerSums {
    fn new(fq: &Fq, exps: Vec<u64>, prec: i64) -> Self {
        PowerSums { fq: fq.clone(), prec, exps, sums: vec![] }
    }

    fn block(&mut self, d: usize) -> Result<&[LaurentSeries]> {
        while self.sums.len() <= d {
            let deg = self.sums.len();
            if (self.fq.q() as u64).checked_pow(deg as u32).is_none_or(|n| n > MAX_BLOCK) {
                return Err(Error::NonConvergent(format!("degree block {deg} is too large to enumerate")));
            }
            let mut acc = vec![LaurentSeries::zero(&self.fq).with_precision(self.prec); self.exps.len()];
            let one = LaurentSeries::one(&self.fq);
            let (fq, prec, exps) = (&self.fq, self.prec, &self.exps);
            let mut err = None;
            for_each_monic(fq, deg, |a| {
                let al = LaurentSeries::from_theta_poly(a);
                match LaurentSeries::div_to_prec(&one, &al, prec) {
                    Ok(inv) => {
                        for (s, &k) in acc.iter_mut().zip(exps) {
                            *s = s.add(&inv.pow(k));
                        }
                    }
                    Err(e) => err = Some(e),
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            self.sums.push(acc);
        }
        Ok(&self.sums[d])
    }
}

fn negligible(x: &LaurentSeries, n: i64) -> bool {
    x.is_zero() || x.valuation().is_some_and(|v| v >= n)
}

/// ζ_A(n) = Σ_{a monic} a^-n to absolute precision `prec`, summing degree
/// blocks until two consecutive ones are below u^prec.
pub fn zeta_naive(fq: &Fq, n: u64, prec: i64) -> Result<SpecialValue> {
    if n == 0 {
        return Err(Error::Usage("zeta needs n >= 1".into()));
    }
    let v = mzv_naive(fq, &[n], prec)?;
    Ok(SpecialValue { label: "zeta".into(), params: json!({ "q": fq.q(), "n": n, "precision": prec }), ..v })
}

/// ζ_A(s_1, ..., s_r) = Σ 1/(a_1^s_1 ... a_r^s_r) over monic a_i with
/// deg a_1 > ... > deg a_r, to absolute precision `prec`.
pub fn mzv_naive(fq: &Fq, s: &[u64], prec: i64) -> Result<SpecialValue> {
    if s.is_empty() || s.contains(&0) {
        return Err(Error::Usage("MZV entries must be positive".into()));
    }
    let r = s.len();
    let work = prec + 4;
    let mut ps = PowerSums::new(fq, s.to_vec(), work);
    let zero = LaurentSeries::zero(fq).with_precision(work);
    // below[j] = Σ over chains d_j > ... > d_r with d_j < current degree, of Π S_{d_i}(s_i)
    let mut below = vec![zero.clone(); r];
    let mut total = zero.clone();
    let mut small = 0;
    for d in 0.. {
        let sd = ps.block(d)?.to_vec();
        // contribution of chains with d_j = d, for j = r-1 .. 0
        let mut at = vec![zero.clone(); r];
        for j in (0..r).rev() {
            at[j] = if j == r - 1 { sd[j].clone() } else { sd[j].mul(&below[j + 1]) };
        }
        let contrib = at[0].clone();
        total = total.add(&contrib);
        for j in 0..r {
            below[j] = below[j].add(&at[j]);
        }
        if d + 1 >= r && negligible(&contrib, prec) {
            small += 1;
            if small >= 2 {
                let label = if r == 1 { "zeta" } else { "mzv" };
                return Ok(SpecialValue {
                    label: label.into(),
                    params: json!({ "q": fq.q(), "s": s, "precision": prec }),
                    value: total.with_precision(prec),
                    provenance: Provenance::BruteForce,
                    blocks: d + 1,
                });
            }
        } else {
            small = 0;
        }
    }
    unreachable!()
}

/// Σ_{i>=0} 1/L_i to absolute precision `prec`; this is Log_C(1) = ζ_A(1).
pub fn log_series_zeta1(fq: &Fq, prec: i64) -> Result<SpecialValue> {
    let mut total = LaurentSeries::zero(fq).with_precision(prec);
    let mut acc = ThetaPoly::one(fq);
    let one = LaurentSeries::one(fq);
    for i in 0.. {
        if i > 0 {
            acc = acc.mul(&ThetaPoly::theta(fq).sub(&ThetaPoly::theta_twist(fq, i)));
        }
        let term = LaurentSeries::div_to_prec(&one, &LaurentSeries::from_theta_poly(&acc), prec)?;
        if negligible(&term, prec) {
            return Ok(SpecialValue {
                label: "zeta".into(),
                params: json!({ "q": fq.q(), "n": 1, "precision": prec }),
                value: total,
                provenance: Provenance::ClosedForm,
                blocks: i as usize,
            });
        }
        total = total.add(&term);
    }
    unreachable!()
}

/// (-θ)·Π_{i>=1} (1 - θ^(1-q^i))^-1 to absolute precision `prec`.
fn period_constant(fq: &Fq, prec: i64) -> Result<LaurentSeries> {
    let q = fq.q() as i64;
    let mut c = LaurentSeries::monomial(fq, fq.neg(1), -1);
    let one = LaurentSeries::one(fq);
    let mut qi = q;
    while qi - 1 < prec + 2 {
        let f = one.sub(&LaurentSeries::monomial(fq, 1, qi - 1));
        c = c.mul(&LaurentSeries::div_to_prec(&one, &f, prec + 2)?);
        qi *= q;
    }
    Ok(c.with_precision(prec))
}

/// Π_{i>=start} (1 - t u^(q^i)) up to t-degree `deg`, coefficients to precision `prec`.
fn t_product(fq: &Fq, start: u32, deg: usize, prec: i64) -> TPoly<LaurentSeries> {
    let q = fq.q() as i64;
    let mut p = TPoly::one(fq);
    let mut i = start;
    loop {
        let e = q.pow(i);
        if e > prec + 2 {
            break;
        }
        let lin = TPoly::new(fq, vec![LaurentSeries::one(fq), LaurentSeries::monomial(fq, fq.neg(1), e)]);
        p = p.mul(&lin).truncate(deg);
        i += 1;
    }
    p.map(|c| c.with_precision(prec))
}

/// log_q Gauss-norm bound for the coefficients of Π_{i>=start}(1 - t u^(q^i))
/// beyond t-degree `deg`: the t^k coefficient has valuation >= q^start + ... + q^(start+k-1).
fn t_product_tail(fq: &Fq, start: u32, deg: usize) -> i64 {
    let q = fq.q() as i64;
    let k = deg as i64 + 1;
    let mut v: i64 = 0;
    for j in 0..k {
        v = v.saturating_add(q.saturating_pow(start + j as u32));
    }
    k - v
}

/// π̃^(q-1) = (-θ)^q Π_{i>=1} (1 - θ^(1-q^i))^-(q-1).
pub fn pi_q_minus_1(fq: &Fq, prec: i64) -> Result<LaurentSeries> {
    let q = fq.q() as u64;
    // ((-θ)Π(...))^(q-1)·(-θ) = (-θ)^q Π(...)^(q-1)
    let c = period_constant(fq, prec + q as i64 + 2)?;
    let theta = LaurentSeries::monomial(fq, fq.neg(1), -1);
    Ok(c.pow(q - 1).mul(&theta).with_precision(prec))
}

/// ρ^n with ρ = π̃/ω_C = (-θ)Π_{i>=1}(1 - θ^(1-q^i))^-1 Π_{i>=0}(1 - t/θ^(q^i)),
/// truncated at t-degree `deg`.
pub fn pi_omega_ratio(fq: &Fq, n: u32, deg: usize, prec: i64) -> Result<TateElement<LaurentSeries>> {
    if n == 0 {
        return Err(Error::Usage("n must be positive".into()));
    }
    let work = prec + n as i64 + 2;
    let c = period_constant(fq, work)?;
    let f = t_product(fq, 0, deg, work + 1).map(|x| x.mul(&c).with_precision(work));
    let rho = TateElement::truncated(f, deg, t_product_tail(fq, 0, deg) + 1);
    let mut out = rho.clone();
    for _ in 1..n {
        out = out.mul(&rho);
    }
    Ok(trim(out, prec))
}

/// ρ^n/(t - θ) = ρ^(n-1)·Π_{i>=1}(1 - θ^(1-q^i))^-1 Π_{i>=1}(1 - t/θ^(q^i)).
pub fn pi_omega_ratio_over_t_minus_theta(fq: &Fq, n: u32, deg: usize, prec: i64) -> Result<TateElement<LaurentSeries>> {
    if n == 0 {
        return Err(Error::Usage("n must be positive".into()));
    }
    let work = prec + n as i64 + 2;
    let c = period_constant(fq, work + 1)?.mul(&LaurentSeries::monomial(fq, fq.neg(1), 1));
    let f = t_product(fq, 1, deg, work + 1).map(|x| x.mul(&c).with_precision(work));
    let mut out = TateElement::truncated(f, deg, t_product_tail(fq, 1, deg));
    if n > 1 {
        out = out.mul(&pi_omega_ratio(fq, n - 1, deg, work)?);
    }
    Ok(trim(out, prec))
}

fn trim(x: TateElement<LaurentSeries>, prec: i64) -> TateElement<LaurentSeries> {
    TateElement { poly: x.poly.map(|c| c.with_precision(prec)), tail: x.tail }
}

/// B_{n,C} for n <= n_max from z/exp_C(z) = Σ B_{n,C} z^n / Π(n), where
/// Π(n) = Γ_{n+1} is the Carlitz factorial of n. Exact.
pub fn bernoulli_carlitz(fq: &Fq, n_max: usize) -> Result<Vec<RatFunc>> {
    let q = fq.q() as usize;
    // exp_C(z)/z = Σ_i z^(q^i - 1)/D_i
    let mut e = vec![RatFunc::zero(fq); n_max + 1];
    let mut i = 0;
    let mut levels = 0;
    while q.pow(levels as u32 + 1) - 1 <= n_max {
        levels += 1;
    }
    let (d, _) = carlitz_products(fq, levels);
    loop {
        let k = q.pow(i as u32) - 1;
        if k > n_max {
            break;
        }
        e[k] = RatFunc::from_poly(d[i].clone()).inv()?;
        i += 1;
    }
    let r = series_inverse(&e)?;
    r.iter()
        .enumerate()
        .map(|(n, c)| Ok(c.mul_poly(&gamma_factorial(fq, n as u64 + 1)?)))
        .collect()
}

/// Reciprocal of a power series with invertible constant term, same length.
pub fn series_inverse<F: Scalar>(a: &[F]) -> Result<Vec<F>> {
    let fq = a[0].fq().clone();
    let a0inv = F::one(&fq).try_div(&a[0])?;
    let mut r = vec![F::zero(&fq); a.len()];
    r[0] = a0inv.clone();
    for n in 1..a.len() {
        let mut s = F::zero(&fq);
        for k in 1..=n {
            if !a[k].is_zero() && !r[n - k].is_zero() {
                s = s.add(&a[k].mul(&r[n - k]));
            }
        }
        r[n] = s.neg().mul(&a0inv);
    }
    Ok(r)
}

/// H_n for n <= q is 1; larger n needs a supplied polynomial.
pub fn anderson_thakur_poly(fq: &Fq, n: u32, supplied: Option<&TPoly<ThetaPoly>>) -> Result<TPoly<ThetaPoly>> {
    if n == 0 {
        return Err(Error::Usage("n must be positive".into()));
    }
    if let Some(h) = supplied {
        return Ok(h.clone());
    }
    if n as u64 <= fq.q() as u64 {
        Ok(TPoly::one(fq))
    } else {
        Err(Error::Unsupported(format!("H_{n} for n > q must be supplied")))
    }
}

/// Which δ-map turns H into a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialPointMap {
    Delta1,
    Delta0,
}

/// z = δ_1^N(H) (or δ_0^N(H)) for a rank-one motive such as C^(⊗n).
pub fn special_point(spec: &MotiveSpec, h: &TPoly<ThetaPoly>, map: SpecialPointMap) -> Result<Vec<RatFunc>> {
    if spec.rank() != 1 {
        return Err(Error::Unsupported("special points are defined for rank-one motives".into()));
    }
    let fq = spec.field();
    let v = RationalVector::from_polys(fq, vec![h.clone()]);
    let at = ThetaPoly::theta(fq);
    match map {
        SpecialPointMap::Delta1 => spec.delta1_n(&v, &at, 256, None),
        SpecialPointMap::Delta0 => spec.delta0_n(&v, &at),
    }
}

/// Laurent embedding of an exact point.
pub fn point_to_laurent(z: &[RatFunc], prec: i64) -> Vec<LaurentSeries> {
    z.iter().map(|x| LaurentSeries::from_ratfunc(x, prec)).collect()
}

#[cfg(test)]
mod tests;
