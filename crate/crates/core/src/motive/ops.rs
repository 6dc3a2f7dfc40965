//! σ^-1, τ^-1 (twist-normalized), and the maps δ_0^N, δ_0^M, δ_1^N, δ_{1,z}^M.

use super::linalg::{mat_map, mat_twist, solve, transpose, PolyMatrix};
use super::spec::MotiveSpec;
use crate::error::{Error, Result};
use crate::scalar::{LaurentSeries, Scalar, ThetaPoly};
use crate::tate::{theta_point, RationalVector, TPoly, TateElement};

/// Coefficient vectors c_0, c_1, ... of n = Σ_i σ^i(Σ_k c_{i,k} h_k).
#[derive(Clone, Debug, PartialEq)]
pub struct Peeling<F> {
    pub levels: Vec<Vec<F>>,
    /// True when the remainder vanished (exactly, or at its precision).
    pub exhausted: bool,
    /// True when depleted or when the levels fell below the tolerance.
    pub converged: bool,
}

impl<F: Scalar> Peeling<F> {
    /// Σ_i c_i, which is δ_1^N of the peeled element.
    pub fn total(&self, d: usize, fq: &crate::scalar::Fq) -> Vec<F> {
        let mut acc = vec![F::zero(fq); d];
        for lv in &self.levels {
            for (a, x) in acc.iter_mut().zip(lv) {
                *a = a.add(x);
            }
        }
        acc
    }
}

/// Result of δ_{1,z}^M: the value and the per-level terms Σ_k c_{k,i} z_k^(i).
#[derive(Clone, Debug)]
pub struct DeltaM1z<F> {
    pub value: F,
    pub terms: Vec<F>,
    pub level: usize,
}

fn to_s<S: Scalar>(m: &PolyMatrix<ThetaPoly>) -> PolyMatrix<S> {
    mat_map(m, |x| S::from_theta(x))
}

impl MotiveSpec {
    /// θ^(q^j) as a scalar of type S.
    pub fn point<S: Scalar>(&self, j: u32) -> S {
        theta_point(&self.fq, j)
    }

    pub fn h_vec<S: Scalar>(&self, k: usize) -> RationalVector<S> {
        RationalVector::from_polys(&self.fq, self.sigma_basis[k].iter().map(|p| p.map(S::from_theta)).collect())
    }
    pub fn g_vec<S: Scalar>(&self, k: usize) -> RationalVector<S> {
        RationalVector::from_polys(&self.fq, self.tau_basis[k].iter().map(|p| p.map(S::from_theta)).collect())
    }

    /// σ^-1(n) = ((Φ^T)^-1)^(1) n^(1).
    pub fn sigma_inv<S: Scalar>(&self, n: &RationalVector<S>) -> RationalVector<S> {
        self.sigma_inv_twisted(&n.twist(1))
    }

    /// σ^-1(n) given n^(1); lets σ^-1 act on elements only known through
    /// their first twist, such as σ(h) = (Φ^T)^(1) h untwisted.
    pub fn sigma_inv_twisted<S: Scalar>(&self, n1: &RationalVector<S>) -> RationalVector<S> {
        let adj_t: PolyMatrix<S> = to_s(&mat_twist(&transpose(&self.adj_phi), 1));
        let c = S::from_theta(&self.det_unit.twist(1));
        n1.mat_mul(&adj_t).divide(&c, 1, self.dim() as u32)
    }

    /// σ^-i(n); poles only at θ^(q^j), 1 <= j <= i.
    pub fn sigma_inv_pow<S: Scalar>(&self, n: &RationalVector<S>, i: usize) -> RationalVector<S> {
        let mut x = n.clone();
        for _ in 0..i {
            x = self.sigma_inv(&x).cancel();
        }
        x
    }

    /// σ(n^(1)) = Φ^T n, i.e. σ applied to the twist of `n`.
    pub fn sigma_of_twist<S: Scalar>(&self, n: &RationalVector<S>) -> RationalVector<S> {
        n.mat_mul(&to_s::<S>(&transpose(&self.phi)))
    }

    /// σ(n) = Φ^T n^(-1); fails unless n is a Frobenius twist.
    pub fn sigma(&self, n: &RationalVector<ThetaPoly>) -> Result<RationalVector<ThetaPoly>> {
        let un = |p: &ThetaPoly| p.untwist(1).ok_or(Error::NegativeTwist);
        let num = n
            .num
            .iter()
            .map(|f| Ok(TPoly::new(&self.fq, f.coeffs().iter().map(un).collect::<Result<Vec<_>>>()?)))
            .collect::<Result<Vec<_>>>()?;
        let mut poles = std::collections::BTreeMap::new();
        for (&j, &m) in &n.poles {
            if j == 0 {
                return Err(Error::NegativeTwist);
            }
            poles.insert(j - 1, m);
        }
        let pre = RationalVector { num, den: un(&n.den)?, poles };
        Ok(self.sigma_of_twist(&pre))
    }

    /// τ(m) = Φ_M m^(1).
    pub fn tau<S: Scalar>(&self, m: &RationalVector<S>) -> RationalVector<S> {
        m.twist(1).mat_mul(&to_s::<S>(&self.phi_m))
    }

    /// Multiply by (Φ_M^-1)^(i).
    pub fn tau_inv_step<S: Scalar>(&self, y: &RationalVector<S>, i: u32) -> RationalVector<S> {
        let adj: PolyMatrix<S> = to_s(&mat_twist(&self.adj_phi_m, i));
        let c = S::from_theta(&self.det_unit_m.twist(i));
        y.mat_mul(&adj).divide(&c, i, self.dim() as u32).cancel()
    }

    /// (τ^-i(m))^(i) = (Φ_M^-1)^(i-1) ... (Φ_M^-1)^(0) m; regular at t = θ^(q^i).
    pub fn tau_inv_pow_normalized<S: Scalar>(&self, m: &RationalVector<S>, i: usize) -> RationalVector<S> {
        let mut y = m.clone();
        for j in 0..i {
            y = self.tau_inv_step(&y, j as u32);
        }
        y
    }

    /// Blockwise jets at `at`, highest derivative first in each block.
    pub fn delta0_n<S: Scalar>(&self, n: &RationalVector<S>, at: &S) -> Result<Vec<S::Field>> {
        let jets = n.jets(at, &self.blocks)?;
        Ok(jets
            .into_iter()
            .flat_map(|mut v| {
                v.reverse();
                v
            })
            .collect())
    }

    /// Blockwise jets at `at`, lowest derivative first in each block.
    pub fn delta0_m<S: Scalar>(&self, m: &RationalVector<S>, at: &S) -> Result<Vec<S::Field>> {
        Ok(m.jets(at, &self.blocks)?.into_iter().flatten().collect())
    }

    /// Expand n in the σ-basis by δ_0-peeling. Stops on depletion, after
    /// `max_level` levels, or once two consecutive levels have valuation >= `tol`.
    pub fn peel_sigma<S: Scalar>(
        &self,
        n: &RationalVector<S>,
        at: &S,
        max_level: usize,
        tol: Option<i64>,
    ) -> Result<Peeling<S::Field>> {
        let fq = &self.fq;
        let mut x = n.cancel();
        let mut levels = vec![];
        let mut small = 0;
        for _ in 0..=max_level {
            if x.is_zero() {
                return Ok(Peeling { levels, exhausted: true, converged: true });
            }
            let gamma = self.delta0_n(&x, at)?;
            let mut y = RationalVector::zero(fq, self.rank());
            for (k, g) in gamma.iter().enumerate() {
                if g.is_zero() {
                    continue;
                }
                let (a, b) = S::frac_parts(g);
                y = y.add(&self.h_vec::<S>(k).scale_frac(&a, &b));
            }
            if let Some(t) = tol {
                let v = gamma.iter().filter_map(|g| g.valuation()).min();
                if v.is_none_or(|v| v >= t) {
                    small += 1;
                } else {
                    small = 0;
                }
            }
            levels.push(gamma);
            if small >= 2 {
                return Ok(Peeling { levels, exhausted: false, converged: true });
            }
            x = self.sigma_inv(&x.sub(&y).cancel()).cancel();
        }
        let done = x.is_zero();
        Ok(Peeling { levels, exhausted: done, converged: done })
    }

    /// δ_1^N(n) = Σ_i c_i for the peeled coefficients.
    pub fn delta1_n<S: Scalar>(&self, n: &RationalVector<S>, at: &S, max_level: usize, tol: Option<i64>) -> Result<Vec<S::Field>> {
        let p = self.peel_sigma(n, at, max_level, tol)?;
        if !p.converged {
            return Err(Error::NonConvergent(format!("sigma expansion not depleted after {max_level} levels")));
        }
        Ok(p.total(self.dim(), &self.fq))
    }

    /// Coefficients c[i][k] with m = Σ_{i<=level} Σ_k c[i][k] τ^i(g_k). With
    /// `truncate`, m is cut to the largest t-degree of the basis first.
    pub fn tau_decompose<F: Scalar<Field = F>>(&self, m: &[TPoly<F>], level: usize, truncate: bool) -> Result<Option<Vec<Vec<F>>>> {
        let r = self.rank();
        let d = self.dim();
        if m.len() != r {
            return Err(Error::InvalidMotive(format!("expected {r} coordinates")));
        }
        let mut basis: Vec<Vec<TPoly<F>>> = Vec::with_capacity(d * (level + 1));
        for i in 0..=level {
            for g in self.tau_power_basis(i) {
                basis.push(g.iter().map(|p| p.map(F::from_theta)).collect());
            }
        }
        let bdeg = basis.iter().flat_map(|v| v.iter().filter_map(|p| p.degree())).max().unwrap_or(0);
        let mdeg = m.iter().filter_map(|p| p.degree()).max().unwrap_or(0);
        let top = if truncate { bdeg } else { bdeg.max(mdeg) };
        let mut a = vec![];
        let mut b = vec![];
        for c in 0..r {
            for e in 0..=top {
                a.push(basis.iter().map(|v| v[c].coeff(e)).collect::<Vec<F>>());
                b.push(m[c].coeff(e));
            }
        }
        let Some(x) = solve(&a, &b)? else { return Ok(None) };
        Ok(Some(x.chunks(d).map(|c| c.to_vec()).collect()))
    }

    /// δ_{1,z}^M(m) for m polynomial in t: Σ c_{k,i} z_k^(q^i).
    pub fn delta_m1z<F: Scalar<Field = F>>(&self, m: &[TPoly<F>], z: &[F], max_level: usize) -> Result<DeltaM1z<F>> {
        if z.len() != self.dim() {
            return Err(Error::InvalidMotive(format!("z must have {} entries", self.dim())));
        }
        for level in 0..=max_level {
            if let Some(c) = self.tau_decompose(m, level, false)? {
                return Ok(combine(&c, z, level));
            }
        }
        Err(Error::DecompositionFailure(format!("no tau expansion up to level {max_level}")))
    }

    /// δ_{1,z}^M of a Tate-algebra element given by `source(precision, degree)`,
    /// to absolute precision `target`. The level grows until two consecutive
    /// terms fall below u^target and the value is stable.
    pub fn delta_m1z_tate(
        &self,
        source: &dyn Fn(i64, usize) -> Result<Vec<TateElement<LaurentSeries>>>,
        z: &[LaurentSeries],
        target: i64,
        max_level: usize,
    ) -> Result<DeltaM1z<LaurentSeries>> {
        let mut prev: Option<LaurentSeries> = None;
        let mut loss = 0i64;
        for level in 0..=max_level {
            let basis = self.tau_power_basis(level);
            let deg = basis.iter().flat_map(|v| v.iter().filter_map(|p| p.degree())).max().unwrap_or(0);
            let size = basis.iter().flat_map(|v| v.iter().flat_map(|p| p.coeffs().iter().filter_map(|c| c.degree()))).max().unwrap_or(0);
            loss += size as i64;
            let mut wp = target + 2 * loss + deg as i64 + 8;
            let res = loop {
                let m = source(wp, deg)?;
                let polys: Vec<TPoly<LaurentSeries>> = m.iter().map(|e| e.poly.truncate(deg)).collect();
                let zz: Vec<LaurentSeries> = z.iter().map(|x| x.with_precision(x.precision().unwrap_or(wp).min(wp))).collect();
                let c = self
                    .tau_decompose(&polys, level, true)?
                    .ok_or_else(|| Error::DecompositionFailure(format!("truncated system inconsistent at level {level}")))?;
                let res = combine(&c, &zz, level);
                if res.value.precision().is_none_or(|p| p >= target) || wp > 64 * (target + loss + 64) {
                    break res;
                }
                wp *= 2;
            };
            let small = |x: &LaurentSeries| x.is_zero() || x.valuation().is_some_and(|v| v >= target);
            let n = res.terms.len();
            let stable = prev.as_ref().is_some_and(|p| p.agreement(&res.value) >= target);
            if n >= 2 && small(&res.terms[n - 1]) && small(&res.terms[n - 2]) && stable {
                return Ok(res);
            }
            prev = Some(res.value);
        }
        Err(Error::NonConvergent(format!("delta_(1,z)^M did not stabilize by level {max_level}")))
    }
}

fn combine<F: Scalar>(c: &[Vec<F>], z: &[F], level: usize) -> DeltaM1z<F> {
    let fq = z[0].fq().clone();
    let mut terms = Vec::with_capacity(c.len());
    let mut value = F::zero(&fq);
    for (i, ci) in c.iter().enumerate() {
        let mut t = F::zero(&fq);
        for (ck, zk) in ci.iter().zip(z) {
            if !ck.is_zero() && !zk.is_zero() {
                t = t.add(&ck.mul(&zk.twist(i as u32)));
            }
        }
        value = value.add(&t);
        terms.push(t);
    }
    DeltaM1z { value, terms, level }
}
