//! The Anderson t-module φ attached to a motive: φ_t = d[t] + Σ E_j τ^j,
//! exponential and logarithm coefficients, and series evaluation.

use std::sync::{Arc, Mutex};

use serde_json::json;

use crate::error::{Error, Result};
use crate::motive::linalg::{smat_add, smat_det, smat_identity, smat_is_zero, smat_mul, smat_sub, smat_twist, ScalarMatrix};
use crate::motive::MotiveSpec;
use crate::report::{Check, VerificationReport};
use crate::scalar::{Fq, LaurentSeries, RatFunc, Scalar, ThetaPoly};
use crate::tate::{RationalVector, TPoly};

/// Hard cap on the number of series terms in `exp_eval` / `log_eval`.
pub const MAX_TERMS: usize = 48;

/// Q_0, Q_1, ... (or P_i) plus the vectors needed to extend the list.
struct Stream {
    mats: Vec<ScalarMatrix<RatFunc>>,
    chain: Vec<RationalVector<ThetaPoly>>,
}

#[derive(Clone)]
pub struct TModule {
    spec: MotiveSpec,
    dt: ScalarMatrix<ThetaPoly>,
    taus: Vec<ScalarMatrix<ThetaPoly>>,
    exp: Arc<Mutex<Stream>>,
    log: Arc<Mutex<Stream>>,
}

impl std::fmt::Debug for TModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TModule").field("spec", &self.spec.label()).field("dt", &self.dt).field("taus", &self.taus).finish()
    }
}

/// Value of a series sum with the number of terms used.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesValue {
    pub value: Vec<LaurentSeries>,
    pub terms: usize,
    /// Valuation bounds of the terms that were examined.
    pub term_bounds: Vec<Option<i64>>,
}

impl SeriesValue {
    /// Smallest absolute precision among the coordinates.
    pub fn precision(&self) -> Option<i64> {
        self.value.iter().filter_map(|x| x.precision()).min()
    }
}

fn to_rat(m: &ScalarMatrix<ThetaPoly>) -> ScalarMatrix<RatFunc> {
    m.iter().map(|r| r.iter().map(|x| x.to_field()).collect()).collect()
}

pub fn smat_to_json(m: &ScalarMatrix<RatFunc>) -> serde_json::Value {
    json!(m.iter().map(|r| r.iter().map(|x| x.to_json()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn theta_mat_json(m: &ScalarMatrix<ThetaPoly>) -> serde_json::Value {
    json!(m.iter().map(|r| r.iter().map(|x| x.to_json()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

impl TModule {
    pub fn from_motive(spec: &MotiveSpec) -> Result<Self> {
        let fq = spec.field().clone();
        let d = spec.dim();
        let th = spec.theta_matrices();
        let dt = th[0].clone();
        let taus = th[1..].to_vec();
        // d[t] - θI must be nilpotent
        let mut n = to_rat(&dt);
        for (i, row) in n.iter_mut().enumerate() {
            row[i] = row[i].sub(&RatFunc::theta(&fq));
        }
        let mut pw = n.clone();
        for _ in 1..d {
            pw = smat_mul(&pw, &n);
        }
        if !smat_is_zero(&pw) {
            return Err(Error::InconsistentBases("d[t] - theta I is not nilpotent".into()));
        }
        let m = TModule {
            spec: spec.clone(),
            dt,
            taus,
            exp: Arc::new(Mutex::new(Stream { mats: vec![], chain: vec![] })),
            log: Arc::new(Mutex::new(Stream { mats: vec![], chain: vec![] })),
        };
        m.check_tau_side()?;
        Ok(m)
    }

    /// t g_k expanded in the τ-basis must have coefficients given by the rows of Θ_i.
    fn check_tau_side(&self) -> Result<()> {
        let levels = self.taus.len();
        for (k, g) in self.spec.tau_basis().iter().enumerate() {
            let tg: Vec<TPoly<RatFunc>> = g.iter().map(|p| p.map(|x| x.to_field()).shift(1)).collect();
            let c = self
                .spec
                .tau_decompose(&tg, levels, false)?
                .ok_or_else(|| Error::InconsistentBases(format!("t g_{k} has no tau expansion")))?;
            for (i, ci) in c.iter().enumerate() {
                let want = if i == 0 { &self.dt } else { &self.taus[i - 1] };
                for (j, x) in ci.iter().enumerate() {
                    if *x != want[k][j].to_field() {
                        return Err(Error::InconsistentBases(format!("t g_{k} disagrees with phi_t at level {i}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &MotiveSpec {
        &self.spec
    }
    pub fn field(&self) -> &Fq {
        self.spec.field()
    }
    pub fn dim(&self) -> usize {
        self.spec.dim()
    }
    /// d[t].
    pub fn dt(&self) -> &ScalarMatrix<ThetaPoly> {
        &self.dt
    }
    /// E_1, E_2, ...
    pub fn taus(&self) -> &[ScalarMatrix<ThetaPoly>] {
        &self.taus
    }

    /// E_j for j >= 1 (zero past the last one); E_0 = d[t].
    pub fn e(&self, j: usize) -> ScalarMatrix<ThetaPoly> {
        if j == 0 {
            return self.dt.clone();
        }
        self.taus.get(j - 1).cloned().unwrap_or_else(|| vec![vec![ThetaPoly::zero(self.field()); self.dim()]; self.dim()])
    }

    /// φ_t(z) = d[t] z + Σ_j E_j z^(j).
    pub fn phi_t<F: Scalar>(&self, z: &[F]) -> Vec<F> {
        let fq = self.field();
        let mut out = vec![F::zero(fq); self.dim()];
        for j in 0..=self.taus.len() {
            let e = self.e(j);
            for (a, row) in out.iter_mut().zip(&e) {
                for (x, zk) in row.iter().zip(z) {
                    if !x.is_zero() && !zk.is_zero() {
                        *a = a.add(&F::from_theta(x).mul(&zk.twist(j as u32)));
                    }
                }
            }
        }
        out
    }

    /// Q_i: row k is δ_0^M(τ^-i(g_k))^(i), computed at t = θ^(q^i).
    pub fn exp_coeff(&self, i: usize) -> Result<ScalarMatrix<RatFunc>> {
        let mut s = self.exp.lock().expect("coefficient cache poisoned");
        let spec = &self.spec;
        while s.mats.len() <= i {
            let lvl = s.mats.len();
            if lvl == 0 {
                s.chain = (0..self.dim()).map(|k| spec.g_vec::<ThetaPoly>(k)).collect();
            } else {
                s.chain = s.chain.iter().map(|y| spec.tau_inv_step(y, (lvl - 1) as u32)).collect();
            }
            let at = spec.point::<ThetaPoly>(lvl as u32);
            let rows = s.chain.iter().map(|y| spec.delta0_m(y, &at)).collect::<Result<Vec<_>>>()?;
            s.mats.push(rows);
        }
        Ok(s.mats[i].clone())
    }

    /// P_i: column k is δ_0^N(σ^-i(h_k)).
    pub fn log_coeff(&self, i: usize) -> Result<ScalarMatrix<RatFunc>> {
        let mut s = self.log.lock().expect("coefficient cache poisoned");
        let spec = &self.spec;
        let d = self.dim();
        while s.mats.len() <= i {
            let lvl = s.mats.len();
            if lvl == 0 {
                s.chain = (0..d).map(|k| spec.h_vec::<ThetaPoly>(k)).collect();
            } else {
                s.chain = s.chain.iter().map(|y| spec.sigma_inv(y).cancel()).collect();
            }
            let at = spec.point::<ThetaPoly>(0);
            let cols = s.chain.iter().map(|y| spec.delta0_n(y, &at)).collect::<Result<Vec<_>>>()?;
            let mat = (0..d).map(|j| (0..d).map(|k| cols[k][j].clone()).collect()).collect();
            s.mats.push(mat);
        }
        Ok(s.mats[i].clone())
    }

    /// Exp(z) = Σ Q_i z^(i) to absolute precision `target`.
    pub fn exp_eval(&self, z: &[LaurentSeries], target: i64) -> Result<SeriesValue> {
        self.eval_series(z, target, true)
    }

    /// Log(z) = Σ P_i z^(i); fails with DivergentSeries when the term norms
    /// fail to shrink three times in a row.
    pub fn log_eval(&self, z: &[LaurentSeries], target: i64) -> Result<SeriesValue> {
        self.eval_series(z, target, false)
    }

    fn eval_series(&self, z: &[LaurentSeries], target: i64, exp: bool) -> Result<SeriesValue> {
        let fq = self.field().clone();
        let d = self.dim();
        if z.len() != d {
            return Err(Error::Usage(format!("z must have {d} entries")));
        }
        let mut value: Vec<LaurentSeries> = vec![LaurentSeries::zero(&fq).with_precision(target); d];
        let mut bounds = vec![];
        let mut small = 0;
        let mut rising = 0;
        let q = fq.q() as i64;
        let mut qi: i64 = 1;
        for i in 0..MAX_TERMS {
            let c = if exp { self.exp_coeff(i)? } else { self.log_coeff(i)? };
            // term bound: min over contributing entries of v(c_kj) + q^i v(z_j)
            let mut bound: Option<i64> = None;
            for row in &c {
                for (x, zj) in row.iter().zip(z) {
                    if let (Some(vx), Some(vz)) = (x.valuation(), zj.valuation()) {
                        let b = vx.saturating_add(qi.saturating_mul(vz));
                        bound = Some(bound.map_or(b, |o: i64| o.min(b)));
                    }
                }
            }
            if let (Some(b), Some(Some(prev))) = (bound, bounds.last()) {
                // terms that stop shrinking never reach zero
                if b <= *prev {
                    rising += 1;
                } else {
                    rising = 0;
                }
            }
            bounds.push(bound);
            if !exp && rising >= 3 {
                return Err(Error::DivergentSeries(format!("logarithm terms stop shrinking at level {i}")));
            }
            if bound.is_none_or(|b| b >= target) {
                small += 1;
                if small >= 2 {
                    return Ok(SeriesValue { value, terms: i + 1, term_bounds: bounds });
                }
            } else {
                small = 0;
                let zt: Vec<LaurentSeries> = z.iter().map(|x| x.twist(i as u32)).collect();
                for (k, row) in c.iter().enumerate() {
                    for (x, zj) in row.iter().zip(&zt) {
                        if x.is_zero() || zj.is_zero() {
                            continue;
                        }
                        let vz = zj.valuation().unwrap_or(0);
                        let xl = LaurentSeries::from_ratfunc(x, target - vz + 2);
                        value[k] = value[k].add(&xl.mul(zj));
                    }
                }
            }
            qi = qi.saturating_mul(q);
        }
        Err(Error::NonConvergent(format!("series not below u^{target} after {MAX_TERMS} terms")))
    }

    /// Exact check of the coefficient recurrences coming from the functional
    /// equations of Exp and Log, for i <= i_max.
    pub fn verify_func_eq(&self, i_max: usize) -> Result<VerificationReport> {
        let mut rep = VerificationReport::new("functional equations of Exp and Log", json!({ "module": self.spec.label(), "i_max": i_max }));
        let dt = to_rat(&self.dt);
        for i in 0..=i_max {
            let qi = self.exp_coeff(i)?;
            let lhs = smat_mul(&qi, &smat_twist(&dt, i as u32));
            let mut rhs = smat_mul(&dt, &qi);
            for j in 1..=i.min(self.taus.len()) {
                rhs = smat_add(&rhs, &smat_mul(&to_rat(&self.e(j)), &smat_twist(&self.exp_coeff(i - j)?, j as u32)));
            }
            rep.push(Check::exact(format!("exp i={i}"), smat_to_json(&lhs), smat_to_json(&rhs)));

            let pi = self.log_coeff(i)?;
            let lhs = smat_mul(&dt, &pi);
            let mut rhs = smat_mul(&pi, &smat_twist(&dt, i as u32));
            for j in 1..=i.min(self.taus.len()) {
                rhs = smat_add(&rhs, &smat_mul(&self.log_coeff(i - j)?, &smat_twist(&to_rat(&self.e(j)), (i - j) as u32)));
            }
            rep.push(Check::exact(format!("log i={i}"), smat_to_json(&lhs), smat_to_json(&rhs)));
        }
        Ok(rep)
    }

    /// Σ_{a+b=i} Q_a P_b^(a) = [i = 0] I, exactly.
    pub fn verify_composition(&self, i_max: usize) -> Result<VerificationReport> {
        let fq = self.field();
        let d = self.dim();
        let mut rep = VerificationReport::new("Exp o Log = id on coefficients", json!({ "module": self.spec.label(), "i_max": i_max }));
        for i in 0..=i_max {
            let mut acc: ScalarMatrix<RatFunc> = vec![vec![RatFunc::zero(fq); d]; d];
            for a in 0..=i {
                acc = smat_add(&acc, &smat_mul(&self.exp_coeff(a)?, &smat_twist(&self.log_coeff(i - a)?, a as u32)));
            }
            let want = if i == 0 { smat_identity(fq, d) } else { vec![vec![RatFunc::zero(fq); d]; d] };
            rep.push(Check::exact(format!("i={i}"), smat_to_json(&acc), smat_to_json(&want)));
        }
        Ok(rep)
    }

    /// Whether Φ = C diag((t - θ)^ℓ_j) has C upper triangular on both sides.
    /// Φ is lower triangular, so this means Φ is diagonal.
    pub fn invertibility_hypothesis(&self) -> bool {
        let diag = |m: &Vec<Vec<TPoly<ThetaPoly>>>| m.iter().enumerate().all(|(j, r)| r.iter().enumerate().all(|(k, x)| j == k || x.is_zero()));
        diag(self.spec.phi()) && diag(self.spec.phi_m())
    }

    /// det Q_i != 0 and det P_i != 0 for i <= i_max.
    pub fn verify_invertible(&self, i_max: usize) -> Result<VerificationReport> {
        let hyp = self.invertibility_hypothesis();
        let mut rep = VerificationReport::new(
            "invertibility of Exp and Log coefficients",
            json!({ "module": self.spec.label(), "i_max": i_max, "hypothesis_satisfied": hyp }),
        );
        if !hyp {
            rep.note("hypothesis not satisfied: C is not upper triangular; determinants computed anyway");
        }
        for i in 0..=i_max {
            let dq = smat_det(&self.exp_coeff(i)?)?;
            rep.push(Check::flag(format!("det Q_{i} != 0"), !dq.is_zero(), dq.to_json()));
            let dp = smat_det(&self.log_coeff(i)?)?;
            rep.push(Check::flag(format!("det P_{i} != 0"), !dp.is_zero(), dp.to_json()));
        }
        Ok(rep)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "module": self.spec.label(),
            "dim": self.dim(),
            "dt": theta_mat_json(&self.dt),
            "taus": self.taus.iter().map(theta_mat_json).collect::<Vec<_>>(),
        })
    }
}

/// Difference of two scalar matrices is zero.
pub fn smat_eq(a: &ScalarMatrix<RatFunc>, b: &ScalarMatrix<RatFunc>) -> bool {
    smat_is_zero(&smat_sub(a, b))
}

#[cfg(test)]
mod tests;
