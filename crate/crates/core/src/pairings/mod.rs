//! Partial pairings F_n and G_n, the tail operator Θ_{t,τ}, product formulas
//! for the logarithm, and the verifications built on them.

mod section6;

pub use section6::{
    agf_instance, j_map, logalg_verify, logalg_verify_exact, pairing_h, pairing_i, residue_checks, verify_bilinearity, verify_pairings, verify_tails,
};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::motive::linalg::{smat_mul, ScalarMatrix};
use crate::motive::{DeltaM1z, MotiveSpec};
use crate::report::{Check, VerificationReport};
use crate::scalar::{Fq, LaurentSeries, RatFunc, Scalar, ThetaPoly};
use crate::special::{
    anderson_thakur_poly, gamma_factorial, log_series_zeta1, mzv_naive, pi_omega_ratio_over_t_minus_theta, point_to_laurent,
    special_point, zeta_naive, SpecialPointMap,
};
use crate::tate::{RationalVector, TPoly, TateElement};
use crate::tmodule::{smat_to_json, TModule, MAX_TERMS};

/// An element of M: its coordinates in the fixed F[t]-basis.
pub type MElement = Vec<TPoly<RatFunc>>;

/// Θ_{t,τ} stored by powers of τ: `coeffs[j - 1]` multiplies τ^j.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaTau {
    pub coeffs: Vec<ScalarMatrix<ThetaPoly>>,
}

impl ThetaTau {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|m| m.iter().all(|r| r.iter().all(|x| x.is_zero())))
    }

    /// Undo the telescoping: Θ_j = C_j - C_{j+1}.
    pub fn untelescope(&self) -> Vec<ScalarMatrix<ThetaPoly>> {
        let k = self.coeffs.len();
        (0..k)
            .map(|j| {
                if j + 1 == k {
                    self.coeffs[j].clone()
                } else {
                    let (a, b) = (&self.coeffs[j], &self.coeffs[j + 1]);
                    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.sub(y)).collect()).collect()
                }
            })
            .collect()
    }

    /// Entries as strings like "(θ^2 + θ)τ", one matrix of strings.
    pub fn to_json(&self) -> Value {
        let d = self.coeffs.first().map_or(0, |m| m.len());
        let mut out = vec![vec![String::new(); d]; d];
        for (j, m) in self.coeffs.iter().enumerate() {
            for (r, row) in m.iter().enumerate() {
                for (c, x) in row.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let tau = if j == 0 { "τ".to_string() } else { format!("τ^{}", j + 1) };
                    let term = if x.is_one() { tau } else { format!("({x}){tau}") };
                    if out[r][c].is_empty() {
                        out[r][c] = term;
                    } else {
                        out[r][c] = format!("{} + {}", out[r][c], term);
                    }
                }
            }
        }
        json!(out)
    }
}

/// Θ_{t,τ}: the coefficient of τ^j is Θ_j + Θ_{j+1} + ... + Θ_k.
pub fn theta_tau(t: &TModule) -> ThetaTau {
    let taus = t.taus();
    let mut coeffs: Vec<ScalarMatrix<ThetaPoly>> = Vec::with_capacity(taus.len());
    for j in (0..taus.len()).rev() {
        let m = match coeffs.last() {
            None => taus[j].clone(),
            Some(next) => taus[j].iter().zip(next).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.add(y)).collect()).collect(),
        };
        coeffs.push(m);
    }
    coeffs.reverse();
    ThetaTau { coeffs }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairingKind {
    /// F(1, 1; z) = Exp(z).
    Exp,
    /// G(1, 1; z) = Log(z).
    Log,
}

/// Running partial sums F_n(1,1;z) or δ_{1,z}^M(G_n(1,1)) with term norms.
#[derive(Clone, Debug)]
pub struct PairingState {
    module: TModule,
    kind: PairingKind,
    z: Vec<LaurentSeries>,
    target: i64,
    accumulated: Vec<LaurentSeries>,
    term_norms: Vec<Option<i64>>,
}

impl PairingState {
    /// State at level 0, where the partial sum is z.
    pub fn new(module: &TModule, kind: PairingKind, z: &[LaurentSeries], target: i64) -> Result<Self> {
        if z.len() != module.dim() {
            return Err(Error::Usage(format!("z must have {} entries", module.dim())));
        }
        let fq = module.field().clone();
        let mut s = PairingState {
            module: module.clone(),
            kind,
            z: z.to_vec(),
            target,
            accumulated: vec![LaurentSeries::zero(&fq).with_precision(target); module.dim()],
            term_norms: vec![],
        };
        s.step()?;
        Ok(s)
    }

    pub fn level(&self) -> usize {
        self.term_norms.len() - 1
    }
    pub fn value(&self) -> &[LaurentSeries] {
        &self.accumulated
    }
    /// Valuation lower bounds of the terms added so far; `None` for zero terms.
    pub fn term_norms(&self) -> &[Option<i64>] {
        &self.term_norms
    }
    /// p_j, with 1-based j as in the coordinate projections.
    pub fn project(&self, j: usize) -> Result<&LaurentSeries> {
        if j == 0 || j > self.accumulated.len() {
            return Err(Error::Usage(format!("projection index {j} out of range")));
        }
        Ok(&self.accumulated[j - 1])
    }

    fn coeff(&self, i: usize) -> Result<ScalarMatrix<RatFunc>> {
        match self.kind {
            PairingKind::Exp => self.module.exp_coeff(i),
            PairingKind::Log => self.module.log_coeff(i),
        }
    }

    /// The level-i term C_i z^(i) and its valuation bound.
    pub fn term(&self, i: usize) -> Result<(Vec<LaurentSeries>, Option<i64>)> {
        let c = self.coeff(i)?;
        let fq = self.module.field();
        let zt: Vec<LaurentSeries> = self.z.iter().map(|x| x.twist(i as u32)).collect();
        let mut bound: Option<i64> = None;
        let mut out = vec![LaurentSeries::zero(fq).with_precision(self.target); c.len()];
        for (k, row) in c.iter().enumerate() {
            for (x, zj) in row.iter().zip(&zt) {
                let (Some(vx), Some(vz)) = (x.valuation(), zj.valuation()) else { continue };
                let b = vx.saturating_add(vz);
                bound = Some(bound.map_or(b, |o| o.min(b)));
                if b >= self.target {
                    continue;
                }
                let xl = LaurentSeries::from_ratfunc(x, self.target - vz + 2);
                out[k] = out[k].add(&xl.mul(zj));
            }
        }
        Ok((out, bound))
    }

    /// Add the next level; returns its valuation bound.
    pub fn step(&mut self) -> Result<Option<i64>> {
        let i = self.term_norms.len();
        let (term, bound) = self.term(i)?;
        for (a, x) in self.accumulated.iter_mut().zip(&term) {
            *a = a.add(x);
        }
        self.term_norms.push(bound);
        Ok(bound)
    }

    /// Step until two consecutive terms are below u^target. Logarithm sums
    /// fail with DivergentSeries once the bounds drop three times in a row.
    pub fn run(&mut self, max_level: usize) -> Result<usize> {
        loop {
            let n = self.term_norms.len();
            let small = |b: &Option<i64>| b.is_none_or(|v| v >= self.target);
            if n >= 2 && small(&self.term_norms[n - 1]) && small(&self.term_norms[n - 2]) {
                return Ok(self.level());
            }
            if self.kind == PairingKind::Log && n >= 4 {
                let w = &self.term_norms[n - 4..];
                if w.iter().all(|b| b.is_some()) && w.windows(2).all(|p| p[1] < p[0]) {
                    return Err(Error::DivergentSeries(format!("pairing terms grow at level {}", n - 1)));
                }
            }
            if n > max_level.min(MAX_TERMS) {
                return Err(Error::NonConvergent(format!("no plateau below u^{} by level {}", self.target, n - 1)));
            }
            self.step()?;
        }
    }

    /// The partial sum recomputed from scratch, for consistency checks.
    pub fn recompute(&self) -> Result<Vec<LaurentSeries>> {
        let fq = self.module.field();
        let mut acc = vec![LaurentSeries::zero(fq).with_precision(self.target); self.module.dim()];
        for i in 0..=self.level() {
            let (term, _) = self.term(i)?;
            for (a, x) in acc.iter_mut().zip(&term) {
                *a = a.add(x);
            }
        }
        Ok(acc)
    }
}

fn exact_partial(t: &TModule, z: &[RatFunc], n: usize, exp: bool) -> Result<Vec<RatFunc>> {
    if z.len() != t.dim() {
        return Err(Error::Usage(format!("z must have {} entries", t.dim())));
    }
    let mut acc = vec![RatFunc::zero(t.field()); t.dim()];
    for i in 0..=n {
        let c = if exp { t.exp_coeff(i)? } else { t.log_coeff(i)? };
        let zt: Vec<RatFunc> = z.iter().map(|x| x.twist(i as u32)).collect();
        for (a, row) in acc.iter_mut().zip(&c) {
            for (x, y) in row.iter().zip(&zt) {
                if !x.is_zero() && !y.is_zero() {
                    *a = a.add(&x.mul(y));
                }
            }
        }
    }
    Ok(acc)
}

/// F_n(1,1;z) = Σ_{i<=n} Q_i z^(i), exactly.
pub fn f_partial_exact(t: &TModule, z: &[RatFunc], n: usize) -> Result<Vec<RatFunc>> {
    exact_partial(t, z, n, true)
}

/// δ_{1,z}^M(G_n(1,1)) = Σ_{i<=n} P_i z^(i), exactly.
pub fn g_partial_exact(t: &TModule, z: &[RatFunc], n: usize) -> Result<Vec<RatFunc>> {
    exact_partial(t, z, n, false)
}

pub(crate) fn basis_to_rat(v: &[TPoly<ThetaPoly>]) -> MElement {
    v.iter().map(|p| p.map(|x| x.to_field())).collect()
}

pub(crate) fn madd_scaled(acc: &mut MElement, c: &RatFunc, v: &MElement) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a = a.add(&x.scale(c));
    }
}

/// G_n(1,1) = Σ_{i<=n} Σ_k δ_0^N(σ^-i(h_k)) τ^i(g_k) as a d-vector in M.
pub fn g_partial_m(t: &TModule, n: usize) -> Result<Vec<MElement>> {
    let spec = t.spec();
    let fq = t.field();
    let d = t.dim();
    let mut out = vec![vec![TPoly::zero(fq); spec.rank()]; d];
    for i in 0..=n {
        let p = t.log_coeff(i)?;
        let basis: Vec<MElement> = spec.tau_power_basis(i).iter().map(|v| basis_to_rat(v)).collect();
        for (row, prow) in out.iter_mut().zip(&p) {
            for (c, b) in prow.iter().zip(&basis) {
                if !c.is_zero() {
                    madd_scaled(row, c, b);
                }
            }
        }
    }
    Ok(out)
}

/// (tI - d[t])^-1 Σ_k δ_0^N(σ^-m(h_k)) τ^m(e_k^T Θ_{t,τ} g): the level-m
/// object of the product formula, as d rational vectors in M.
pub fn product_formula_object(t: &TModule, m: usize) -> Result<Vec<RationalVector<RatFunc>>> {
    let spec = t.spec();
    let fq = t.field().clone();
    let d = t.dim();
    let r = spec.rank();
    let tt = theta_tau(t);
    let p = t.log_coeff(m)?;
    // e_k^T Θ_{t,τ} g pushed through τ^m, for each k
    let mut rows: Vec<MElement> = vec![vec![TPoly::zero(&fq); r]; d];
    for (j, cj) in tt.coeffs.iter().enumerate() {
        let basis: Vec<MElement> = spec.tau_power_basis(m + j + 1).iter().map(|v| basis_to_rat(v)).collect();
        for (k, row) in rows.iter_mut().enumerate() {
            for (l, c) in cj[k].iter().enumerate() {
                if !c.is_zero() {
                    madd_scaled(row, &c.twist(m as u32).to_field(), &basis[l]);
                }
            }
        }
    }
    let mut b: Vec<MElement> = vec![vec![TPoly::zero(&fq); r]; d];
    for (bi, prow) in b.iter_mut().zip(&p) {
        for (c, row) in prow.iter().zip(&rows) {
            if !c.is_zero() {
                madd_scaled(bi, c, row);
            }
        }
    }
    // (tI - θI - N)^-1 = Σ_e N^e / (t - θ)^(e+1), N nilpotent
    let theta = ThetaPoly::theta(&fq);
    let nil: ScalarMatrix<RatFunc> = t
        .dt()
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().enumerate().map(|(j, x)| if i == j { x.sub(&theta).to_field() } else { x.to_field() }).collect())
        .collect();
    let mut out: Vec<RationalVector<RatFunc>> = vec![RationalVector::zero(&fq, r); d];
    let mut cur = b;
    for e in 0..d {
        for (o, v) in out.iter_mut().zip(&cur) {
            let piece = RationalVector::from_polys(&fq, v.clone()).divide(&RatFunc::one(&fq), 0, e as u32 + 1);
            *o = o.add(&piece);
        }
        cur = apply_matrix(&nil, &cur, r, &fq);
    }
    Ok(out.into_iter().map(|v| v.cancel()).collect())
}

fn apply_matrix(a: &ScalarMatrix<RatFunc>, v: &[MElement], r: usize, fq: &Fq) -> Vec<MElement> {
    a.iter()
        .map(|row| {
            let mut acc = vec![TPoly::zero(fq); r];
            for (c, x) in row.iter().zip(v) {
                if !c.is_zero() {
                    madd_scaled(&mut acc, c, x);
                }
            }
            acc
        })
        .collect()
}

/// δ_{1,z}^M of coordinate `coord` (0-based) of the level-m product formula
/// object. Fails with PoleAtEvaluationPoint when that coordinate is not
/// regular at t = θ.
pub fn product_formula_level<F: Scalar<Field = F>>(t: &TModule, z: &[F], m: usize, coord: usize) -> Result<DeltaM1z<F>> {
    let y = product_formula_object(t, m)?;
    let v = y.get(coord).ok_or_else(|| Error::Usage(format!("coordinate {coord} out of range")))?;
    let Some(polys) = v.to_polys() else {
        return Err(Error::PoleAtEvaluationPoint(format!("coordinate {} at level {m} has a pole at t = theta", coord + 1)));
    };
    let conv: Vec<TPoly<F>> = polys.iter().map(|p| TPoly::new(t.field(), p.coeffs().iter().map(|c| ratfunc_to::<F>(c)).collect())).collect();
    let levels = m + theta_tau(t).coeffs.len() + 1;
    t.spec().delta_m1z(&conv, z, levels)
}

/// Convert a rational function into a field scalar type F by way of its
/// numerator and denominator.
fn ratfunc_to<F: Scalar<Field = F>>(x: &RatFunc) -> F {
    let n = F::from_theta(x.num());
    let d = F::from_theta(x.den());
    n.try_div(&d).expect("denominator of a rational function is nonzero")
}

/// Result of the two product-formula evaluations of p_n(Log(z)) on C^{⊗n}.
#[derive(Clone, Debug)]
pub struct ProductFormulaLog {
    pub level: usize,
    /// Path (a): the finite-level object under δ_{1,z}^M, when regular.
    pub path_a: Option<LaurentSeries>,
    pub path_a_note: Option<String>,
    /// Path (b): δ_{1,z}^M(π̃^n / ((t - θ) ω^n)).
    pub path_b: LaurentSeries,
    pub path_b_level: usize,
}

impl ProductFormulaLog {
    pub fn to_json(&self) -> Value {
        json!({
            "level": self.level,
            "path_a": self.path_a.as_ref().map(|x| x.to_json()),
            "path_a_note": self.path_a_note,
            "path_b": self.path_b.to_json(),
            "path_b_level": self.path_b_level,
        })
    }
}

fn carlitz_n(spec: &MotiveSpec) -> Result<u32> {
    if spec.rank() != 1 || spec.blocks().len() != 1 {
        return Err(Error::Unsupported("this operation needs a Carlitz tensor power".into()));
    }
    Ok(spec.blocks()[0] as u32)
}

/// δ_{1,z}^M(π̃^n / ((t - θ) ω^n)) for C^{⊗n} to absolute precision `prec`,
/// truncating the Tate element at t-degree `t_degree`.
pub fn ratio_delta(spec: &MotiveSpec, z: &[LaurentSeries], prec: i64, t_degree: usize) -> Result<DeltaM1z<LaurentSeries>> {
    let n = carlitz_n(spec)?;
    // τ^i(g_k) has t-degree n·i + k - 1
    let max_level = (t_degree + 1).saturating_sub(n as usize) / n as usize;
    let fq = spec.field().clone();
    let src = move |wp: i64, deg: usize| -> Result<Vec<TateElement<LaurentSeries>>> {
        Ok(vec![pi_omega_ratio_over_t_minus_theta(&fq, n, deg, wp)?])
    };
    spec.delta_m1z_tate(&src, z, prec, max_level).map_err(|e| match e {
        Error::NonConvergent(s) => Error::DivergentSeries(s),
        other => other,
    })
}

/// Both product-formula paths for p_n(Log_{C⊗n}(z)) at level m.
pub fn product_formula_log(t: &TModule, z: &[RatFunc], m: usize, prec: i64, t_degree: usize) -> Result<ProductFormulaLog> {
    let spec = t.spec();
    let n = carlitz_n(spec)? as usize;
    let zl = point_to_laurent(z, prec + 8);
    let (path_a, path_a_note) = match product_formula_level(t, z, m, n - 1) {
        Ok(v) => (Some(LaurentSeries::from_ratfunc(&v.value, prec)), None),
        Err(Error::PoleAtEvaluationPoint(s)) => (None, Some(format!("skipped at level {m}: {s}"))),
        Err(e) => return Err(e),
    };
    let b = ratio_delta(spec, &zl, prec, t_degree)?;
    Ok(ProductFormulaLog { level: m, path_a, path_a_note, path_b: b.value.with_precision(prec), path_b_level: b.level })
}

fn vec_json(v: &[LaurentSeries]) -> Value {
    json!(v.iter().map(|x| x.to_json()).collect::<Vec<_>>())
}

/// Compare two vectors: exact comparison when every entry is exact,
/// otherwise the smallest agreement valuation against `required`.
pub(crate) fn compare(name: &str, a: &[LaurentSeries], b: &[LaurentSeries], required: i64) -> Check {
    if a.iter().chain(b).all(|x| x.is_exact()) {
        return Check::exact(name, vec_json(a), vec_json(b));
    }
    let agree = a.iter().zip(b).map(|(x, y)| x.agreement(y)).min().unwrap_or(i64::MAX);
    Check::numeric(name, vec_json(a), vec_json(b), agree, required)
}

/// The Mellin-type identity on C^{⊗n}: at z = δ_1^N(H_n),
/// δ_{1,z}^M(π̃^n/((t-θ)ω^n)) = Γ_n ζ_A(n), cross-checked against the
/// logarithm series and, for n = 1, Σ 1/L_i.
pub fn mellin_verify(fq: &Fq, n: u32, prec: i64, t_degree: usize, supplied_h: Option<&TPoly<ThetaPoly>>) -> Result<VerificationReport> {
    let spec = MotiveSpec::carlitz_tensor(fq, n as usize)?;
    let h = anderson_thakur_poly(fq, n, supplied_h)?;
    let z = special_point(&spec, &h, SpecialPointMap::Delta1)?;
    let work = prec + 4;
    let zl = point_to_laurent(&z, work + 16);
    let mut rep = VerificationReport::new(
        "delta_(1,z)^M(pi^n / ((t - theta) omega^n)) = Gamma_n zeta_A(n)",
        json!({ "q": fq.q(), "n": n, "precision": prec, "t_degree": t_degree, "z": z.iter().map(|x| x.to_json()).collect::<Vec<_>>() }),
    );
    let gamma = gamma_factorial(fq, n as u64)?;
    let zeta = zeta_naive(fq, n as u64, work)?;
    let rhs = zeta.value.mul(&LaurentSeries::from_theta_poly(&gamma)).with_precision(work);
    rep.note(format!("brute-force sum used {} degree blocks", zeta.blocks));
    match ratio_delta(&spec, &zl, work, t_degree) {
        Ok(lhs) => {
            rep.note(format!("product formula stabilized at tau-level {}", lhs.level));
            rep.push(compare("product_formula = gamma_zeta", std::slice::from_ref(&lhs.value), std::slice::from_ref(&rhs), prec));
            if n == 1 {
                let ls = log_series_zeta1(fq, work)?;
                rep.push(compare("log_series = brute_force", std::slice::from_ref(&ls.value), std::slice::from_ref(&zeta.value), prec));
                rep.push(compare("product_formula = log_series", &[lhs.value], &[ls.value], prec));
            }
        }
        Err(e @ (Error::DivergentSeries(_) | Error::NonConvergent(_))) => {
            rep.push(Check::flag("product_formula converges", false, json!(e.to_string())));
        }
        Err(e) => return Err(e),
    }
    let t = TModule::from_motive(&spec)?;
    match t.log_eval(&zl, work) {
        Ok(l) => {
            rep.note(format!("logarithm series used {} terms", l.terms));
            rep.push(compare("logarithm p_n = gamma_zeta", &[l.value[n as usize - 1].clone()], &[rhs], prec));
        }
        Err(e @ (Error::DivergentSeries(_) | Error::NonConvergent(_))) => {
            rep.push(Check::flag("logarithm converges at z", false, json!(e.to_string())));
        }
        Err(e) => return Err(e),
    }
    Ok(rep)
}

/// p_4(G(1,1;z)) = c (θ^2 + θ) ζ_A(1,3) on the MZV module, z = (0,0,0,0,-c).
pub fn mzv_verify(prec: i64, c: u8) -> Result<VerificationReport> {
    let spec = MotiveSpec::mzv_13()?;
    let fq = spec.field().clone();
    let t = TModule::from_motive(&spec)?;
    let work = prec + 6;
    let mut z = vec![LaurentSeries::zero(&fq); 5];
    z[4] = LaurentSeries::monomial(&fq, fq.neg(c), 0);
    let mut rep = VerificationReport::new(
        "p_4(G(1,1;z)) = (theta^2 + theta) zeta_A(1,3), z = (0,0,0,0,-1)",
        json!({ "q": 2, "precision": prec, "scale": c }),
    );
    let mut st = PairingState::new(&t, PairingKind::Log, &z, work)?;
    let level = match st.run(MAX_TERMS) {
        Ok(l) => l,
        Err(e @ (Error::DivergentSeries(_) | Error::NonConvergent(_))) => {
            rep.push(Check::flag("G_n terms decay", false, json!(e.to_string())));
            return Ok(rep);
        }
        Err(e) => return Err(e),
    };
    rep.note(format!("plateau reached at level {level}"));
    rep.note(format!("term valuation bounds: {:?}", st.term_norms()));
    let th = ThetaPoly::theta(&fq);
    let factor = LaurentSeries::from_theta_poly(&th.mul(&th).add(&th)).scale(c);
    let zeta = mzv_naive(&fq, &[1, 3], work)?;
    rep.note(format!("brute-force MZV used {} degree blocks", zeta.blocks));
    let rhs = zeta.value.mul(&factor).with_precision(work);
    rep.push(compare("p_4(G) = (theta^2+theta) zeta(1,3)", &[st.project(4)?.clone()], &[rhs], prec));
    Ok(rep)
}

/// Matrices P_i, Q_i and products used in reports.
pub fn coefficient_table(t: &TModule, i_max: usize, exp: bool) -> Result<Value> {
    let mut out = vec![];
    for i in 0..=i_max {
        let c = if exp { t.exp_coeff(i)? } else { t.log_coeff(i)? };
        out.push(json!({ "i": i, "matrix": smat_to_json(&c) }));
    }
    Ok(json!(out))
}

/// Σ_{a+b=i} A_a B_b^(a) for coefficient streams A, B.
pub fn twisted_convolution(a: &[ScalarMatrix<RatFunc>], b: &[ScalarMatrix<RatFunc>], i: usize) -> ScalarMatrix<RatFunc> {
    let d = a[0].len();
    let fq = a[0][0][0].field().clone();
    let mut acc = vec![vec![RatFunc::zero(&fq); d]; d];
    for k in 0..=i {
        let bt: ScalarMatrix<RatFunc> = b[i - k].iter().map(|r| r.iter().map(|x| x.twist(k as u32)).collect()).collect();
        let prod = smat_mul(&a[k], &bt);
        for (ra, rp) in acc.iter_mut().zip(&prod) {
            for (x, y) in ra.iter_mut().zip(rp) {
                *x = x.add(y);
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests;
