//! Motive specifications: Φ, block sizes, and the σ- and τ-bases.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde_json::{json, Value};

use super::linalg::{adjugate, det, mat_mul, mat_twist, solve_fq, split_theta_power, PolyMatrix};
use crate::error::{Error, Result};
use crate::scalar::{lucas_binomial, Fq, ThetaPoly};
use crate::tate::{RationalVector, TPoly};

/// An r-vector of polynomials in t over F_q[θ].
pub type PolyVec = Vec<TPoly<ThetaPoly>>;

const MAX_BASIS_DEGREE: usize = 8;
const MAX_PEEL_LEVEL: usize = 64;

/// Rank-r motive data. σ acts on N = C[t]^r by σ(a) = Φ^T a^(-1), with Φ
/// lower triangular and diagonal (t - θ)^ℓ_j up to units. τ acts on
/// M = C[t]^r by τ(a) = Φ_M a^(1), where by default
/// Φ_M = diag((t - θ)^ℓ_j (t - θ^q)^ℓ_j) (Φ^(1))^-1.
#[derive(Clone)]
pub struct MotiveSpec {
    pub(crate) fq: Fq,
    pub(crate) label: String,
    pub(crate) phi: PolyMatrix<ThetaPoly>,
    pub(crate) blocks: Vec<usize>,
    pub(crate) sigma_basis: Vec<PolyVec>,
    pub(crate) tau_basis: Vec<PolyVec>,
    /// Θ_0, Θ_1, ... with t h_k = Σ_i σ^i(Σ_j (Θ_i)_jk h_j).
    pub(crate) theta: Vec<Vec<Vec<ThetaPoly>>>,
    pub(crate) det_unit: ThetaPoly,
    pub(crate) adj_phi: PolyMatrix<ThetaPoly>,
    /// τ-side matrix: τ(a) = Φ_M a^(1) on M.
    pub(crate) phi_m: PolyMatrix<ThetaPoly>,
    pub(crate) adj_phi_m: PolyMatrix<ThetaPoly>,
    pub(crate) det_unit_m: ThetaPoly,
    pub(crate) tau_cache: Arc<Mutex<Vec<Vec<PolyVec>>>>,
}

impl fmt::Debug for MotiveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MotiveSpec")
            .field("label", &self.label)
            .field("q", &self.fq.q())
            .field("phi", &self.phi)
            .field("blocks", &self.blocks)
            .finish()
    }
}

impl PartialEq for MotiveSpec {
    fn eq(&self, o: &Self) -> bool {
        self.fq == o.fq
            && self.phi == o.phi
            && self.blocks == o.blocks
            && self.sigma_basis == o.sigma_basis
            && self.tau_basis == o.tau_basis
    }
}

fn t_minus_theta(fq: &Fq) -> TPoly<ThetaPoly> {
    TPoly::linear(&ThetaPoly::theta(fq))
}

fn divisible_by_theta_power(p: &TPoly<ThetaPoly>, m: usize) -> bool {
    let th = ThetaPoly::theta(p.field());
    let mut cur = p.clone();
    for _ in 0..m {
        if cur.is_zero() {
            return true;
        }
        let (q, r) = cur.div_linear(&th);
        if !r.is_zero() {
            return false;
        }
        cur = q;
    }
    true
}

impl MotiveSpec {
    /// Build from Φ and block sizes; the τ-basis is solved for.
    pub fn new(fq: &Fq, label: &str, phi: PolyMatrix<ThetaPoly>, blocks: Vec<usize>) -> Result<Self> {
        Self::build(fq, label, phi, blocks, None)
    }

    /// Build from Φ, block sizes and a given τ-basis (validated).
    pub fn with_tau_basis(
        fq: &Fq,
        label: &str,
        phi: PolyMatrix<ThetaPoly>,
        blocks: Vec<usize>,
        tau_basis: Vec<PolyVec>,
    ) -> Result<Self> {
        Self::build(fq, label, phi, blocks, Some(tau_basis))
    }

    /// C^{⊗n}: Φ = ((t - θ)^n), g_k = (t - θ)^(k-1), h_k = (t - θ)^(n-k).
    pub fn carlitz_tensor(fq: &Fq, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMotive("tensor power must be at least 1".into()));
        }
        let l = t_minus_theta(fq);
        let phi = vec![vec![l.pow(n as u32)]];
        let g = (0..n).map(|k| vec![l.pow(k as u32)]).collect();
        let spec = Self::build(fq, &format!("carlitz_tensor({n})"), phi, vec![n], Some(g))?;
        // degree-triangularity of the τ-expansion
        for i in 0..3 {
            for (k, v) in spec.tau_power_basis(i).iter().enumerate() {
                if v[0].degree() != Some(n * i + k) {
                    return Err(Error::InvalidMotive("tau basis is not degree triangular".into()));
                }
            }
        }
        Ok(spec)
    }

    /// Φ* for the multiple zeta value ζ_A(s_1, ..., s_r) (deg a_1 > ... > deg a_r).
    /// `h[k]` is the already twisted polynomial H^(-1) attached to the k-th entry
    /// of the reversed tuple; `None` uses 1, which is valid when that entry is <= q.
    pub fn mzv_star(fq: &Fq, s: &[usize], h: Option<&[TPoly<ThetaPoly>]>) -> Result<Self> {
        if s.is_empty() || s.contains(&0) {
            return Err(Error::InvalidMotive("s must be a nonempty tuple of positive integers".into()));
        }
        let sp: Vec<usize> = s.iter().rev().copied().collect();
        let r = sp.len();
        let hs: Vec<TPoly<ThetaPoly>> = match h {
            Some(v) => {
                if v.len() != r - 1 {
                    return Err(Error::InvalidMotive(format!("expected {} H polynomials, got {}", r - 1, v.len())));
                }
                v.to_vec()
            }
            None => {
                let q = fq.q() as usize;
                if let Some(&bad) = sp[..r - 1].iter().find(|&&x| x > q) {
                    return Err(Error::Unsupported(format!("H for entry {bad} > q must be supplied")));
                }
                vec![TPoly::one(fq); r - 1]
            }
        };
        let blocks: Vec<usize> = (0..r).map(|j| sp[j..].iter().sum()).collect();
        let l = t_minus_theta(fq);
        let mut phi = vec![vec![TPoly::zero(fq); r]; r];
        for j in 0..r {
            for c in 0..=j {
                let mut e = l.pow(blocks[c] as u32);
                for hk in &hs[c..j] {
                    e = e.mul(hk);
                }
                if (j - c) % 2 == 1 {
                    e = e.neg();
                }
                phi[j][c] = e;
            }
        }
        let label = format!("mzv_star({})", s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
        Self::new(fq, &label, phi, blocks)
    }

    /// The module for ζ_A(1, 3) over F_2.
    pub fn mzv_13() -> Result<Self> {
        let fq = Fq::new(2)?;
        let h = [t_minus_theta(&fq)];
        Self::mzv_star(&fq, &[1, 3], Some(&h))
    }

    fn build(fq: &Fq, label: &str, phi: PolyMatrix<ThetaPoly>, blocks: Vec<usize>, tau: Option<Vec<PolyVec>>) -> Result<Self> {
        let r = phi.len();
        if r == 0 || phi.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidMotive("Phi must be a nonempty square matrix".into()));
        }
        if blocks.len() != r || blocks.contains(&0) {
            return Err(Error::InvalidMotive("need one positive block size per row of Phi".into()));
        }
        for (j, row) in phi.iter().enumerate() {
            for (k, x) in row.iter().enumerate() {
                if x.field() != fq {
                    return Err(Error::FieldMismatch);
                }
                if k > j && !x.is_zero() {
                    return Err(Error::InvalidMotive("Phi must be lower triangular".into()));
                }
                if !divisible_by_theta_power(x, blocks[j].max(blocks[k])) {
                    return Err(Error::InvalidMotive(format!(
                        "Phi[{j}][{k}] is not divisible by (t - theta)^{}",
                        blocks[j].max(blocks[k])
                    )));
                }
            }
        }
        let d: usize = blocks.iter().sum();
        let det_unit = split_theta_power(&det(&phi), d)?;
        if !det_unit.is_constant() {
            // still invertible away from t = θ; only constant units keep the
            // σ^-1 denominators free of θ-polynomials
            return Err(Error::InvalidMotive("det Phi must be a nonzero constant times (t - theta)^d".into()));
        }
        let adj_phi = adjugate(&phi);
        let phi_m = derive_tau_matrix(fq, &phi, &adj_phi, &blocks, &det_unit)?;
        let adj_phi_m = adjugate(&phi_m);
        let det_unit_m = split_theta_power(&det(&phi_m), d)?;
        if !det_unit_m.is_constant() {
            return Err(Error::InvalidMotive("tau-side determinant mismatch".into()));
        }
        let l = t_minus_theta(fq);
        let mut sigma_basis = Vec::with_capacity(d);
        for (j, &lj) in blocks.iter().enumerate() {
            for a in (0..lj).rev() {
                let mut v = vec![TPoly::zero(fq); r];
                v[j] = l.pow(a as u32);
                sigma_basis.push(v);
            }
        }
        let mut spec = MotiveSpec {
            fq: fq.clone(),
            label: label.to_string(),
            phi,
            blocks,
            sigma_basis,
            tau_basis: vec![],
            theta: vec![],
            det_unit,
            adj_phi,
            phi_m,
            adj_phi_m,
            det_unit_m,
            tau_cache: Arc::new(Mutex::new(vec![])),
        };
        spec.theta = spec.extract_theta()?;
        let g = match tau {
            Some(g) => g,
            None => spec.solve_tau_basis()?,
        };
        if g.len() != d || g.iter().any(|v| v.len() != r) {
            return Err(Error::InvalidMotive(format!("tau basis must have {d} vectors of length {r}")));
        }
        spec.tau_basis = g;
        spec.check_tau_basis()?;
        Ok(spec)
    }

    /// Θ_i from peeling t·h_k against the σ-basis.
    fn extract_theta(&self) -> Result<Vec<Vec<Vec<ThetaPoly>>>> {
        let d = self.dim();
        let mut theta: Vec<Vec<Vec<ThetaPoly>>> = vec![];
        for k in 0..d {
            let th = TPoly::t(&self.fq);
            let x = RationalVector::from_polys(&self.fq, self.sigma_basis[k].iter().map(|p| p.mul(&th)).collect());
            let peel = self.peel_sigma(&x, &ThetaPoly::theta(&self.fq), MAX_PEEL_LEVEL, None)?;
            if !peel.exhausted {
                return Err(Error::InvalidMotive("t h_k has no finite sigma expansion".into()));
            }
            for (i, col) in peel.levels.iter().enumerate() {
                if theta.len() <= i {
                    theta.push(vec![vec![ThetaPoly::zero(&self.fq); d]; d]);
                }
                for (j, c) in col.iter().enumerate() {
                    theta[i][j][k] = c
                        .as_poly()
                        .cloned()
                        .ok_or_else(|| Error::InvalidMotive("t-action has non-polynomial coefficients".into()))?;
                }
            }
        }
        while theta.len() > 1 && theta.last().unwrap().iter().flatten().all(|x| x.is_zero()) {
            theta.pop();
        }
        Ok(theta)
    }

    /// Solve t g_k = Σ_i Σ_j (Θ_i)_kj τ^i(g_j), δ_0^M(g_k) = e_k over F_q with
    /// growing degree bounds.
    fn solve_tau_basis(&self) -> Result<Vec<PolyVec>> {
        let fq = &self.fq;
        let r = self.rank();
        let d = self.dim();
        let levels = self.theta.len();
        // Ψ_i = Φ_M Φ_M^(1) ... Φ_M^(i-1)
        let mut psi: Vec<PolyMatrix<ThetaPoly>> = vec![super::linalg::identity(fq, r)];
        for i in 1..levels {
            let next = mat_mul(&psi[i - 1], &mat_twist(&self.phi_m, (i - 1) as u32));
            psi.push(next);
        }
        let q = fq.q() as usize;
        let p = fq.p() as u64;
        let offsets: Vec<usize> = self.blocks.iter().scan(0, |acc, &l| { let o = *acc; *acc += l; Some(o) }).collect();
        for b in 0..=MAX_BASIS_DEGREE {
            let mut rows: HashMap<(u8, usize, usize, usize, usize), usize> = HashMap::new();
            let mut cols: Vec<Vec<(usize, u8)>> = vec![];
            let key = |k: (u8, usize, usize, usize, usize), rows: &mut HashMap<_, usize>| -> usize {
                let n = rows.len();
                *rows.entry(k).or_insert(n)
            };
            let mut unknowns = vec![];
            for k in 0..d {
                for c in 0..r {
                    for a in 0..=b {
                        for e in 0..=b {
                            unknowns.push((k, c, a, e));
                        }
                    }
                }
            }
            for &(k, c, a, e) in &unknowns {
                let mut col: HashMap<usize, u8> = HashMap::new();
                let push = |row: usize, v: u8, col: &mut HashMap<usize, u8>| {
                    let s = col.entry(row).or_insert(0);
                    *s = fq.add(*s, v);
                };
                push(key((0, k, c, a + 1, e), &mut rows), 1, &mut col);
                for (i, th) in self.theta.iter().enumerate() {
                    let s = q.pow(i as u32);
                    for (kp, th_row) in th.iter().enumerate() {
                        let coef = &th_row[k];
                        if coef.is_zero() {
                            continue;
                        }
                        for (row_c, psi_row) in psi[i].iter().enumerate() {
                            let entry = &psi_row[c];
                            for (tdeg, tc) in entry.coeffs().iter().enumerate() {
                                if tc.is_zero() {
                                    continue;
                                }
                                let prod = tc.mul(coef);
                                for (thdeg, &v) in prod.coeffs().iter().enumerate() {
                                    if v != 0 {
                                        let rk = key((0, kp, row_c, tdeg + a, thdeg + e * s), &mut rows);
                                        push(rk, fq.neg(v), &mut col);
                                    }
                                }
                            }
                        }
                    }
                }
                for m in 0..self.blocks[c].min(a + 1) {
                    let bin = lucas_binomial(a as u64, m as u64, p) as u32;
                    if bin != 0 {
                        let rk = key((1, k, offsets[c] + m, a - m + e, 0), &mut rows);
                        push(rk, fq.from_int(bin as i64), &mut col);
                    }
                }
                cols.push(col.into_iter().filter(|&(_, v)| v != 0).collect());
            }
            for k in 0..d {
                key((1, k, k, 0, 0), &mut rows);
            }
            let nrows = rows.len();
            let mut mat = vec![vec![0u8; cols.len()]; nrows];
            for (ci, col) in cols.iter().enumerate() {
                for &(ri, v) in col {
                    mat[ri][ci] = v;
                }
            }
            let mut rhs = vec![0u8; nrows];
            for k in 0..d {
                rhs[rows[&(1, k, k, 0, 0)]] = 1;
            }
            if let Some(x) = solve_fq(fq, &mat, &rhs) {
                let mut g: Vec<PolyVec> = vec![vec![TPoly::zero(fq); r]; d];
                for (idx, &(k, c, a, e)) in unknowns.iter().enumerate() {
                    if x[idx] != 0 {
                        let mono = TPoly::constant(ThetaPoly::monomial(fq, x[idx], e)).shift(a);
                        g[k][c] = g[k][c].add(&mono);
                    }
                }
                return Ok(g);
            }
        }
        Err(Error::NonPolynomialBasis(format!("no tau basis with degrees <= {MAX_BASIS_DEGREE}")))
    }

    fn check_tau_basis(&self) -> Result<()> {
        let d = self.dim();
        let th = ThetaPoly::theta(&self.fq);
        for k in 0..d {
            let v = RationalVector::from_polys(&self.fq, self.tau_basis[k].clone());
            let dm = self.delta0_m(&v, &th)?;
            for (j, x) in dm.iter().enumerate() {
                let want = if j == k { 1 } else { 0 };
                if *x != crate::scalar::RatFunc::constant(&self.fq, want) {
                    return Err(Error::InvalidMotive(format!("delta0M(g_{}) is not e_{}", k + 1, k + 1)));
                }
            }
        }
        // t g_k = Σ (Θ_i)_kj τ^i(g_j)
        for k in 0..d {
            let lhs: PolyVec = self.tau_basis[k].iter().map(|p| p.shift(1)).collect();
            let mut rhs: PolyVec = vec![TPoly::zero(&self.fq); self.rank()];
            for (i, th_i) in self.theta.iter().enumerate() {
                let basis = self.tau_power_basis(i);
                for (j, gj) in basis.iter().enumerate() {
                    let c = &th_i[k][j];
                    if c.is_zero() {
                        continue;
                    }
                    for (acc, x) in rhs.iter_mut().zip(gj) {
                        *acc = acc.add(&x.scale(c));
                    }
                }
            }
            if lhs != rhs {
                return Err(Error::InconsistentBases(format!("t g_{} does not match the sigma-side action", k + 1)));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &Fq {
        &self.fq
    }
    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn rank(&self) -> usize {
        self.phi.len()
    }
    pub fn dim(&self) -> usize {
        self.blocks.iter().sum()
    }
    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }
    pub fn phi(&self) -> &PolyMatrix<ThetaPoly> {
        &self.phi
    }
    pub fn phi_m(&self) -> &PolyMatrix<ThetaPoly> {
        &self.phi_m
    }
    pub fn sigma_basis(&self) -> &[PolyVec] {
        &self.sigma_basis
    }
    pub fn tau_basis(&self) -> &[PolyVec] {
        &self.tau_basis
    }
    /// Θ_0 = d[t], Θ_i = E_i.
    pub fn theta_matrices(&self) -> &[Vec<Vec<ThetaPoly>>] {
        &self.theta
    }
    pub fn det_unit(&self) -> &ThetaPoly {
        &self.det_unit
    }
    /// Block offsets into d-vectors.
    pub fn block_offsets(&self) -> Vec<usize> {
        let mut o = Vec::with_capacity(self.blocks.len());
        let mut acc = 0;
        for &l in &self.blocks {
            o.push(acc);
            acc += l;
        }
        o
    }

    /// τ^i(g_k) for all k, cached.
    pub fn tau_power_basis(&self, i: usize) -> Vec<PolyVec> {
        let mut cache = self.tau_cache.lock().unwrap_or_else(|e| e.into_inner());
        if cache.is_empty() {
            cache.push(self.tau_basis.clone());
        }
        while cache.len() <= i {
            let prev = cache.last().unwrap();
            let next = prev.iter().map(|v| self.tau_poly(v)).collect();
            cache.push(next);
        }
        cache[i].clone()
    }

    /// τ(a) = Φ_M a^(1) on polynomial vectors.
    pub fn tau_poly(&self, a: &PolyVec) -> PolyVec {
        self.phi_m
            .iter()
            .map(|row| {
                let mut acc = TPoly::zero(&self.fq);
                for (x, y) in row.iter().zip(a) {
                    if !x.is_empty() && !y.is_empty() {
                        acc = acc.add(&x.mul(&y.twist(1)));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let mat = |m: &PolyMatrix<ThetaPoly>| -> Value { Value::Array(m.iter().map(vec_to_json).collect()) };
        json!({
            "label": self.label,
            "field": { "p": self.fq.p(), "modulus": self.fq.modulus() },
            "phi": mat(&self.phi),
            "phi_m": mat(&self.phi_m),
            "blocks": self.blocks,
            "sigma_basis": Value::Array(self.sigma_basis.iter().map(vec_to_json).collect()),
            "tau_basis": Value::Array(self.tau_basis.iter().map(vec_to_json).collect()),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let f = v.get("field").ok_or_else(|| Error::Parse("missing field".into()))?;
        let p = f.get("p").and_then(Value::as_u64).ok_or_else(|| Error::Parse("missing field.p".into()))? as u32;
        let modulus: Vec<u32> = f
            .get("modulus")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing field.modulus".into()))?
            .iter()
            .map(|x| x.as_u64().map(|y| y as u32).ok_or_else(|| Error::Parse("bad modulus".into())))
            .collect::<Result<_>>()?;
        let fq = Fq::with_modulus(p, &modulus)?;
        let arr = |key: &str| -> Result<Vec<PolyVec>> {
            v.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("missing {key}")))?
                .iter()
                .map(|x| vec_from_json(&fq, x))
                .collect()
        };
        let phi = arr("phi")?;
        let blocks: Vec<usize> = v
            .get("blocks")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing blocks".into()))?
            .iter()
            .map(|x| x.as_u64().map(|y| y as usize).ok_or_else(|| Error::Parse("bad block size".into())))
            .collect::<Result<_>>()?;
        let label = v.get("label").and_then(Value::as_str).unwrap_or("motive");
        let spec = match v.get("tau_basis") {
            Some(_) => Self::with_tau_basis(&fq, label, phi, blocks, arr("tau_basis")?)?,
            None => Self::new(&fq, label, phi, blocks)?,
        };
        if v.get("sigma_basis").is_some() && arr("sigma_basis")? != spec.sigma_basis {
            return Err(Error::InvalidMotive("sigma basis does not match the block structure".into()));
        }
        Ok(spec)
    }
}

/// diag((t - θ)^ℓ_j (t - θ^q)^ℓ_j) (Φ^(1))^-1, which must be polynomial.
fn derive_tau_matrix(
    fq: &Fq,
    phi: &PolyMatrix<ThetaPoly>,
    adj: &PolyMatrix<ThetaPoly>,
    blocks: &[usize],
    unit: &ThetaPoly,
) -> Result<PolyMatrix<ThetaPoly>> {
    let r = phi.len();
    let d: usize = blocks.iter().sum();
    let l = t_minus_theta(fq);
    let l1 = l.twist(1);
    let thq = ThetaPoly::theta_twist(fq, 1);
    let cinv = fq.inv(unit.coeff(0))?;
    let mut out = vec![vec![TPoly::zero(fq); r]; r];
    for j in 0..r {
        let row_factor = l.mul(&l1).pow(blocks[j] as u32);
        for k in 0..r {
            let mut x = adj[j][k].twist(1).mul(&row_factor);
            for _ in 0..d {
                let (qt, rem) = x.div_linear(&thq);
                if !rem.is_zero() {
                    return Err(Error::InvalidMotive("tau-side matrix is not polynomial".into()));
                }
                x = qt;
            }
            out[j][k] = x.scale(&ThetaPoly::constant(fq, cinv));
        }
    }
    Ok(out)
}

/// JSON for a polynomial in t: list of θ-coefficient lists.
pub fn tpoly_to_json(p: &TPoly<ThetaPoly>) -> Value {
    Value::Array(p.coeffs().iter().map(|c| c.to_json()).collect())
}

pub fn tpoly_from_json(fq: &Fq, v: &Value) -> Result<TPoly<ThetaPoly>> {
    let arr = v.as_array().ok_or_else(|| Error::Parse("polynomial in t must be an array".into()))?;
    Ok(TPoly::new(fq, arr.iter().map(|c| ThetaPoly::from_json(fq, c)).collect::<Result<_>>()?))
}

fn vec_to_json(v: &PolyVec) -> Value {
    Value::Array(v.iter().map(tpoly_to_json).collect())
}

fn vec_from_json(fq: &Fq, v: &Value) -> Result<PolyVec> {
    v.as_array().ok_or_else(|| Error::Parse("expected an array".into()))?.iter().map(|x| tpoly_from_json(fq, x)).collect()
}
