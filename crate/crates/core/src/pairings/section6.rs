//! Pairings H_ℓ and I_ℓ, the tail and bilinearity identities of the partial
//! pairings, log-algebraicity and the residue calculus on C^{⊗n}.

use serde_json::{json, Value};

use super::{basis_to_rat, compare, g_partial_m, madd_scaled, product_formula_object, MElement};
use crate::error::{Error, Result};
use crate::motive::linalg::{mat_map, mat_twist, smat_identity, transpose, PolyMatrix, ScalarMatrix};
use crate::motive::MotiveSpec;
use crate::report::{Check, VerificationReport};
use crate::scalar::{Fq, LaurentSeries, RatFunc, Scalar, ThetaPoly};
use crate::special::{carlitz_products, point_to_laurent};
use crate::tate::{RationalVector, TPoly};
use crate::tmodule::{smat_to_json, TModule};

fn rat_json(v: &[RatFunc]) -> Value {
    json!(v.iter().map(|x| x.to_json()).collect::<Vec<_>>())
}

fn melem_json(v: &[MElement]) -> Value {
    json!(v.iter().map(|row| row.iter().map(|p| p.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn zero_mvec(fq: &Fq, d: usize, r: usize) -> Vec<MElement> {
    vec![vec![TPoly::zero(fq); r]; d]
}

fn polys(v: &RationalVector<RatFunc>) -> Result<MElement> {
    v.cancel().to_polys().ok_or_else(|| Error::PoleAtEvaluationPoint("expected a polynomial element of M".into()))
}

/// δ_0^M(τ^{-i}(m))^(i), evaluated at θ^(q^i).
fn q_row(spec: &MotiveSpec, m: &RationalVector<RatFunc>, i: usize) -> Result<Vec<RatFunc>> {
    let y = spec.tau_inv_pow_normalized(m, i);
    spec.delta0_m(&y, &spec.point(i as u32))
}

/// δ_0^N(σ^{-i}(n)) at θ.
fn p_col(spec: &MotiveSpec, n: &RationalVector<RatFunc>, i: usize) -> Result<Vec<RatFunc>> {
    spec.delta0_n(&spec.sigma_inv_pow(n, i), &spec.point(0))
}

/// H_ℓ(1,1) = Σ_j Σ_k δ_0^N(σ^{-j}(h_k)) (δ_0^M(τ^{j-ℓ}(g_k))^T)^(ℓ).
///
/// The mixed twist is evaluated as the j-th twist of the normalized
/// (τ^{-(ℓ-j)}(g_k))^(ℓ-j), taken at θ^(q^ℓ).
pub fn pairing_h(t: &TModule, l: usize) -> Result<ScalarMatrix<RatFunc>> {
    let spec = t.spec();
    let fq = t.field();
    let d = t.dim();
    let mut acc = vec![vec![RatFunc::zero(fq); d]; d];
    for j in 0..=l {
        for k in 0..d {
            let col = p_col(spec, &spec.h_vec(k), j)?;
            let y = spec.tau_inv_pow_normalized(&spec.g_vec::<RatFunc>(k), l - j).twist(j as u32);
            let row = spec.delta0_m(&y, &spec.point(l as u32))?;
            for (a, x) in acc.iter_mut().zip(&col) {
                for (b, w) in a.iter_mut().zip(&row) {
                    if !x.is_zero() && !w.is_zero() {
                        *b = b.add(&x.mul(w));
                    }
                }
            }
        }
    }
    Ok(acc)
}

/// I_ℓ(1,1,g_k,h_m) = Σ_j (δ_0^M(τ^{-j}(g_k))^T)^(j) δ_0^N(σ^{j-ℓ}(h_m))^(j),
/// with 0-based k and m.
pub fn pairing_i(t: &TModule, l: usize, k: usize, m: usize) -> Result<RatFunc> {
    let spec = t.spec();
    let d = t.dim();
    if k >= d || m >= d {
        return Err(Error::Usage(format!("basis index out of range (d = {d})")));
    }
    let mut acc = RatFunc::zero(t.field());
    for j in 0..=l {
        let row = q_row(spec, &spec.g_vec(k), j)?;
        let y = spec.sigma_inv_pow(&spec.h_vec::<RatFunc>(m), l - j).twist(j as u32);
        let col = spec.delta0_n(&y, &spec.point(j as u32))?;
        for (x, w) in row.iter().zip(&col) {
            if !x.is_zero() && !w.is_zero() {
                acc = acc.add(&x.mul(w));
            }
        }
    }
    Ok(acc)
}

/// H_0 = I, H_ℓ = 0 and I_ℓ(1,1,g_k,h_m) = [k = m][ℓ = 0] for ℓ <= l_max.
pub fn verify_pairings(t: &TModule, l_max: usize) -> Result<VerificationReport> {
    let fq = t.field();
    let d = t.dim();
    let mut rep = VerificationReport::new(
        "H_0(1,1) = I, H_l(1,1) = 0 (l > 0), I_l(1,1,g_k,h_m) = [k = m][l = 0]",
        json!({ "module": t.spec().label(), "l_max": l_max }),
    );
    for l in 0..=l_max {
        let h = pairing_h(t, l)?;
        let want = if l == 0 { smat_identity(fq, d) } else { vec![vec![RatFunc::zero(fq); d]; d] };
        rep.push(Check::exact(format!("H_{l}"), smat_to_json(&h), smat_to_json(&want)));
        let mut got = vec![vec![RatFunc::zero(fq); d]; d];
        for (k, row) in got.iter_mut().enumerate() {
            for (m, x) in row.iter_mut().enumerate() {
                *x = pairing_i(t, l, k, m)?;
            }
        }
        rep.push(Check::exact(format!("I_{l}"), smat_to_json(&got), smat_to_json(&want)));
    }
    Ok(rep)
}

fn phi_t_twisted<S: Scalar>(spec: &MotiveSpec, i: u32) -> PolyMatrix<S> {
    mat_map(&mat_twist(&transpose(spec.phi()), i), |x| S::from_theta(x))
}

/// Exact checks at level n:
/// F_n(1,σ;z) - F_n(τ,1;z) = boundary, G_n(1,τ) - G_n(σ,1) = boundary, and
/// (tI - d[t])^{-1} (G_n(1,t) - G_n(t,1)) = G_n(1,1).
pub fn verify_tails(t: &TModule, n: usize, z: &[RatFunc]) -> Result<VerificationReport> {
    let spec = t.spec();
    let fq = t.field().clone();
    let d = t.dim();
    let r = spec.rank();
    if z.len() != d {
        return Err(Error::Usage(format!("z must have {d} entries")));
    }
    let mut rep = VerificationReport::new(
        "tail identities of the partial pairings F_n and G_n",
        json!({ "module": spec.label(), "n": n, "z": rat_json(z) }),
    );

    // F side, pushed through δ_1^N: δ_1^N(c σ^i(h_k)) = c^(i) e_k
    let dot = |row: &[RatFunc], i: usize| -> RatFunc {
        row.iter().zip(z).fold(RatFunc::zero(&fq), |a, (x, y)| a.add(&x.mul(&y.twist(i as u32))))
    };
    let mut lhs = vec![RatFunc::zero(&fq); d];
    let mut rhs = vec![RatFunc::zero(&fq); d];
    for k in 0..d {
        let g = spec.g_vec::<RatFunc>(k);
        let tg = spec.tau(&g);
        for i in 0..=n {
            let a = dot(&q_row(spec, &g, i)?, i).twist(1);
            let b = dot(&q_row(spec, &tg, i)?, i);
            lhs[k] = lhs[k].add(&a).sub(&b);
            if i == n {
                rhs[k] = a;
            }
        }
    }
    rep.push(Check::exact(format!("F_{n}(1,sigma) - F_{n}(tau,1)"), rat_json(&lhs), rat_json(&rhs)));

    // G side in M^d. σ(h_k) is only known through its twist Φ^T(1) h_k.
    let mut lhs = zero_mvec(&fq, d, r);
    let mut rhs = zero_mvec(&fq, d, r);
    for k in 0..d {
        let h = spec.h_vec::<RatFunc>(k);
        let sh = spec.sigma_inv_twisted(&h.mat_mul(&phi_t_twisted::<RatFunc>(spec, 1))).cancel();
        for i in 0..=n {
            let up: MElement = basis_to_rat(&spec.tau_power_basis(i + 1)[k]);
            let here: MElement = basis_to_rat(&spec.tau_power_basis(i)[k]);
            let p = p_col(spec, &h, i)?;
            let s = if i == 0 {
                // δ_0^N(σ(·)) vanishes; evaluated on σ(h_k^(1)) = Φ^T h_k
                spec.delta0_n(&spec.sigma_of_twist(&h), &spec.point(0))?
            } else {
                spec.delta0_n(&spec.sigma_inv_pow(&sh, i - 1), &spec.point(0))?
            };
            for row in 0..d {
                madd_scaled(&mut lhs[row], &p[row], &up);
                madd_scaled(&mut lhs[row], &s[row].neg(), &here);
                if i == n {
                    madd_scaled(&mut rhs[row], &p[row], &up);
                }
            }
        }
    }
    rep.push(Check::exact(format!("G_{n}(1,tau) - G_{n}(sigma,1)"), melem_json(&lhs), melem_json(&rhs)));

    let y = product_formula_object(t, n)?.iter().map(polys).collect::<Result<Vec<_>>>()?;
    let g = g_partial_m(t, n)?;
    rep.push(Check::exact(format!("(tI - d[t])^-1 boundary_{n} = G_{n}(1,1)"), melem_json(&y), melem_json(&g)));
    Ok(rep)
}

/// F_n(a,1;z) = F_n(1,a;z) and G_n(a,1) = G_n(1,a) for a scalar a, level by level.
pub fn verify_bilinearity(t: &TModule, n: usize, a: &RatFunc, z: &[RatFunc]) -> Result<VerificationReport> {
    let spec = t.spec();
    let fq = t.field().clone();
    let d = t.dim();
    let r = spec.rank();
    let mut rep = VerificationReport::new(
        "F_n(ax,y;z) = F_n(x,ay;z), G_n(ax,y) = G_n(x,ay)",
        json!({ "module": spec.label(), "n": n, "a": a.to_json() }),
    );
    let (an, ad) = (a.clone(), RatFunc::one(&fq));
    for i in 0..=n {
        // F: a enters through τ^{-i}(a g_k) on one side and σ^i(a h_k) on the other
        let mut lhs = vec![RatFunc::zero(&fq); d];
        let mut rhs = vec![RatFunc::zero(&fq); d];
        for k in 0..d {
            let g = spec.g_vec::<RatFunc>(k);
            let ra = q_row(spec, &g.scale_frac(&an, &ad), i)?;
            let r1 = q_row(spec, &g, i)?;
            let dot = |row: &[RatFunc]| row.iter().zip(z).fold(RatFunc::zero(&fq), |s, (x, y)| s.add(&x.mul(&y.twist(i as u32))));
            lhs[k] = dot(&ra);
            // (σ^i(a h))^(i) = a (σ^i h)^(i), so δ_1^N contributes a c^(i)
            rhs[k] = dot(&r1).mul(a);
        }
        rep.push(Check::exact(format!("F level {i}"), rat_json(&lhs), rat_json(&rhs)));

        let mut lhs = zero_mvec(&fq, d, r);
        let mut rhs = zero_mvec(&fq, d, r);
        for k in 0..d {
            let h = spec.h_vec::<RatFunc>(k);
            let pa = p_col(spec, &h.scale_frac(&an, &ad), i)?;
            let p1 = p_col(spec, &h, i)?;
            let mut tg = spec.g_vec::<RatFunc>(k).scale_frac(&an, &ad);
            for _ in 0..i {
                tg = spec.tau(&tg);
            }
            let tga = polys(&tg)?;
            let tg1 = basis_to_rat(&spec.tau_power_basis(i)[k]);
            for row in 0..d {
                madd_scaled(&mut lhs[row], &pa[row], &tg1);
                madd_scaled(&mut rhs[row], &p1[row], &tga);
            }
        }
        rep.push(Check::exact(format!("G level {i}"), melem_json(&lhs), melem_json(&rhs)));
    }
    Ok(rep)
}

fn carlitz_n(t: &TModule) -> Result<usize> {
    let spec = t.spec();
    if spec.rank() != 1 || spec.blocks().len() != 1 {
        return Err(Error::Unsupported("this check needs a Carlitz tensor power".into()));
    }
    Ok(spec.blocks()[0])
}

/// x_i = Φ^T(i) ⋯ Φ^T(1) h, the twist-normalized σ^i(h).
fn sigma_chain<S: Scalar>(spec: &MotiveSpec, h: &RationalVector<S>, i_max: usize) -> Vec<RationalVector<S>> {
    let mut out = vec![h.clone()];
    for i in 1..=i_max {
        let x = out[i - 1].mat_mul(&phi_t_twisted::<S>(spec, i as u32)).cancel();
        out.push(x);
    }
    out
}

/// h = (t - θ) Σ_{i<=levels} c_i / (θ^(q^i) - t) with c_i = z^(q^i)/D_i: the
/// Anderson generating function of exp_C at z, times (t - θ), truncated.
/// An inexact `z` needs absolute precision about `prec + Σ_{j<=levels} q^j`.
pub fn agf_instance(fq: &Fq, z: &LaurentSeries, levels: usize, prec: i64) -> Result<RationalVector<LaurentSeries>> {
    let (d, _) = carlitz_products(fq, levels);
    // clearing denominators multiplies by θ^(q^j)-sized factors
    let extra: i64 = (0..=levels as u32).map(|j| (fq.q() as i64).pow(j)).sum();
    let prec = prec + extra;
    let mut acc = RationalVector::<LaurentSeries>::zero(fq, 1);
    for (i, di) in d.iter().enumerate() {
        let c = LaurentSeries::div_to_prec(&z.twist(i as u32), &LaurentSeries::from_theta_poly(di), prec)?;
        if c.is_zero() {
            // below the working precision; a pole here would cancel unstably
            break;
        }
        // c/(θ^(q^i) - t) = -c/(t - θ^(q^i))
        let v = RationalVector::from_polys(fq, vec![TPoly::constant(c.neg())]).divide(&LaurentSeries::one(fq), i as u32, 1);
        acc = acc.add(&v);
    }
    let lin = TPoly::linear(&LaurentSeries::from_theta_poly(&ThetaPoly::theta(fq)));
    Ok(acc.mul_poly(&lin).cancel())
}

/// Split num/(den·D) into a polynomial and the valuation of the remainder in
/// the Gauss norm at |t| = |θ|.
fn polynomial_part(v: &RationalVector<LaurentSeries>) -> Result<(Vec<TPoly<LaurentSeries>>, Option<i64>)> {
    let fq = v.field().clone();
    let v = v.cancel();
    let mut dpoly = TPoly::<LaurentSeries>::one(&fq);
    let mut dval = 0i64;
    let q = fq.q() as i64;
    for (&j, &m) in &v.poles {
        dpoly = dpoly.mul(&TPoly::theta_factor_pow(&fq, j, m));
        dval += m as i64 * q.pow(j);
    }
    let dinv = LaurentSeries::one(&fq).try_div(&v.den)?;
    let vden = v.den.valuation().unwrap_or(0);
    let mut out = vec![];
    let mut tail: Option<i64> = None;
    for p in &v.num {
        let (quo, rem) = p.div_rem_monic(&dpoly);
        out.push(quo.map(|c| c.mul(&dinv)));
        let vr = rem.coeffs().iter().enumerate().filter_map(|(k, c)| c.valuation().map(|x| x - k as i64)).min();
        if let Some(vr) = vr {
            let t = vr + dval - vden;
            tail = Some(tail.map_or(t, |o| o.min(t)));
        }
    }
    Ok((out, tail))
}

/// How far the numerator coefficients reach above |θ|^0; evaluation points
/// need this much extra precision.
fn coeff_spread(h: &RationalVector<LaurentSeries>) -> i64 {
    let v = h.num.iter().flat_map(|p| p.coeffs().iter().filter_map(|c| c.valuation())).min().unwrap_or(0);
    let dv = h.den.valuation().unwrap_or(0);
    (-v).max(0) + dv.abs()
}

/// J(h) = Σ_i Q_i δ_0^N(x_i) at θ^(q^i), x_i = Φ^T(i)⋯Φ^T(1) h. Terms past
/// the largest pole of h vanish identically.
pub fn j_map(t: &TModule, h: &RationalVector<LaurentSeries>, prec: i64) -> Result<Vec<LaurentSeries>> {
    let spec = t.spec();
    let fq = t.field();
    let h = h.cancel();
    let top = h.poles.keys().copied().max().unwrap_or(0) as usize;
    let chain = sigma_chain(spec, &h, top);
    let mut acc = vec![LaurentSeries::zero(fq).with_precision(prec); t.dim()];
    for (i, x) in chain.iter().enumerate() {
        let at = spec.point::<LaurentSeries>(i as u32).with_precision(prec + 64 + 2 * coeff_spread(x));
        let v = spec.delta0_n(x, &at)?;
        let qm = t.exp_coeff(i)?;
        for (a, row) in acc.iter_mut().zip(&qm) {
            for (c, y) in row.iter().zip(&v) {
                if !c.is_zero() && !y.is_zero() {
                    let vy = y.valuation().unwrap_or(0);
                    *a = a.add(&LaurentSeries::from_ratfunc(c, prec - vy + 2).mul(y));
                }
            }
        }
    }
    Ok(acc.into_iter().map(|x| x.with_precision(prec)).collect())
}

/// Log-algebraicity on C^{⊗n}: g = σ^{-1}(h) - h must be polynomial, then
/// Exp(δ_0^N(h)) = -δ_1^N(g) and Exp(δ_0^N(h)) = J(h).
pub fn logalg_verify(t: &TModule, h: &RationalVector<LaurentSeries>, tol: i64) -> Result<VerificationReport> {
    let n = carlitz_n(t)?;
    let spec = t.spec();
    let fq = t.field().clone();
    let mut rep = VerificationReport::new("Exp(delta_0^N(h)) = -delta_1^N(g) = J(h), g = sigma^-1(h) - h", json!({ "n": n, "tolerance": tol }));
    if h.len() != 1 {
        return Err(Error::Usage("h must have one coordinate".into()));
    }
    let work = tol + 8;
    // exact inputs get a working precision so that divisions succeed
    let cap = work + 64;
    let h = &RationalVector {
        num: h.num.iter().map(|p| p.map(|c| if c.is_exact() { c.with_precision(cap) } else { c.clone() })).collect(),
        den: if h.den.is_exact() { h.den.with_precision(cap) } else { h.den.clone() },
        poles: h.poles.clone(),
    };
    let g = spec.sigma_inv(h).sub(h).cancel();
    let (gp, tail) = polynomial_part(&g)?;
    if let Some(v) = tail.filter(|&v| v < tol) {
        return Err(Error::NotAFunctionalEquationSolution(format!("sigma^-1(h) - h has a remainder of valuation {v}")));
    }
    // a vanishing remainder is reported at the working precision
    let rv = tail.unwrap_or(work).min(work);
    rep.push(Check::numeric("g polynomial", json!(rv), json!("non-polynomial remainder valuation"), rv, tol));
    // evaluation points carry a precision so that 1/(θ - θ^(q^j)) expands
    let theta = spec.point::<LaurentSeries>(0).with_precision(cap + 2 * coeff_spread(h));
    let dh = spec.delta0_n(h, &theta)?;
    let e = t.exp_eval(&dh, work)?;
    let gv = RationalVector::from_polys(&fq, gp);
    let d1 = spec.delta1_n(&gv, &theta, 64, Some(work))?;
    let neg: Vec<LaurentSeries> = d1.iter().map(|x| x.neg().with_precision(work)).collect();
    rep.push(compare("Exp(delta_0 h) = -delta_1 g", &e.value, &neg, tol));
    let j = j_map(t, h, work)?;
    rep.push(compare("Exp(delta_0 h) = J(h)", &e.value, &j, tol));
    Ok(rep)
}

/// Exact form of the log-algebraicity check for h over F_q(θ): g must be a
/// polynomial in t, and -δ_1^N(g) = J(h) holds exactly. Exp(δ_0^N(h)) is an
/// infinite series, compared to `tol` unless δ_0^N(h) vanishes.
pub fn logalg_verify_exact(t: &TModule, h: &RationalVector<RatFunc>, tol: i64) -> Result<VerificationReport> {
    let n = carlitz_n(t)?;
    let spec = t.spec();
    let fq = t.field().clone();
    if h.len() != 1 {
        return Err(Error::Usage("h must have one coordinate".into()));
    }
    let mut rep = VerificationReport::new("Exp(delta_0^N(h)) = -delta_1^N(g) = J(h), g = sigma^-1(h) - h", json!({ "n": n, "exact": true }));
    let g = spec.sigma_inv(h).sub(h).cancel();
    if !g.is_polynomial_in_t() {
        return Err(Error::NotAFunctionalEquationSolution(format!("sigma^-1(h) - h has poles {:?}", g.poles)));
    }
    let theta: RatFunc = spec.point(0);
    let d1: Vec<RatFunc> = spec.delta1_n(&g, &theta, 256, None)?.iter().map(|x| x.neg()).collect();
    let h = h.cancel();
    let top = h.poles.keys().copied().max().unwrap_or(0) as usize;
    let mut j = vec![RatFunc::zero(&fq); t.dim()];
    for (i, x) in sigma_chain(spec, &h, top).iter().enumerate() {
        let v = spec.delta0_n(x, &spec.point(i as u32))?;
        for (a, row) in j.iter_mut().zip(&t.exp_coeff(i)?) {
            *a = row.iter().zip(&v).fold(a.clone(), |s, (c, y)| s.add(&c.mul(y)));
        }
    }
    rep.push(Check::exact("-delta_1 g = J(h)", rat_json(&d1), rat_json(&j)));
    let dh = spec.delta0_n(&h, &theta)?;
    if dh.iter().all(|x| x.is_zero()) {
        rep.push(Check::exact("Exp(delta_0 h) = J(h)", rat_json(&dh), rat_json(&j)));
    } else {
        let e = t.exp_eval(&point_to_laurent(&dh, tol + 8), tol + 8)?;
        rep.push(compare("Exp(delta_0 h) = J(h)", &e.value, &point_to_laurent(&j, tol + 8), tol));
    }
    Ok(rep)
}

/// Residue calculus for h with poles at θ^(q^i), i >= 1, of order <= n on C^{⊗n}:
/// each level of J(h) is the vector of residues of (t-θ)^(k-n) h dt at
/// θ^(q^i), and Σ_i levels = -res_∞, all exact.
pub fn residue_checks(t: &TModule, h: &RationalVector<RatFunc>) -> Result<VerificationReport> {
    let n = carlitz_n(t)?;
    let spec = t.spec();
    let fq = t.field().clone();
    let h = h.cancel();
    if h.len() != 1 {
        return Err(Error::Usage("h must have one coordinate".into()));
    }
    if h.poles.contains_key(&0) {
        return Err(Error::PoleAtEvaluationPoint("h has a pole at t = theta".into()));
    }
    if let Some((&j, &m)) = h.poles.iter().find(|(_, &m)| m as usize > n) {
        return Err(Error::PoleOrderTooHigh(format!("pole of order {m} at theta^(q^{j}) exceeds n = {n}")));
    }
    let mut rep = VerificationReport::new(
        "J(h) level i = residues of (t - theta)^(k-n) h dt at theta^(q^i); sum = -res_infinity",
        json!({ "n": n, "poles": h.poles.iter().map(|(j, m)| json!([j, m])).collect::<Vec<_>>() }),
    );
    let lin = TPoly::linear(&RatFunc::theta(&fq));
    let weighted: Vec<RationalVector<RatFunc>> =
        (0..n).map(|k| h.mul_poly(&lin.pow(k as u32)).divide(&RatFunc::one(&fq), 0, n as u32)).collect();
    let top = h.poles.keys().copied().max().unwrap_or(0) as usize;
    let chain = sigma_chain(spec, &h, top);
    let mut total = vec![RatFunc::zero(&fq); n];
    let mut finite = vec![RatFunc::zero(&fq); n];
    for (i, x) in chain.iter().enumerate() {
        let v = spec.delta0_n(x, &spec.point(i as u32))?;
        let qm = t.exp_coeff(i)?;
        let term: Vec<RatFunc> =
            qm.iter().map(|row| row.iter().zip(&v).fold(RatFunc::zero(&fq), |a, (c, y)| a.add(&c.mul(y)))).collect();
        let res: Vec<RatFunc> = weighted.iter().map(|w| Ok(w.residue_at(i as u32)?[0].clone())).collect::<Result<_>>()?;
        rep.push(Check::exact(format!("level {i}"), rat_json(&term), rat_json(&res)));
        for (a, x) in total.iter_mut().zip(&term) {
            *a = a.add(x);
        }
        for (a, x) in finite.iter_mut().zip(&res) {
            *a = a.add(x);
        }
    }
    let inf: Vec<RatFunc> = weighted.iter().map(|w| Ok(w.residue_at_infinity()?[0].clone())).collect::<Result<_>>()?;
    let neg_inf: Vec<RatFunc> = inf.iter().map(|x| x.neg()).collect();
    rep.push(Check::exact("sum of finite residues = -res_infinity", rat_json(&finite), rat_json(&neg_inf)));
    rep.push(Check::exact("sum of levels = -res_infinity", rat_json(&total), rat_json(&neg_inf)));
    Ok(rep)
}
