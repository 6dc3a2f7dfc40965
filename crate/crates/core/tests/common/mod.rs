//! Invariant checks shared by the property tests and the acceptance run.
//! Each returns `Err` with a description of the first violation.
#![allow(dead_code)]

use motivic::sample::Sampler;
use motivic::scalar::{lucas_binomial, Fq, LaurentSeries, RatFunc, Scalar, ThetaPoly};
use motivic::tate::{gauss_log_norm, TPoly};

pub type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Field axioms over all triples of F_q.
pub fn field_axioms(q: u32) -> Check {
    let f = Fq::new(q).map_err(|e| e.to_string())?;
    let n = q as u8;
    for a in 0..n {
        ensure(f.add(a, f.neg(a)) == 0, || format!("q={q}: additive inverse of {a}"))?;
        if a != 0 {
            ensure(f.mul(a, f.inv(a).unwrap()) == 1, || format!("q={q}: inverse of {a}"))?;
        }
        for b in 0..n {
            ensure(f.add(a, b) == f.add(b, a) && f.mul(a, b) == f.mul(b, a), || format!("q={q}: commutativity {a},{b}"))?;
            for c in 0..n {
                ensure(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)), || format!("q={q}: + assoc {a},{b},{c}"))?;
                ensure(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)), || format!("q={q}: * assoc {a},{b},{c}"))?;
                ensure(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)), || format!("q={q}: distributivity {a},{b},{c}"))?;
            }
        }
    }
    Ok(())
}

fn exact_series(s: &mut Sampler) -> LaurentSeries {
    let val = s.below(9) as i64 - 4;
    let len = 1 + s.below(8);
    let c = (0..len).map(|_| s.elem()).collect();
    LaurentSeries::from_coeffs(s.field(), val, c, None)
}

/// v(xy) = v(x) + v(y) and the strong triangle inequality on exact series.
pub fn ultrametric(s: &mut Sampler) -> Check {
    let x = exact_series(s);
    let y = exact_series(s);
    let (vx, vy) = match (x.valuation(), y.valuation()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Ok(()),
    };
    ensure(x.mul(&y).valuation() == Some(vx + vy), || format!("v(xy) for {x} and {y}"))?;
    let sum = x.add(&y);
    if let Some(v) = sum.valuation() {
        ensure(v >= vx.min(vy), || format!("v(x+y) < min for {x} and {y}"))?;
    }
    if vx != vy {
        ensure(sum.valuation() == Some(vx.min(vy)), || format!("v(x+y) != min for {x} and {y}"))?;
    }
    Ok(())
}

/// Frobenius twist is a ring homomorphism on θ-polynomials, rational
/// functions and exact Laurent series.
pub fn twist_homomorphism(s: &mut Sampler, i: u32) -> Check {
    fn hom<S: Scalar + PartialEq + std::fmt::Debug>(a: &S, b: &S, i: u32) -> Check {
        ensure(a.add(b).twist(i) == a.twist(i).add(&b.twist(i)), || format!("twist {i} of sum {a:?} {b:?}"))?;
        ensure(a.mul(b).twist(i) == a.twist(i).mul(&b.twist(i)), || format!("twist {i} of product {a:?} {b:?}"))
    }
    hom(&s.theta_poly(4), &s.theta_poly(4), i)?;
    hom(&s.ratfunc(3), &s.ratfunc(3), i)?;
    hom(&exact_series(s), &exact_series(s), i)
}

/// F_q(θ) -> K_∞ is a ring homomorphism at any precision.
pub fn embedding(s: &mut Sampler, prec: i64) -> Check {
    let a = s.ratfunc(3);
    let b = s.ratfunc(3);
    let l = |x: &RatFunc| LaurentSeries::from_ratfunc(x, prec);
    let agree = |x: &LaurentSeries, y: &LaurentSeries| x.agreement(y) >= prec;
    ensure(agree(&l(&a.add(&b)), &l(&a).add(&l(&b))), || format!("sum of {a} and {b}"))?;
    // products lose precision by the valuations of the factors
    let slack = [&a, &b].iter().filter_map(|x| x.valuation()).map(|v| v.min(0)).sum::<i64>();
    let p = l(&a.mul(&b));
    ensure(p.agreement(&l(&a).mul(&l(&b))) >= prec + slack, || format!("product of {a} and {b}"))?;
    if !b.is_zero() {
        let q = a.div(&b).unwrap();
        let lq = LaurentSeries::div_to_prec(&l(&a), &l(&b), prec).map_err(|e| e.to_string())?;
        ensure(l(&q).agreement(&lq) >= prec - 2 * b.valuation().unwrap().abs() - 8, || format!("quotient of {a} by {b}"))?;
    }
    Ok(())
}

fn tpoly(s: &mut Sampler) -> TPoly<ThetaPoly> {
    let d = s.below(6);
    s.tpoly(d, 3)
}

/// ‖ab‖ <= ‖a‖‖b‖ for the Gauss norm at |t| = |θ|.
pub fn gauss_submultiplicative(s: &mut Sampler) -> Check {
    let a = tpoly(s);
    let b = tpoly(s);
    match (gauss_log_norm(&a), gauss_log_norm(&b), gauss_log_norm(&a.mul(&b))) {
        (Some(x), Some(y), Some(z)) => ensure(z <= x + y, || format!("|ab| = {z} > {x} + {y}")),
        _ => Ok(()),
    }
}

fn scale_int<S: Scalar>(p: &TPoly<S>, c: u64) -> TPoly<S> {
    let a = p.field().from_int(c as i64);
    p.map(|x| x.scale_fq(a))
}

/// ∂^i ∂^j = C(i+j, i) ∂^(i+j) for all i + j <= 6.
pub fn hyper_composition(f: &TPoly<ThetaPoly>) -> Check {
    let p = f.field().p() as u64;
    for i in 0..=6usize {
        for j in 0..=6 - i {
            let lhs = f.hyperderivative(j).hyperderivative(i);
            let rhs = scale_int(&f.hyperderivative(i + j), lucas_binomial((i + j) as u64, i as u64, p));
            ensure(lhs == rhs, || format!("d^{i} d^{j} on {f:?}"))?;
        }
    }
    Ok(())
}

/// ∂^n(fg) = Σ_{a+b=n} ∂^a f ∂^b g for n <= 5.
pub fn product_rule(f: &TPoly<ThetaPoly>, g: &TPoly<ThetaPoly>) -> Check {
    let fg = f.mul(g);
    for n in 0..=5 {
        let mut acc = TPoly::zero(f.field());
        for a in 0..=n {
            acc = acc.add(&f.hyperderivative(a).mul(&g.hyperderivative(n - a)));
        }
        ensure(fg.hyperderivative(n) == acc, || format!("Leibniz n={n}"))?;
    }
    Ok(())
}

/// (∂^j f)(θ) twisted i times equals (∂^j f^(i))(θ^(q^i)), on every monomial
/// c θ^a t^b with a, b <= 6, j <= 6, i <= 3.
pub fn twist_commutes_with_evaluation(fq: &Fq) -> Check {
    let theta = ThetaPoly::theta(fq);
    for a in 0..=6usize {
        for b in 0..=6usize {
            for c in 1..fq.q() as u8 {
                let mut coeffs = vec![ThetaPoly::zero(fq); b + 1];
                coeffs[b] = ThetaPoly::monomial(fq, c, a);
                let f = TPoly::new(fq, coeffs);
                for j in 0..=6 {
                    let d = f.hyperderivative(j);
                    for i in 0..=3u32 {
                        let lhs = d.eval(&theta).twist(i);
                        let rhs = f.twist(i).hyperderivative(j).eval(&ThetaPoly::theta_twist(fq, i));
                        ensure(lhs == rhs, || format!("monomial {c} theta^{a} t^{b}, j={j}, i={i}"))?;
                    }
                }
            }
        }
    }
    Ok(())
}

/// A random polynomial in t for the hyperderivative checks.
pub fn random_tpoly(s: &mut Sampler) -> TPoly<ThetaPoly> {
    let d = 3 + s.below(6);
    s.tpoly(d, 2)
}

pub const FIELDS: [u32; 6] = [2, 3, 4, 5, 7, 9];

/// Independent closed form for the exponential coefficients of C^{⊗n}.
pub mod closed_form {
    use motivic::scalar::{Fq, RatFunc, ThetaPoly};

    fn ps_mul(a: &[RatFunc], b: &[RatFunc], n: usize) -> Vec<RatFunc> {
        let fq = a[0].field().clone();
        let mut out = vec![RatFunc::zero(&fq); n];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if i + j < n {
                    out[i + j] = out[i + j].add(&x.mul(y));
                }
            }
        }
        out
    }

    /// Row k of Q_i: hyperderivatives 0..n-1 at t = θ^(q^i) of
    /// (t - θ)^k / Π_{j<i} (t - θ^(q^j))^n.
    pub fn row(fq: &Fq, i: u32, k: usize, n: usize) -> Vec<RatFunc> {
        let a = ThetaPoly::theta_twist(fq, i);
        let mut f = vec![RatFunc::one(fq)];
        f.resize(n, RatFunc::zero(fq));
        let lin = vec![RatFunc::from_poly(a.sub(&ThetaPoly::theta(fq))), RatFunc::one(fq)];
        for _ in 0..k {
            f = ps_mul(&f, &lin, n);
        }
        for j in 0..i {
            // 1/(c + x) = Σ (-1)^e x^e / c^(e+1)
            let c = RatFunc::from_poly(a.sub(&ThetaPoly::theta_twist(fq, j)));
            let inv: Vec<RatFunc> = (0..n)
                .map(|e| {
                    let s = c.pow(e as u64 + 1).inv().unwrap();
                    if e % 2 == 1 {
                        s.neg()
                    } else {
                        s
                    }
                })
                .collect();
            for _ in 0..n {
                f = ps_mul(&f, &inv, n);
            }
        }
        f
    }
}
