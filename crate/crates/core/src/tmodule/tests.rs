use super::*;
use crate::motive::MotiveSpec;
use crate::scalar::Fq;

fn rat(fq: &Fq, p: ThetaPoly) -> RatFunc {
    let _ = fq;
    RatFunc::from_poly(p)
}

/// Power series in x with RatFunc coefficients, truncated at `n` terms.
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

/// Hyperderivatives 0..n of (t - θ)^k / D_i(t)^m at t = θ^(q^i), from the
/// Taylor expansion in x = t - θ^(q^i).
fn closed_form_row(fq: &Fq, i: u32, k: usize, m: usize, n: usize) -> Vec<RatFunc> {
    let a = ThetaPoly::theta_twist(fq, i);
    let lin = |c: ThetaPoly| vec![rat(fq, c), RatFunc::one(fq)];
    let mut f = vec![RatFunc::one(fq)];
    f.resize(n, RatFunc::zero(fq));
    for _ in 0..k {
        f = ps_mul(&f, &lin(a.sub(&ThetaPoly::theta(fq))), n);
    }
    for j in 0..i {
        // 1/(c + x) = Σ (-1)^e x^e / c^(e+1)
        let c = rat(fq, a.sub(&ThetaPoly::theta_twist(fq, j)));
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
        for _ in 0..m {
            f = ps_mul(&f, &inv, n);
        }
    }
    f
}

#[test]
fn carlitz_phi_t() {
    for q in [2, 3] {
        let fq = Fq::new(q).unwrap();
        let t = TModule::from_motive(&MotiveSpec::carlitz_tensor(&fq, 1).unwrap()).unwrap();
        assert_eq!(t.dt(), &vec![vec![ThetaPoly::theta(&fq)]]);
        assert_eq!(t.taus(), &[vec![vec![ThetaPoly::one(&fq)]]]);
        for n in 2..=4 {
            let t = TModule::from_motive(&MotiveSpec::carlitz_tensor(&fq, n).unwrap()).unwrap();
            assert_eq!(t.taus().len(), 1);
            for j in 0..n {
                for k in 0..n {
                    let want = if j == k {
                        ThetaPoly::theta(&fq)
                    } else if k == j + 1 {
                        ThetaPoly::one(&fq)
                    } else {
                        ThetaPoly::zero(&fq)
                    };
                    assert_eq!(t.dt()[j][k], want);
                    let e = if j == n - 1 && k == 0 { ThetaPoly::one(&fq) } else { ThetaPoly::zero(&fq) };
                    assert_eq!(t.taus()[0][j][k], e);
                }
            }
        }
    }
}

#[test]
fn mzv_phi_t() {
    let spec = MotiveSpec::mzv_13().unwrap();
    let fq = spec.field().clone();
    let t = TModule::from_motive(&spec).unwrap();
    let th = ThetaPoly::theta(&fq);
    for j in 0..5 {
        assert_eq!(t.dt()[j][j], th);
        for k in 0..5 {
            let want = if k == j + 1 && j < 3 { ThetaPoly::one(&fq) } else if j == k { th.clone() } else { ThetaPoly::zero(&fq) };
            assert_eq!(t.dt()[j][k], want, "dt {j} {k}");
        }
    }
    let e1 = &t.taus()[0];
    let nz: Vec<(usize, usize)> = (0..5).flat_map(|j| (0..5).map(move |k| (j, k))).filter(|&(j, k)| !e1[j][k].is_zero()).collect();
    assert_eq!(nz, vec![(2, 4), (3, 0), (3, 4), (4, 4)]);
    assert_eq!(e1[3][4], th.mul(&th).add(&th));
}

#[test]
fn carlitz_coefficients() {
    let fq = Fq::new(2).unwrap();
    let t = TModule::from_motive(&MotiveSpec::carlitz_tensor(&fq, 1).unwrap()).unwrap();
    for i in 0..5u32 {
        let mut di = ThetaPoly::one(&fq);
        let mut li = ThetaPoly::one(&fq);
        for j in 0..i {
            di = di.mul(&ThetaPoly::theta_twist(&fq, i).sub(&ThetaPoly::theta_twist(&fq, j)));
            li = li.mul(&ThetaPoly::theta(&fq).sub(&ThetaPoly::theta_twist(&fq, j + 1)));
        }
        assert_eq!(t.exp_coeff(i as usize).unwrap()[0][0], RatFunc::from_poly(di).inv().unwrap());
        assert_eq!(t.log_coeff(i as usize).unwrap()[0][0], RatFunc::from_poly(li).inv().unwrap());
    }
    let th = ThetaPoly::theta(&fq);
    assert_eq!(t.log_coeff(1).unwrap()[0][0], RatFunc::from_poly(th.mul(&th).add(&th)).inv().unwrap());
}

#[test]
fn tensor_exp_closed_form() {
    for q in [2, 3] {
        let fq = Fq::new(q).unwrap();
        for n in 1..=3 {
            let t = TModule::from_motive(&MotiveSpec::carlitz_tensor(&fq, n).unwrap()).unwrap();
            for i in 0..=4u32 {
                let qm = t.exp_coeff(i as usize).unwrap();
                for k in 0..n {
                    assert_eq!(qm[k], closed_form_row(&fq, i, k, n, n), "q={q} n={n} i={i} k={k}");
                }
            }
        }
    }
}

#[test]
fn recurrences_and_composition() {
    let fq = Fq::new(2).unwrap();
    for n in 1..=3 {
        let t = TModule::from_motive(&MotiveSpec::carlitz_tensor(&fq, n).unwrap()).unwrap();
        let r = t.verify_func_eq(4).unwrap();
        assert!(r.passed, "{:?}", r.failures());
        assert!(t.verify_composition(3).unwrap().passed);
    }
    let t = TModule::from_motive(&MotiveSpec::mzv_13().unwrap()).unwrap();
    let r = t.verify_func_eq(4).unwrap();
    assert!(r.passed, "{:?}", r.failures().iter().map(|c| &c.name).collect::<Vec<_>>());
    assert!(t.verify_composition(3).unwrap().passed);
}

#[test]
fn invertibility() {
    let fq = Fq::new(3).unwrap();
    let t = TModule::from_motive(&MotiveSpec::carlitz_tensor(&fq, 2).unwrap()).unwrap();
    let r = t.verify_invertible(3).unwrap();
    assert!(r.passed && t.invertibility_hypothesis());
    let m = TModule::from_motive(&MotiveSpec::mzv_13().unwrap()).unwrap();
    assert!(!m.invertibility_hypothesis());
    assert!(m.verify_invertible(3).unwrap().passed);
}

#[test]
fn mzv_log_blocks_match_tensor_powers() {
    let spec = MotiveSpec::mzv_13().unwrap();
    let fq = spec.field().clone();
    let m = TModule::from_motive(&spec).unwrap();
    let offs = spec.block_offsets();
    for (b, &l) in spec.blocks().iter().enumerate() {
        let c = TModule::from_motive(&MotiveSpec::carlitz_tensor(&fq, l).unwrap()).unwrap();
        for i in 0..4 {
            let p = m.log_coeff(i).unwrap();
            let pc = c.log_coeff(i).unwrap();
            for j in 0..l {
                for k in 0..l {
                    assert_eq!(p[offs[b] + j][offs[b] + k], pc[j][k], "block {b} i={i}");
                }
            }
        }
    }
}

#[test]
fn exp_log_evaluation() {
    let fq = Fq::new(2).unwrap();
    let t = TModule::from_motive(&MotiveSpec::carlitz_tensor(&fq, 1).unwrap()).unwrap();
    // Exp(z) against an independent sum of z^(2^i)/D_i
    let z = vec![LaurentSeries::monomial(&fq, 1, 1).add(&LaurentSeries::monomial(&fq, 1, 3))];
    let e = t.exp_eval(&z, 30).unwrap();
    let mut direct = LaurentSeries::zero(&fq);
    for i in 0..6u32 {
        let mut di = ThetaPoly::one(&fq);
        for j in 0..i {
            di = di.mul(&ThetaPoly::theta_twist(&fq, i).sub(&ThetaPoly::theta_twist(&fq, j)));
        }
        let zi = z[0].twist(i);
        direct = direct.add(&LaurentSeries::div_to_prec(&zi, &LaurentSeries::from_theta_poly(&di), 40).unwrap());
    }
    assert!(e.value[0].agreement(&direct) >= 30);
    let l = t.log_eval(&e.value, 30).unwrap();
    assert!(l.value[0].agreement(&z[0]) >= 30);
    // functional equation Exp(θ z) = φ_t(Exp z)
    let tz = vec![z[0].mul(&LaurentSeries::from_theta_poly(&ThetaPoly::theta(&fq)))];
    let lhs = t.exp_eval(&tz, 30).unwrap();
    let rhs = t.phi_t(&e.value);
    assert!(lhs.value[0].agreement(&rhs[0]) >= 28);
    // zero
    let zero = vec![LaurentSeries::zero(&fq)];
    assert!(t.exp_eval(&zero, 30).unwrap().value[0].is_zero());
}

#[test]
fn log_diverges_outside_disk() {
    let fq = Fq::new(2).unwrap();
    let t = TModule::from_motive(&MotiveSpec::carlitz_tensor(&fq, 1).unwrap()).unwrap();
    let z = vec![LaurentSeries::from_theta_poly(&ThetaPoly::theta(&fq).pow(3)).with_precision(40)];
    assert!(matches!(t.log_eval(&z, 30), Err(Error::DivergentSeries(_))));
}
