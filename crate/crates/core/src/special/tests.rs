use super::*;

fn th(fq: &Fq) -> ThetaPoly {
    ThetaPoly::theta(fq)
}

#[test]
fn products_and_gamma() {
    let fq = Fq::new(2).unwrap();
    let (d, l) = carlitz_products(&fq, 3);
    let t = th(&fq);
    assert!(d[0].is_one());
    assert_eq!(d[1], t.mul(&t).add(&t));
    assert_eq!(l[1], t.mul(&t).add(&t));
    assert_eq!(gamma_factorial(&fq, 1).unwrap(), ThetaPoly::one(&fq));
    assert_eq!(gamma_factorial(&fq, 2).unwrap(), ThetaPoly::one(&fq));
    assert_eq!(gamma_factorial(&fq, 3).unwrap(), d[1]);
    // n = 6 = (110)_2: Γ_7 = D_1 D_2
    assert_eq!(gamma_factorial(&fq, 7).unwrap(), d[1].mul(&d[2]));
    let fq3 = Fq::new(3).unwrap();
    for n in 1..=3 {
        assert!(gamma_factorial(&fq3, n).unwrap().is_one());
    }
    assert!(gamma_factorial(&fq, 0).is_err());
}

#[test]
fn zeta_blocks() {
    let fq = Fq::new(2).unwrap();
    let mut ps = PowerSums::new(&fq, vec![1, 3], 30);
    let s0 = ps.block(0).unwrap().to_vec();
    let s1 = ps.block(1).unwrap().to_vec();
    let t = th(&fq);
    let inv = |p: ThetaPoly| LaurentSeries::from_ratfunc(&RatFunc::from_poly(p).inv().unwrap(), 30);
    // degrees <= 1 of ζ(1): 1 + 1/θ + 1/(θ+1) = 1 + 1/(θ^2+θ)
    assert_eq!(s0[0].add(&s1[0]).with_precision(30), LaurentSeries::one(&fq).add(&inv(t.mul(&t).add(&t))).with_precision(30));
    // ζ(1,3) restricted to deg a_1 <= 1 is S_1(1) S_0(3)
    assert_eq!(s1[0].mul(&s0[1]).with_precision(30), inv(t.mul(&t).add(&t)));
}

#[test]
fn zeta_one_matches_log_series() {
    for q in [2, 3] {
        let fq = Fq::new(q).unwrap();
        let z = zeta_naive(&fq, 1, 40).unwrap();
        let l = log_series_zeta1(&fq, 40).unwrap();
        assert!(z.value.agreement(&l.value) >= 40, "q={q}");
        assert_eq!(z.value.valuation(), Some(0));
    }
    let fq = Fq::new(3).unwrap();
    let z = zeta_naive(&fq, 2, 30).unwrap();
    let m = mzv_naive(&fq, &[2], 30).unwrap();
    assert_eq!(z.value, m.value);
}

#[test]
fn ratio_functional_equation() {
    for q in [2, 3] {
        let fq = Fq::new(q).unwrap();
        let n = 30;
        let rho = pi_omega_ratio(&fq, 1, 12, n).unwrap();
        let pq = pi_q_minus_1(&fq, n + 4).unwrap();
        let lhs = rho.twist(1).poly.mul(&TPoly::linear(&LaurentSeries::from_theta_poly(&th(&fq))));
        let rhs = rho.poly.scale(&pq);
        for k in 0..10 {
            assert!(lhs.coeff(k).agreement(&rhs.coeff(k)) >= n - q as i64 - 1, "q={q} k={k}");
        }
        // ρ(0) = c and ρ(θ) = 0
        let c = period_constant(&fq, n).unwrap();
        assert!(rho.poly.coeff(0).agreement(&c) >= n);
        let at = rho.eval_laurent(&LaurentSeries::from_theta_poly(&th(&fq)).with_precision(n)).unwrap();
        assert!(at.is_zero() || at.valuation().unwrap() >= n - 4);
        // ρ^2/(t-θ) times (t-θ) is ρ^2
        let r2 = pi_omega_ratio(&fq, 2, 12, n).unwrap();
        let d2 = pi_omega_ratio_over_t_minus_theta(&fq, 2, 12, n).unwrap();
        let back = d2.poly.mul(&TPoly::linear(&LaurentSeries::from_theta_poly(&th(&fq))));
        for k in 0..10 {
            assert!(back.coeff(k).agreement(&r2.poly.coeff(k)) >= n - 4, "q={q} k={k}");
        }
    }
}

#[test]
fn bernoulli() {
    for q in [2, 3, 5] {
        let fq = Fq::new(q).unwrap();
        let b = bernoulli_carlitz(&fq, 12).unwrap();
        assert!(b[0] == RatFunc::one(&fq));
        for (n, x) in b.iter().enumerate().skip(1).take(q as usize - 2) {
            assert!(x.is_zero(), "q={q} n={n}");
        }
        // Σ B_n z^n/Π(n) times exp_C(z)/z is 1
        let recip: Vec<RatFunc> = b.iter().enumerate().map(|(n, x)| x.div(&RatFunc::from_poly(gamma_factorial(&fq, n as u64 + 1).unwrap())).unwrap()).collect();
        let (d, _) = carlitz_products(&fq, 4);
        let mut e = vec![RatFunc::zero(&fq); 13];
        for (i, di) in d.iter().enumerate() {
            let k = (q as usize).pow(i as u32) - 1;
            if k <= 12 {
                e[k] = RatFunc::from_poly(di.clone()).inv().unwrap();
            }
        }
        for n in 0..=12 {
            let mut s = RatFunc::zero(&fq);
            for k in 0..=n {
                s = s.add(&e[k].mul(&recip[n - k]));
            }
            assert_eq!(s, if n == 0 { RatFunc::one(&fq) } else { RatFunc::zero(&fq) });
        }
    }
}

#[test]
fn anderson_thakur_and_points() {
    let fq = Fq::new(3).unwrap();
    assert_eq!(anderson_thakur_poly(&fq, 1, None).unwrap(), TPoly::one(&fq));
    assert_eq!(anderson_thakur_poly(&fq, 3, None).unwrap(), TPoly::one(&fq));
    assert!(matches!(anderson_thakur_poly(&fq, 4, None), Err(Error::Unsupported(_))));
    let c1 = MotiveSpec::carlitz_tensor(&fq, 1).unwrap();
    assert_eq!(special_point(&c1, &TPoly::one(&fq), SpecialPointMap::Delta1).unwrap(), vec![RatFunc::one(&fq)]);
    let c3 = MotiveSpec::carlitz_tensor(&fq, 3).unwrap();
    for k in 0..3 {
        let h = c3.sigma_basis()[k][0].clone();
        let z = special_point(&c3, &h, SpecialPointMap::Delta1).unwrap();
        for (j, x) in z.iter().enumerate() {
            assert_eq!(x.is_zero(), j != k);
        }
    }
    let z0 = special_point(&c3, &TPoly::one(&fq), SpecialPointMap::Delta0).unwrap();
    assert_eq!(z0, vec![RatFunc::zero(&fq), RatFunc::zero(&fq), RatFunc::one(&fq)]);
}
