use super::*;
use crate::scalar::parse::parse_ratfunc;

fn carlitz(q: u32, n: usize) -> TModule {
    let fq = Fq::new(q).unwrap();
    TModule::from_motive(&MotiveSpec::carlitz_tensor(&fq, n).unwrap()).unwrap()
}

fn mzv() -> TModule {
    TModule::from_motive(&MotiveSpec::mzv_13().unwrap()).unwrap()
}

fn rf(fq: &Fq, s: &str) -> RatFunc {
    parse_ratfunc(fq, s).unwrap()
}

#[test]
fn theta_tau_examples() {
    let t = carlitz(3, 3);
    let tt = theta_tau(&t);
    assert_eq!(tt.coeffs.len(), 1);
    for j in 0..3 {
        for k in 0..3 {
            assert_eq!(tt.coeffs[0][j][k].is_one(), j == 2 && k == 0);
        }
    }
    assert_eq!(tt.untelescope(), t.taus().to_vec());

    let m = mzv();
    let tt = theta_tau(&m);
    assert_eq!(tt.untelescope(), m.taus().to_vec());
    let s = tt.to_json();
    assert_eq!(s[3][4], json!("(theta^2 + theta)τ"));
    assert_eq!(s[2][4], json!("τ"));
    assert_eq!(s[0][0], json!(""));
}

#[test]
fn theta_tau_zero_for_linear_module() {
    // φ_t = d[t] has no τ-part, so the tail operator vanishes
    let tt = ThetaTau { coeffs: vec![] };
    assert!(tt.is_zero());
    let t = carlitz(2, 1);
    assert!(!theta_tau(&t).is_zero());
}

#[test]
fn partial_sums_match_coefficient_streams() {
    for t in [carlitz(3, 2), mzv()] {
        let fq = t.field().clone();
        let z: Vec<RatFunc> = (0..t.dim()).map(|k| rf(&fq, &format!("1/(theta^{} + 1)", k + 1))).collect();
        assert_eq!(f_partial_exact(&t, &z, 0).unwrap(), z);
        assert_eq!(g_partial_exact(&t, &z, 0).unwrap(), z);
        for n in 1..=3 {
            let df: Vec<RatFunc> = f_partial_exact(&t, &z, n)
                .unwrap()
                .iter()
                .zip(f_partial_exact(&t, &z, n - 1).unwrap())
                .map(|(a, b)| a.sub(&b))
                .collect();
            let qn = t.exp_coeff(n).unwrap();
            let want: Vec<RatFunc> =
                qn.iter().map(|row| row.iter().zip(&z).fold(RatFunc::zero(&fq), |a, (c, x)| a.add(&c.mul(&x.twist(n as u32))))).collect();
            assert_eq!(df, want, "n={n}");
        }
    }
}

#[test]
fn g_partial_m_evaluates_to_g_partial() {
    let t = carlitz(2, 2);
    let fq = t.field().clone();
    let z = vec![rf(&fq, "1/theta"), rf(&fq, "1/(theta^2+1)")];
    for n in 0..=3 {
        let gm = g_partial_m(&t, n).unwrap();
        let want = g_partial_exact(&t, &z, n).unwrap();
        for (row, w) in gm.iter().zip(&want) {
            let v = t.spec().delta_m1z(row, &z, n + 1).unwrap();
            assert_eq!(&v.value, w, "n={n}");
        }
    }
}

#[test]
fn pairing_state_tracks_log_eval() {
    let t = carlitz(3, 2);
    let fq = t.field().clone();
    let z = vec![LaurentSeries::monomial(&fq, 1, 2), LaurentSeries::monomial(&fq, 2, 1)];
    let mut st = PairingState::new(&t, PairingKind::Log, &z, 30).unwrap();
    assert_eq!(st.level(), 0);
    assert_eq!(st.value(), &z.iter().map(|x| x.with_precision(30)).collect::<Vec<_>>()[..]);
    let lvl = st.run(40).unwrap();
    assert_eq!(st.term_norms().len(), lvl + 1);
    let l = t.log_eval(&z, 30).unwrap();
    for j in 1..=2 {
        assert!(st.project(j).unwrap().agreement(&l.value[j - 1]) >= 30);
    }
    assert!(st.project(0).is_err());
    let again = st.recompute().unwrap();
    assert_eq!(again, st.value());
    let mut e = PairingState::new(&t, PairingKind::Exp, &z, 30).unwrap();
    e.run(40).unwrap();
    let ex = t.exp_eval(&z, 30).unwrap();
    assert!(e.value()[0].agreement(&ex.value[0]) >= 30);
}

#[test]
fn pairing_state_reports_divergence() {
    let t = carlitz(2, 1);
    let fq = t.field().clone();
    let z = vec![LaurentSeries::monomial(&fq, 1, -3)];
    let mut st = PairingState::new(&t, PairingKind::Log, &z, 20).unwrap();
    assert!(matches!(st.run(40), Err(Error::DivergentSeries(_))));
}

#[test]
fn mellin_small_cases() {
    for (q, n) in [(2, 1), (3, 1), (3, 2)] {
        let fq = Fq::new(q).unwrap();
        let r = mellin_verify(&fq, n, 40, 64, None).unwrap();
        assert!(r.passed, "q={q} n={n}: {:?}", r.failures());
        assert!(r.min_agreement().unwrap() >= 40);
    }
}

#[test]
fn mellin_negative_control() {
    let fq = Fq::new(2).unwrap();
    let bad = TPoly::constant(ThetaPoly::theta(&fq));
    let r = mellin_verify(&fq, 1, 30, 64, Some(&bad)).unwrap();
    assert!(!r.passed);
}

#[test]
fn mzv_identity() {
    let r = mzv_verify(25, 1).unwrap();
    assert!(r.passed, "{:?}", r.failures());
    assert!(r.notes.iter().any(|s| s.starts_with("plateau reached")));
    let z = mzv_verify(25, 0).unwrap();
    assert!(z.passed);
}

#[test]
fn mzv_top_block_matches_fourth_tensor_power() {
    let m = mzv();
    let fq = m.field().clone();
    let c4 = TModule::from_motive(&MotiveSpec::carlitz_tensor(&fq, 4).unwrap()).unwrap();
    let x = LaurentSeries::monomial(&fq, 1, 1);
    let mut z5 = vec![LaurentSeries::zero(&fq); 5];
    z5[3] = x.clone();
    let mut z4 = vec![LaurentSeries::zero(&fq); 4];
    z4[3] = x;
    let mut a = PairingState::new(&m, PairingKind::Log, &z5, 30).unwrap();
    a.run(40).unwrap();
    let mut b = PairingState::new(&c4, PairingKind::Log, &z4, 30).unwrap();
    b.run(40).unwrap();
    for j in 1..=4 {
        assert!(a.project(j).unwrap().agreement(b.project(j).unwrap()) >= 30, "p_{j}");
    }
}

#[test]
fn product_formula_paths() {
    let t = carlitz(2, 1);
    let fq = t.field().clone();
    let one = vec![RatFunc::one(&fq)];
    let zeta = zeta_naive(&fq, 1, 30).unwrap();
    let r = product_formula_log(&t, &one, 8, 30, 64).unwrap();
    assert!(r.path_b.agreement(&zeta.value) >= 30);
    // finite level m agrees up to the size of the omitted terms
    let a = r.path_a.unwrap();
    assert!(a.agreement(&zeta.value) >= 2i64.pow(9) - 2 || a.agreement(&zeta.value) >= 30);
    let zero = vec![RatFunc::zero(&fq)];
    let r0 = product_formula_log(&t, &zero, 3, 30, 64).unwrap();
    assert!(r0.path_b.is_zero());
    assert!(r0.path_a.unwrap().is_zero());
    // truncation stability of path (b)
    let zl = point_to_laurent(&one, 40);
    let x = ratio_delta(t.spec(), &zl, 30, 64).unwrap();
    let y = ratio_delta(t.spec(), &zl, 38, 64).unwrap();
    assert!(x.value.agreement(&y.value) >= 30);
}

#[test]
fn product_formula_level_is_partial_log() {
    let t = carlitz(3, 2);
    let fq = t.field().clone();
    let z = vec![rf(&fq, "1/theta"), rf(&fq, "theta/(theta^3+2)")];
    for m in 0..=2 {
        let g = g_partial_exact(&t, &z, m).unwrap();
        for c in 0..2 {
            assert_eq!(product_formula_level(&t, &z, m, c).unwrap().value, g[c]);
        }
    }
}

#[test]
fn tails_and_bilinearity() {
    for t in [carlitz(2, 1), carlitz(3, 2), carlitz(2, 3), mzv()] {
        let fq = t.field().clone();
        let z: Vec<RatFunc> = (0..t.dim()).map(|k| rf(&fq, &format!("theta^{k}/(theta^2 + theta + 1)"))).collect();
        let max = if t.dim() > 3 { 2 } else { 3 };
        for n in 0..=max {
            let r = verify_tails(&t, n, &z).unwrap();
            assert!(r.passed, "{} n={n}: {:?}", t.spec().label(), r.failures().iter().map(|c| &c.name).collect::<Vec<_>>());
        }
        let a = rf(&fq, "(theta^2 + 1)/(theta^3 + theta + 1)");
        let r = verify_bilinearity(&t, max, &a, &z).unwrap();
        assert!(r.passed, "{}", t.spec().label());
    }
}

#[test]
fn h_and_i_pairings() {
    for t in [carlitz(2, 1), carlitz(3, 2), carlitz(2, 3)] {
        let r = verify_pairings(&t, 3).unwrap();
        assert!(r.passed, "{}: {:?}", t.spec().label(), r.failures().iter().map(|c| &c.name).collect::<Vec<_>>());
    }
    let t = carlitz(2, 2);
    assert!(pairing_i(&t, 0, 2, 0).is_err());
    assert!(pairing_i(&t, 0, 1, 1).unwrap() == RatFunc::one(t.field()));
}

#[test]
fn h_pairing_matches_coefficient_convolution() {
    let t = mzv();
    let p: Vec<_> = (0..3).map(|i| t.log_coeff(i).unwrap()).collect();
    let q: Vec<_> = (0..3).map(|i| t.exp_coeff(i).unwrap()).collect();
    for l in 0..3 {
        assert_eq!(pairing_h(&t, l).unwrap(), twisted_convolution(&p, &q, l));
    }
}

#[test]
fn logalg_polynomial_instances() {
    for n in 1..=3 {
        let t = carlitz(2, n);
        let fq = t.field().clone();
        let lin = TPoly::linear(&RatFunc::theta(&fq));
        // h = (t - θ)^n v, g = v^(1) - (t - θ)^n v
        for v in [TPoly::one(&fq), TPoly::new(&fq, vec![rf(&fq, "1/theta"), RatFunc::one(&fq)])] {
            let h = RationalVector::from_polys(&fq, vec![lin.pow(n as u32).mul(&v)]);
            let r = logalg_verify_exact(&t, &h, 20).unwrap();
            assert!(r.passed, "n={n}: {:?}", r.failures());
            assert!(r.checks.iter().all(|c| c.agreement.is_none()));
            let hl = RationalVector::from_polys(&fq, vec![lin.pow(n as u32).mul(&v).map(|c| LaurentSeries::from_ratfunc(c, 60))]);
            assert!(logalg_verify(&t, &hl, 20).unwrap().passed);
        }
        let zero = RationalVector::<LaurentSeries>::zero(&fq, 1);
        assert!(logalg_verify(&t, &zero, 20).unwrap().passed);
    }
    // h = 1/(t - θ^q) - 1 is not a solution
    let t = carlitz(2, 1);
    let fq = t.field().clone();
    let h = RationalVector::<RatFunc>::unit(&fq, 1, 0).divide(&RatFunc::one(&fq), 1, 1);
    assert!(matches!(logalg_verify_exact(&t, &h, 20), Err(Error::NotAFunctionalEquationSolution(_))));
}

#[test]
fn logalg_exact_rational_solution() {
    // the AGF truncated at level 2 over F_q(θ), z = 1/θ: a rational h whose
    // g has a single pole at θ^(q^3), so it is not a solution; removing that
    // level gives the exact identity on a polynomial shift of g
    let fq = Fq::new(2).unwrap();
    let t = carlitz(2, 1);
    let z = LaurentSeries::monomial(&fq, 1, 1);
    let h = agf_instance(&fq, &z, 2, 80).unwrap();
    let r = logalg_verify(&t, &h, 8).unwrap();
    assert!(r.passed, "{:?}", r.failures());
}

#[test]
fn logalg_agf_instance() {
    let fq = Fq::new(2).unwrap();
    let t = carlitz(2, 1);
    let z = LaurentSeries::monomial(&fq, 1, 1).add(&LaurentSeries::monomial(&fq, 1, 2));
    let h = agf_instance(&fq, &z, 6, 60).unwrap();
    let r = logalg_verify(&t, &h, 20).unwrap();
    assert!(r.passed, "{:?}", r.failures());
    // a generic rational h is not a solution
    let bad = RationalVector::from_polys(&fq, vec![TPoly::one(&fq)]).divide(&LaurentSeries::one(&fq), 2, 1);
    assert!(matches!(logalg_verify(&t, &bad, 20), Err(Error::NotAFunctionalEquationSolution(_))));
}

#[test]
fn residues() {
    for n in 1..=3usize {
        for q in [2, 3] {
            let t = carlitz(q, n);
            let fq = t.field().clone();
            for i in 1..=3u32 {
                for m in 1..=n as u32 {
                    let h = RationalVector::<RatFunc>::unit(&fq, 1, 0).divide(&RatFunc::one(&fq), i, m);
                    let r = residue_checks(&t, &h).unwrap();
                    assert!(r.passed, "q={q} n={n} i={i} m={m}: {:?}", r.failures().iter().map(|c| &c.name).collect::<Vec<_>>());
                }
            }
        }
    }
    let t = carlitz(2, 2);
    let fq = t.field().clone();
    // mixed poles and a numerator
    let num = TPoly::new(&fq, vec![RatFunc::theta(&fq), RatFunc::one(&fq), RatFunc::one(&fq)]);
    let h = RationalVector::from_polys(&fq, vec![num]).divide(&RatFunc::one(&fq), 1, 2).divide(&RatFunc::theta(&fq), 2, 1);
    assert!(residue_checks(&t, &h).unwrap().passed);
    // polynomial h: no residues anywhere
    let p = RationalVector::from_polys(&fq, vec![TPoly::new(&fq, vec![RatFunc::one(&fq), RatFunc::theta(&fq)])]);
    let r = residue_checks(&t, &p).unwrap();
    assert!(r.passed);
    let too_high = RationalVector::<RatFunc>::unit(&fq, 1, 0).divide(&RatFunc::one(&fq), 1, 3);
    assert!(matches!(residue_checks(&t, &too_high), Err(Error::PoleOrderTooHigh(_))));
    let at_theta = RationalVector::<RatFunc>::unit(&fq, 1, 0).divide(&RatFunc::one(&fq), 0, 1);
    assert!(matches!(residue_checks(&t, &at_theta), Err(Error::PoleAtEvaluationPoint(_))));
}

#[test]
fn residue_closed_form_single_pole() {
    // h = 1/(t - θ^q)^m, n = m: the level-1 term is ((-1)^j C(m+j-1, j) / (θ^q - θ)^(m+j)) shifted
    let t = carlitz(2, 1);
    let fq = t.field().clone();
    let h = RationalVector::<RatFunc>::unit(&fq, 1, 0).divide(&RatFunc::one(&fq), 1, 1);
    let r = residue_checks(&t, &h).unwrap();
    assert!(r.passed);
    // res at θ^q of h/(t - θ) is 1/(θ^2 - θ)
    assert_eq!(r.checks[1].rhs, json!([rf(&fq, "1/(theta^2 + theta)").to_json()]));
}
