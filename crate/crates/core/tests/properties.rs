//! Seeded property tests for the scalar and Tate-algebra layers.

mod common;

use motivic::sample::Sampler;
use motivic::scalar::Fq;
use proptest::prelude::*;
use proptest::test_runner::{Config, FileFailurePersistence, RngAlgorithm, RngSeed};

fn config(seed: u64) -> Config {
    Config {
        cases: 96,
        rng_algorithm: RngAlgorithm::ChaCha,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: Some(Box::new(FileFailurePersistence::Off)),
        ..Config::default()
    }
}

fn sampler(field: usize, seed: u64) -> Sampler {
    Sampler::new(&Fq::new(common::FIELDS[field]).unwrap(), seed)
}

#[test]
fn field_axioms_exhaustive_small_fields() {
    for q in [2, 3, 4, 5, 7, 8, 9] {
        common::field_axioms(q).unwrap();
    }
}

#[test]
fn twist_commutes_with_hyperderivative_evaluation() {
    for q in [2, 3, 4] {
        common::twist_commutes_with_evaluation(&Fq::new(q).unwrap()).unwrap();
    }
}

proptest! {
    #![proptest_config(config(0x5eed_0001))]

    #[test]
    fn ultrametric(field in 0..6usize, seed in any::<u64>()) {
        let mut s = sampler(field, seed);
        let r = common::ultrametric(&mut s);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn twist_is_a_ring_homomorphism(field in 0..6usize, seed in any::<u64>(), i in 0..=3u32) {
        let r = common::twist_homomorphism(&mut sampler(field, seed), i);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn ratfunc_embedding(field in 0..6usize, seed in any::<u64>(), prec in 5..40i64) {
        let r = common::embedding(&mut sampler(field, seed), prec);
        prop_assert!(r.is_ok(), "{:?}", r);
    }
}

proptest! {
    #![proptest_config(config(0x5eed_0002))]

    #[test]
    fn gauss_norm_submultiplicative(field in 0..6usize, seed in any::<u64>()) {
        let r = common::gauss_submultiplicative(&mut sampler(field, seed));
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn hyperderivative_composition(field in 0..6usize, seed in any::<u64>()) {
        let mut s = sampler(field, seed);
        let f = common::random_tpoly(&mut s);
        let r = common::hyper_composition(&f);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn leibniz_rule(field in 0..6usize, seed in any::<u64>()) {
        let mut s = sampler(field, seed);
        let f = common::random_tpoly(&mut s);
        let g = common::random_tpoly(&mut s);
        let r = common::product_rule(&f, &g);
        prop_assert!(r.is_ok(), "{:?}", r);
    }
}
