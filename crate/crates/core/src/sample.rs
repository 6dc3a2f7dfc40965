//! Seeded random inputs for property checks and the CLI `--seed` flag.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::{Fq, LaurentSeries, RatFunc, ThetaPoly};
use crate::tate::TPoly;

/// Deterministic generator of field-valued test data.
pub struct Sampler {
    fq: Fq,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(fq: &Fq, seed: u64) -> Self {
        Sampler { fq: fq.clone(), rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn field(&self) -> &Fq {
        &self.fq
    }

    pub fn elem(&mut self) -> u8 {
        self.rng.gen_range(0..self.fq.q()) as u8
    }

    pub fn nonzero_elem(&mut self) -> u8 {
        self.rng.gen_range(1..self.fq.q()) as u8
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// Polynomial in θ of degree at most `deg`.
    pub fn theta_poly(&mut self, deg: usize) -> ThetaPoly {
        let c = (0..=deg).map(|_| self.elem()).collect();
        ThetaPoly::new(&self.fq, c)
    }

    pub fn nonzero_theta_poly(&mut self, deg: usize) -> ThetaPoly {
        loop {
            let p = self.theta_poly(deg);
            if !p.is_zero() {
                return p;
            }
        }
    }

    pub fn ratfunc(&mut self, deg: usize) -> RatFunc {
        let num = self.theta_poly(deg);
        let den = self.nonzero_theta_poly(deg);
        RatFunc::new(num, den).expect("nonzero denominator")
    }

    /// Polynomial in t with θ-polynomial coefficients.
    pub fn tpoly(&mut self, t_deg: usize, theta_deg: usize) -> TPoly<ThetaPoly> {
        let c = (0..=t_deg).map(|_| self.theta_poly(theta_deg)).collect();
        TPoly::new(&self.fq, c)
    }

    /// Series in u = 1/θ with valuation at least `min_val`, `len` random
    /// coefficients and absolute precision `prec`.
    pub fn small_series(&mut self, min_val: i64, len: usize, prec: i64) -> LaurentSeries {
        let c = (0..len).map(|_| self.elem()).collect();
        LaurentSeries::from_coeffs(&self.fq, min_val, c, Some(prec))
    }

    /// Random point with every coordinate of norm below 1.
    pub fn small_point(&mut self, dim: usize, prec: i64) -> Vec<LaurentSeries> {
        (0..dim).map(|_| self.small_series(1, 8, prec)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let fq = Fq::new(4).unwrap();
        let mut a = Sampler::new(&fq, 7);
        let mut b = Sampler::new(&fq, 7);
        for _ in 0..20 {
            assert_eq!(a.ratfunc(3), b.ratfunc(3));
        }
        let z = a.small_point(3, 30);
        assert!(z.iter().all(|x| x.is_zero() || x.valuation().unwrap() >= 1));
        assert_eq!(z, b.small_point(3, 30));
    }
}
