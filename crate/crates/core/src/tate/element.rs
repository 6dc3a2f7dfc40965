//! Truncated elements of the Tate algebra T_θ with a Gauss-norm tail bound.

use super::poly::TPoly;
use crate::error::{Error, Result};
use crate::scalar::{Fq, LaurentSeries, Scalar};

/// Log-norm standing in for "smaller than anything we track".
pub const NEG_INF: i64 = i64::MIN / 4;

/// What is known about the coefficients beyond the stored ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tail {
    /// The element is the stored polynomial.
    Exact,
    /// Coefficients of degree > `degree` are unknown, with
    /// ‖Σ_{j>degree} b_j t^j‖_θ <= q^log_bound.
    Truncated { degree: usize, log_bound: i64 },
}

/// Element Σ b_i t^i of T_θ = {Σ b_i t^i : |b_i| q^i -> 0}.
#[derive(Clone, Debug, PartialEq)]
pub struct TateElement<S: Scalar> {
    pub poly: TPoly<S>,
    pub tail: Tail,
}

/// log_q of the Gauss norm max_i q^i |b_i|; `None` for zero.
pub fn gauss_log_norm<S: Scalar>(p: &TPoly<S>) -> Option<i64> {
    p.coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, b)| b.valuation().map(|v| i as i64 - v))
        .max()
}

fn lmax(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl<S: Scalar> TateElement<S> {
    pub fn exact(poly: TPoly<S>) -> Self {
        TateElement { poly, tail: Tail::Exact }
    }
    /// Truncate an exact or truncated element at degree `d`, folding the dropped
    /// coefficients into the tail bound.
    pub fn truncated(poly: TPoly<S>, d: usize, log_bound: i64) -> Self {
        let dropped: Vec<S> = poly.coeffs().iter().skip(d + 1).cloned().collect();
        let mut lb = log_bound;
        for (k, b) in dropped.iter().enumerate() {
            if let Some(v) = b.valuation() {
                lb = lb.max((d + 1 + k) as i64 - v);
            }
        }
        TateElement { poly: poly.truncate(d), tail: Tail::Truncated { degree: d, log_bound: lb } }
    }
    pub fn field(&self) -> &Fq {
        self.poly.field()
    }
    pub fn is_exact(&self) -> bool {
        self.tail == Tail::Exact
    }
    /// Degree cap (None when exact).
    pub fn cap(&self) -> Option<usize> {
        match self.tail {
            Tail::Exact => None,
            Tail::Truncated { degree, .. } => Some(degree),
        }
    }
    pub fn tail_log_bound(&self) -> Option<i64> {
        match self.tail {
            Tail::Exact => None,
            Tail::Truncated { log_bound, .. } => Some(log_bound),
        }
    }
    /// log_q of the Gauss norm of the stored part.
    pub fn gauss_log_norm(&self) -> Option<i64> {
        gauss_log_norm(&self.poly)
    }
    /// Upper bound for the log Gauss norm of the whole element.
    pub fn norm_bound(&self) -> Option<i64> {
        lmax(self.gauss_log_norm(), self.tail_log_bound())
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.poly.add(&o.poly);
        match (self.tail, o.tail) {
            (Tail::Exact, Tail::Exact) => Self::exact(p),
            _ => {
                let d = self.cap().unwrap_or(usize::MAX).min(o.cap().unwrap_or(usize::MAX));
                let lb = lmax(self.tail_log_bound(), o.tail_log_bound()).unwrap_or(NEG_INF);
                Self::truncated(p, d, lb)
            }
        }
    }
    pub fn neg(&self) -> Self {
        TateElement { poly: self.poly.neg(), tail: self.tail }
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn scale(&self, s: &S) -> Self {
        let tail = match (self.tail, s.valuation()) {
            (Tail::Truncated { degree, log_bound }, Some(v)) => Tail::Truncated { degree, log_bound: log_bound - v },
            (Tail::Truncated { degree, .. }, None) => Tail::Truncated { degree, log_bound: NEG_INF },
            (t, _) => t,
        };
        TateElement { poly: self.poly.scale(s), tail }
    }

    /// Product; tails follow ‖ab - (ab)_T‖ <= max(‖a‖ tail_b, ‖b‖ tail_a, dropped part).
    pub fn mul(&self, o: &Self) -> Self {
        let p = self.poly.mul(&o.poly);
        match (self.tail, o.tail) {
            (Tail::Exact, Tail::Exact) => Self::exact(p),
            _ => {
                let d = self.cap().unwrap_or(usize::MAX).min(o.cap().unwrap_or(usize::MAX));
                let na = self.norm_bound();
                let nb = o.norm_bound();
                let mut lb: Option<i64> = None;
                if let (Some(n), Some(t)) = (na, o.tail_log_bound()) {
                    lb = lmax(lb, Some(n + t));
                }
                if let (Some(n), Some(t)) = (nb, self.tail_log_bound()) {
                    lb = lmax(lb, Some(n + t));
                }
                Self::truncated(p, d, lb.unwrap_or(NEG_INF).max(NEG_INF))
            }
        }
    }

    /// Frobenius twist of the coefficients.
    pub fn twist(&self, i: u32) -> Self {
        let tail = match self.tail {
            Tail::Exact => Tail::Exact,
            Tail::Truncated { degree, log_bound } => {
                // q^j |b_j|^(q^i) <= q^(q^i L - j (q^i - 1)), worst at j = degree + 1
                let s = (self.field().q() as i64).pow(i);
                let lb = log_bound.saturating_mul(s).saturating_sub((degree as i64 + 1) * (s - 1));
                Tail::Truncated { degree, log_bound: lb.max(NEG_INF) }
            }
        };
        TateElement { poly: self.poly.twist(i), tail }
    }

    /// Hyperderivative ∂_t^j. The tail bound is kept as is (binomials have norm <= 1).
    pub fn hyperderivative(&self, j: usize) -> Self {
        let poly = self.poly.hyperderivative(j);
        let tail = match self.tail {
            Tail::Exact => Tail::Exact,
            Tail::Truncated { degree, log_bound } => {
                Tail::Truncated { degree: degree.saturating_sub(j), log_bound }
            }
        };
        TateElement { poly, tail }
    }

    /// Evaluate at t = c. Returns the value and, for truncated elements, a
    /// bound q^e on the error. Requires |c| <= q unless the element is exact.
    pub fn eval_at(&self, c: &S) -> Result<(S, Option<i64>)> {
        let v = self.poly.eval(c);
        match self.tail {
            Tail::Exact => Ok((v, None)),
            Tail::Truncated { log_bound, .. } => {
                if c.valuation().is_some_and(|vc| vc < -1) {
                    return Err(Error::DivergentEvaluation);
                }
                Ok((v, Some(log_bound)))
            }
        }
    }

    /// Divide an exact element by (t - c); the remainder must vanish.
    pub fn div_linear_exact(&self, c: &S) -> Result<Self> {
        if !self.is_exact() {
            return Err(Error::Unsupported("division of a truncated element needs Laurent coefficients".into()));
        }
        let (qt, r) = self.poly.div_linear(c);
        if !r.is_zero() {
            return Err(Error::DecompositionFailure("nonzero remainder on division by t - c".into()));
        }
        Ok(Self::exact(qt))
    }
}

impl TateElement<LaurentSeries> {
    /// Evaluation with the tail bound folded into the returned precision.
    pub fn eval_laurent(&self, c: &LaurentSeries) -> Result<LaurentSeries> {
        let (v, err) = self.eval_at(c)?;
        Ok(match err {
            Some(e) => v.with_precision(-e),
            None => v,
        })
    }

    /// Divide by (t - c), |c| <= q, for an element vanishing at c (up to its
    /// tail). Top-down synthetic division; the truncation error reaches every
    /// quotient coefficient, so it is folded into the coefficient precisions.
    pub fn div_linear(&self, c: &LaurentSeries) -> Result<Self> {
        let (qt, r) = self.poly.div_linear(c);
        let log_bound = match self.tail {
            Tail::Exact => {
                if !r.is_zero() {
                    return Err(Error::DecompositionFailure("nonzero remainder on division by t - c".into()));
                }
                return Ok(Self::exact(qt));
            }
            Tail::Truncated { log_bound, .. } => log_bound,
        };
        if c.valuation().is_some_and(|vc| vc < -1) {
            return Err(Error::DivergentEvaluation);
        }
        if let Some(vr) = r.valuation() {
            if -vr > log_bound {
                return Err(Error::DecompositionFailure(format!(
                    "remainder of norm q^{} exceeds tail bound q^{log_bound}",
                    -vr
                )));
            }
        }
        // |error in coefficient j| <= q^(log_bound - 1 - j)
        let lb = log_bound - 1;
        let fq = self.field().clone();
        let coeffs: Vec<LaurentSeries> =
            qt.coeffs().iter().enumerate().map(|(j, b)| b.with_precision(j as i64 - lb)).collect();
        let degree = qt.degree().unwrap_or(0);
        Ok(TateElement { poly: TPoly::new(&fq, coeffs), tail: Tail::Truncated { degree, log_bound: lb } })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{LaurentSeries, ThetaPoly};

    #[test]
    fn geometric_series_in_t() {
        // 1/(1 - t/θ^2) = Σ u^(2j) t^j, Gauss norm terms q^(j - 2j)
        let fq = Fq::new(2).unwrap();
        let d = 10;
        let c: Vec<LaurentSeries> = (0..=d).map(|j| LaurentSeries::monomial(&fq, 1, 2 * j as i64)).collect();
        let f = TateElement::truncated(TPoly::new(&fq, c), d, -(d as i64 + 1));
        assert_eq!(f.gauss_log_norm(), Some(0));
        let one_minus: TateElement<LaurentSeries> = TateElement::exact(TPoly::new(
            &fq,
            vec![LaurentSeries::one(&fq), LaurentSeries::monomial(&fq, 1, 2)],
        ));
        let prod = f.mul(&one_minus);
        assert_eq!(prod.poly.coeff(0), LaurentSeries::one(&fq));
        for j in 1..=d {
            assert!(prod.poly.coeff(j).is_zero());
        }
        // evaluation at θ: value 1/(1 - 1/θ), error below q^-(d+1)
        let th = LaurentSeries::from_theta_poly(&ThetaPoly::theta(&fq));
        let v = f.eval_laurent(&th).unwrap();
        assert_eq!(v.precision(), Some(d as i64 + 1));
        assert!(f.eval_at(&th.mul(&th)).is_err());
    }

    #[test]
    fn twist_tail() {
        let fq = Fq::new(3).unwrap();
        let f: TateElement<LaurentSeries> = TateElement::truncated(TPoly::zero(&fq), 4, -5);
        assert_eq!(f.twist(1).tail_log_bound(), Some(-15 - 5 * 2));
    }
}
