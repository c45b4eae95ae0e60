//! Point counts predicted from exterior-algebra cohomology.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use conical_core::algebra::CoefficientMode;
use conical_core::report::{compute, factor_odd_generators};
use conical_core::strata::builtin_spec;

use crate::census::CensusTask;
use crate::CensusError;

/// q^D · ∏(1 − q^{−a_j}).
pub fn predicted_count(exponents: &[u32], dim: u32, q: u64) -> Result<BigInt, CensusError> {
    if let Some(a) = exponents.iter().find(|&&a| a > dim) {
        return Err(CensusError::InvalidTask(format!("exponent {a} exceeds D = {dim}")));
    }
    let q = BigRational::from_integer(BigInt::from(q));
    let mut acc = num_traits::pow(q.clone(), dim as usize);
    for &a in exponents {
        acc *= BigRational::one() - num_traits::pow(q.clone(), a as usize).recip();
    }
    if !acc.is_integer() {
        return Err(CensusError::NonIntegerResult(acc.to_string()));
    }
    Ok(acc.to_integer())
}

/// Case whose complement is counted by the task.
pub fn case_for(task: &CensusTask) -> Option<&'static str> {
    if task.vf {
        return Some("vf-222");
    }
    match (task.d, task.n) {
        (2, 2) => Some("quadric-p2"),
        (3, 2) => Some("cubic-p2"),
        (4, 2) => Some("quartic-p2"),
        (3, 3) => Some("cubic-p3"),
        _ => None,
    }
}

/// Exponents a_j with complement polynomial ∏(1 + t^{2a_j − 1}), computed by the
/// spectral-sequence pipeline; None when a generator has even degree.
pub fn pipeline_exponents(case_id: &str) -> Result<Option<(Vec<u32>, u32)>, CensusError> {
    let spec = builtin_spec(case_id).map_err(|e| CensusError::Pipeline(e.to_string()))?;
    let report = compute(&spec, CoefficientMode::Rational).map_err(|e| CensusError::Pipeline(e.to_string()))?;
    let degrees = factor_odd_generators(&report.complement_poincare).map_err(|e| CensusError::Pipeline(e.to_string()))?;
    if degrees.iter().any(|g| g % 2 == 0) {
        return Ok(None);
    }
    Ok(Some((degrees.iter().map(|&g| (g as u32 + 1) / 2).collect(), spec.dim)))
}

pub fn pipeline_prediction(task: &CensusTask) -> Result<Option<BigInt>, CensusError> {
    let Some(case) = case_for(task) else { return Ok(None) };
    match pipeline_exponents(case)? {
        Some((a, dim)) => predicted_count(&a, dim, task.q as u64).map(Some),
        None => Ok(None),
    }
}

/// Counts of smooth plane quartics at two field sizes, with the exact fit
/// count = q^15 (1 − q^{−1})(1 − q^{−2})(1 − q^{−3}) (α + β q^{−6}).
#[derive(Clone, Debug)]
pub struct QuarticFit {
    pub samples: Vec<(u32, u32, u64)>,
    pub alpha: BigRational,
    pub beta: BigRational,
}

/// Solves for α, β from two samples (q, k_max, count).
pub fn fit_quartic(samples: &[(u32, u32, u64)]) -> Option<QuarticFit> {
    let [(q1, _, c1), (q2, _, c2)] = samples else { return None };
    let row = |q: u32, c: u64| {
        let q = BigRational::from_integer(BigInt::from(q));
        let mut base = num_traits::pow(q.clone(), 15);
        for a in 1..=3 {
            base *= BigRational::one() - num_traits::pow(q.clone(), a).recip();
        }
        let w = num_traits::pow(q, 6).recip();
        (base.clone(), base * w, BigRational::from_integer(BigInt::from(c)))
    };
    let (a1, b1, r1) = row(*q1, *c1);
    let (a2, b2, r2) = row(*q2, *c2);
    let det = &a1 * &b2 - &a2 * &b1;
    if det.is_zero() {
        return None;
    }
    let alpha = (&r1 * &b2 - &r2 * &b1) / &det;
    let beta = (&a1 * &r2 - &a2 * &r1) / &det;
    Some(QuarticFit { samples: samples.to_vec(), alpha, beta })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_examples() {
        assert_eq!(predicted_count(&[1, 2, 3], 10, 2).unwrap(), BigInt::from(336));
        assert_eq!(predicted_count(&[1, 3], 6, 2).unwrap(), BigInt::from(28));
        assert_eq!(predicted_count(&[1, 2, 3, 4], 20, 2).unwrap(), BigInt::from(322560));
        assert_eq!(predicted_count(&[], 3, 5).unwrap(), BigInt::from(125));
        assert!(matches!(predicted_count(&[4], 3, 2), Err(CensusError::InvalidTask(_))));
    }

    #[test]
    fn pipeline_exponents_per_case() {
        assert_eq!(pipeline_exponents("quadric-p2").unwrap(), Some((vec![1, 3], 6)));
        assert_eq!(pipeline_exponents("cubic-p2").unwrap(), Some((vec![1, 2, 3], 10)));
        assert_eq!(pipeline_exponents("cubic-p3").unwrap(), Some((vec![1, 2, 3, 4], 20)));
        assert_eq!(pipeline_exponents("vf-222").unwrap(), Some((vec![1, 2, 3], 18)));
        assert_eq!(pipeline_exponents("quartic-p2").unwrap(), None);
    }

    #[test]
    fn fit_recovers_its_model() {
        let model = |q: u64| {
            let base = q.pow(15) * (q - 1) * (q * q - 1) * (q.pow(3) - 1) / q.pow(6);
            base + base / q.pow(6) * 2
        };
        let fit = fit_quartic(&[(2, 9, model(2)), (3, 6, model(3))]).unwrap();
        assert_eq!(fit.alpha, BigRational::one());
        assert_eq!(fit.beta, BigRational::from_integer(BigInt::from(2)));
        assert!(fit_quartic(&[(2, 9, 1)]).is_none());
    }
}
