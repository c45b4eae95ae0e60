//! Alexander duality, Poincaré polynomials of the complement, and case reports.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, CoefficientMode, Entry, GradedModule, PoincarePolynomial};
use crate::spectral::{self, ConstraintSet, SSResult, SpectralError};
use crate::strata::{builtin_spec, E1Page, StratificationSpec};

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("H(Sigma) has a class in degree {degree}, outside [0, {top}]")]
    OutOfRange { degree: i64, top: i64 },
    #[error("{0} is not a product of factors (1 + t^a)")]
    NoFactorization(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

fn check_range(m: &GradedModule, dim: u32) -> Result<i64, ReportError> {
    let top = 2 * dim as i64 - 1;
    for (d, _) in m.entries() {
        if d < 0 || d > top {
            return Err(ReportError::OutOfRange { degree: d, top });
        }
    }
    Ok(top)
}

/// H̃^i(complement) = H̄_{2D−i−1}(Σ), without the unit.
pub fn reduced_dual(m: &GradedModule, dim: u32) -> Result<GradedModule, ReportError> {
    let top = check_range(m, dim)?;
    Ok(m.reflect(top))
}

/// Cohomology of the complement of Σ in ℂ^D, including H⁰.
pub fn alexander_dual(sigma: &GradedModule, dim: u32) -> Result<GradedModule, ReportError> {
    let mut c = reduced_dual(sigma, dim)?;
    c.add_entry(0, &Entry::free(1));
    Ok(c)
}

/// Quotient by the (1+t) of the free ℂ* factor.
pub fn project_to_n(complement: &PoincarePolynomial) -> Result<PoincarePolynomial, ReportError> {
    Ok(complement.divide_by_one_plus_t()?)
}

/// Exact division by 1 + t^a with non-negative quotient.
fn divide_by(p: &PoincarePolynomial, a: usize) -> Option<PoincarePolynomial> {
    let c = p.coefficients();
    if c.len() <= a {
        return None;
    }
    let mut q: Vec<i128> = vec![0; c.len() - a];
    for i in 0..c.len() {
        let lower = if i >= a { q.get(i - a).copied().unwrap_or(0) } else { 0 };
        let qi = c[i] as i128 - lower;
        if i < q.len() {
            if qi < 0 {
                return None;
            }
            q[i] = qi;
        } else if qi != 0 {
            return None;
        }
    }
    Some(PoincarePolynomial::new(q.into_iter().map(|x| x as u64).collect()))
}

/// Exponents a_j with p = ∏(1 + t^{a_j}), peeling off the lowest positive degree.
pub fn factor_odd_generators(p: &PoincarePolynomial) -> Result<Vec<usize>, ReportError> {
    if p.coefficient(0) != 1 {
        return Err(ReportError::NoFactorization(p.to_string()));
    }
    let mut rest = p.clone();
    let mut out = Vec::new();
    while rest != PoincarePolynomial::one() {
        let a = (1..).find(|&i| rest.coefficient(i) != 0).expect("nonconstant");
        rest = divide_by(&rest, a).ok_or_else(|| ReportError::NoFactorization(p.to_string()))?;
        out.push(a);
    }
    Ok(out)
}

/// Everything computed for one case.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseReport {
    pub version: u32,
    pub case_id: String,
    #[serde(rename = "D")]
    pub dim: u32,
    pub mode: CoefficientMode,
    pub last_column: i64,
    pub e1: E1Page,
    pub e_infinity: E1Page,
    pub differentials: Vec<spectral::DifferentialRecord>,
    pub sigma_homology: GradedModule,
    pub associated_graded: bool,
    pub complement_cohomology: GradedModule,
    pub complement_poincare: PoincarePolynomial,
    pub n_poincare: Option<PoincarePolynomial>,
    pub factored_form: Option<Vec<usize>>,
}

impl CaseReport {
    pub fn from_result(spec: &StratificationSpec, result: SSResult) -> Result<Self, ReportError> {
        let sigma = spectral::total_homology(&result);
        let complement = alexander_dual(&sigma, spec.dim)?;
        let poincare = PoincarePolynomial::from_module(&complement)?;
        let n_poincare = if spec.projectivize { Some(project_to_n(&poincare)?) } else { None };
        Ok(Self {
            version: REPORT_VERSION,
            case_id: spec.case_id.clone(),
            dim: spec.dim,
            mode: result.mode,
            last_column: spec.strata.len() as i64,
            factored_form: factor_odd_generators(&poincare).ok(),
            e1: result.e1,
            e_infinity: result.e_infinity,
            differentials: result.differentials,
            sigma_homology: sigma,
            associated_graded: result.associated_graded,
            complement_cohomology: complement,
            complement_poincare: poincare,
            n_poincare,
        })
    }

    /// Human-readable report with grid tables.
    pub fn table(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("case {}  (D = {}, {:?} coefficients)\n\n", self.case_id, self.dim, self.mode));
        s.push_str("E1:\n");
        s.push_str(&self.e1.table(self.last_column));
        s.push_str("\nE-infinity:\n");
        s.push_str(&self.e_infinity.table(self.last_column));
        if !self.differentials.is_empty() {
            s.push_str("\nnonzero differentials:\n");
            for d in &self.differentials {
                s.push_str(&format!("  d{}: ({};{}) -> ({};{}) rank {}\n", d.r, d.from.0, d.from.1, d.to.0, d.to.1, d.rank));
            }
        }
        let graded = if self.associated_graded { " (associated graded)" } else { "" };
        s.push_str(&format!("\nH(Sigma){graded}: {}\n", self.sigma_homology));
        s.push_str(&format!("H*(complement): {}\n", self.complement_cohomology));
        s.push_str(&format!("complement polynomial: {}\n", self.complement_poincare));
        if let Some(n) = &self.n_poincare {
            s.push_str(&format!("projectivized polynomial: {n}\n"));
        }
        if let Some(f) = &self.factored_form {
            let factors: Vec<String> = f.iter().map(|a| if *a == 1 { "(1+t)".into() } else { format!("(1+t^{a})") }).collect();
            s.push_str(&format!("factored: {}\n", if factors.is_empty() { "1".into() } else { factors.join("") }));
        }
        s
    }
}

/// Runs the pipeline on a spec with its default constraints.
pub fn compute(spec: &StratificationSpec, mode: CoefficientMode) -> Result<CaseReport, ReportError> {
    let result = spectral::run(spec, mode, &ConstraintSet::from_spec(spec))?;
    CaseReport::from_result(spec, result)
}

pub fn complement_polynomial(case_id: &str) -> Result<PoincarePolynomial, ReportError> {
    let spec = builtin_spec(case_id).map_err(SpectralError::from)?;
    Ok(compute(&spec, CoefficientMode::Rational)?.complement_poincare)
}

/// Whether two cases have the same complement Poincaré polynomial.
pub fn same_complement(a: &str, b: &str) -> Result<bool, ReportError> {
    Ok(complement_polynomial(a)? == complement_polynomial(b)?)
}

/// Gradient map from plane cubics to quadratic vector fields is a rational
/// cohomology isomorphism on the complements.
pub fn smale_hirsch_check() -> Result<bool, ReportError> {
    same_complement("cubic-p2", "vf-222")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[u64]) -> PoincarePolynomial {
        PoincarePolynomial::new(c.to_vec())
    }

    #[test]
    fn duality_examples() {
        let c = alexander_dual(&GradedModule::zero(CoefficientMode::Rational), 6).unwrap();
        assert_eq!(c, GradedModule::from_ranks([(0, 1)]));
        let sigma = GradedModule::from_ranks([(10, 1), (11, 1), (13, 1), (14, 1), (15, 1), (16, 1), (18, 1)]);
        let c = alexander_dual(&sigma, 10).unwrap();
        assert_eq!(PoincarePolynomial::from_module(&c).unwrap(), poly(&[1, 1, 0, 1, 1, 1, 1, 0, 1, 1]));
        assert!(matches!(
            alexander_dual(&GradedModule::from_ranks([(12, 1)]), 6),
            Err(ReportError::OutOfRange { .. })
        ));
    }

    #[test]
    fn factorizations() {
        let p = PoincarePolynomial::exterior(&[1, 3, 5]);
        assert_eq!(factor_odd_generators(&p).unwrap(), vec![1, 3, 5]);
        assert_eq!(factor_odd_generators(&PoincarePolynomial::one()).unwrap(), Vec::<usize>::new());
        assert_eq!(factor_odd_generators(&PoincarePolynomial::exterior(&[1, 3, 5, 6])).unwrap(), vec![1, 3, 5, 6]);
        assert!(factor_odd_generators(&poly(&[1, 0, 1, 0, 1])).is_err());
        assert!(factor_odd_generators(&poly(&[2, 1])).is_err());
    }

    #[test]
    fn projection() {
        let p = PoincarePolynomial::exterior(&[1, 3, 5]);
        assert_eq!(project_to_n(&p).unwrap(), PoincarePolynomial::exterior(&[3, 5]));
        assert!(project_to_n(&poly(&[1, 0, 1])).is_err());
    }
}
