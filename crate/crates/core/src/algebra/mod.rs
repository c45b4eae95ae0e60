//! Exact integer/rational linear algebra: Smith normal form, chain-complex
//! homology, graded modules and Poincaré polynomials.

mod complex;
mod graded;
mod matrix;
mod poly;

pub use complex::homology_of_complex;
pub use graded::{CoefficientMode, Entry, GradedModule, Torsion};
pub use matrix::IntegerMatrix;
pub use poly::PoincarePolynomial;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("boundary maps do not compose to zero (∂∘∂ ≠ 0 into degree {degree})")]
    CompositionNonzero { degree: i64 },
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("negative degree {0} cannot appear in a Poincaré polynomial")]
    NegativeDegree(i64),
    #[error("{0} is not (1+t) times a polynomial with non-negative coefficients")]
    NotDivisible(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("integer {0} does not fit in 64 bits")]
    Overflow(String),
}

/// Smith invariants of `m` (free function form).
pub fn smith_normal_form(m: &IntegerMatrix) -> Vec<num_bigint::BigInt> {
    m.smith_normal_form()
}

/// Poincaré polynomial of the free part of `g`.
pub fn poincare_polynomial(g: &GradedModule) -> Result<PoincarePolynomial, AlgebraError> {
    PoincarePolynomial::from_module(g)
}
