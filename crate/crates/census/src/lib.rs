//! Counts of smooth hypersurfaces over small finite fields, compared against
//! predictions from the complement's cohomology.

pub mod census;
pub mod field;
pub mod forms;
pub mod linear;
pub mod predict;

use thiserror::Error;

pub use census::{census, census_enumerate, census_sieve, vf_census, CensusResult, CensusTask, Strategy};
pub use field::FieldTower;
pub use forms::is_singular;
pub use predict::predicted_count;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("q^D = {q}^{dim} exceeds the budget of {budget} coefficient vectors")]
    BudgetExceeded { q: u32, dim: usize, budget: u64 },
    #[error("unsupported base field size {0} (supported: 2, 3, 4, 5, 7, 8, 9)")]
    UnsupportedField(u32),
    #[error("GF({p}^{e}) is larger than the table limit of 65536 elements")]
    FieldTooLarge { p: u32, e: u32 },
    #[error("invalid task: {0}")]
    InvalidTask(String),
    #[error("predicted count {0} is not an integer")]
    NonIntegerResult(String),
    #[error("pipeline: {0}")]
    Pipeline(String),
}
