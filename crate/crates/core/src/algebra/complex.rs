use num_bigint::BigInt;
use num_traits::One;

use super::{AlgebraError, CoefficientMode, Entry, GradedModule, IntegerMatrix};

/// Homology of the chain complex whose boundary maps are `boundaries[i] = ∂_{i+1}: C_{i+1} → C_i`
/// (matrices act on column vectors, so `rows = dim C_i`, `cols = dim C_{i+1}`).
pub fn homology_of_complex(
    boundaries: &[IntegerMatrix],
    mode: CoefficientMode,
) -> Result<GradedModule, AlgebraError> {
    if boundaries.is_empty() {
        return Ok(GradedModule::zero(mode));
    }
    for (i, pair) in boundaries.windows(2).enumerate() {
        let (lower, upper) = (&pair[0], &pair[1]);
        if lower.cols() != upper.rows() {
            return Err(AlgebraError::DimensionMismatch {
                context: format!(
                    "∂_{} has {} columns but ∂_{} has {} rows",
                    i + 1,
                    lower.cols(),
                    i + 2,
                    upper.rows()
                ),
            });
        }
        if !lower.mul(upper)?.is_zero() {
            return Err(AlgebraError::CompositionNonzero { degree: i as i64 + 2 });
        }
    }

    let dims: Vec<usize> =
        std::iter::once(boundaries[0].rows()).chain(boundaries.iter().map(IntegerMatrix::cols)).collect();
    let ranks: Vec<usize> = boundaries.iter().map(IntegerMatrix::rank).collect();

    let mut out = GradedModule::zero(mode);
    for (deg, &dim) in dims.iter().enumerate() {
        let outgoing = if deg == 0 { 0 } else { ranks[deg - 1] };
        let incoming = ranks.get(deg).copied().unwrap_or(0);
        let mut entry = Entry::free((dim - outgoing - incoming) as u64);
        if mode == CoefficientMode::Integral {
            if let Some(b) = boundaries.get(deg) {
                let inv: Vec<BigInt> = b.smith_normal_form().into_iter().filter(|d| !d.is_one()).collect();
                entry.add_cyclic(&inv)?;
            }
        }
        out.set_entry(deg as i64, entry);
    }
    Ok(out)
}
