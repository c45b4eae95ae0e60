//! Cohomology of spaces of nonsingular hypersurfaces via conical resolutions of
//! discriminants and their spectral sequences.

pub mod algebra;
pub mod links;
pub mod spaces;
pub mod report;
pub mod spectral;
pub mod strata;
