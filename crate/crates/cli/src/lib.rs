//! Front end for the stratification pipeline and the finite-field census.

pub mod acceptance;
pub mod commands;
