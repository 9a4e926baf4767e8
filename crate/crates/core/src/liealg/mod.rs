//! Lie algebras over GF(p) given by structure constants.

pub mod algebra;
pub mod series;
pub mod text;

pub use algebra::{JacobiViolation, LieAlgebraFp, LieVector, StructureBuilder};
pub use series::{
    bracket_span, center, center_and_lcs, derived_series, ideal_closure, lower_central_series,
    simplicity_probe, Series, Simplicity, DEFAULT_PROBE_SEED, DEFAULT_PROBE_TRIALS,
};
