//! Derivations, inner derivations and outer derivation algebras.

pub mod cache;
pub mod engine;

pub use engine::{
    derivation_algebra, derivation_algebra_with, is_derivation, DerivationAlgebra, LeibnizCheck,
    OutAlgebra, SolveOptions, SolveStats, COMPLEMENT_RULE,
};
pub use cache::{fingerprint, DerCache, StoreOutcome};
