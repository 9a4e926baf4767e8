//! Exact linear algebra over GF(p).

pub mod echelon;
pub mod field;
pub mod matrix;
pub mod sparse;
pub mod subspace;

pub use echelon::{
    partition_from, solve_stream, BlockPartition, Echelon, PartitionBuilder, ResourceGuard, Scratch,
    StreamingNullspace,
};
pub use field::{lucas_binom, PrimeField, Residue};
pub use matrix::FpMatrix;
pub use sparse::{Entry, SparseVec};
pub use subspace::Subspace;
