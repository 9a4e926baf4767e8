pub mod catalog;
pub mod cli;
pub mod derout;
pub mod divpow;
pub mod error;
pub mod hamiltonian;
pub mod liealg;
pub mod linalg;
pub mod reference;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
