//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("invalid labels: {0}")]
    InvalidLabels(String),

    #[error("Fock basis too large: {size} states exceeds the cap of {cap}")]
    BasisTooLarge { size: u64, cap: u64 },

    #[error("matrix is not symmetric: max asymmetry {0:.3e}")]
    NotSymmetric(f64),

    #[error("eigensolver failed to converge at index {index} after {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },

    #[error("incompatible Hamiltonian form: {0}")]
    IncompatibleForm(String),

    #[error("missing label: {0}")]
    MissingLabel(String),
}

pub type Result<T> = std::result::Result<T, Error>;
