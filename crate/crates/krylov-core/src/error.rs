//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failure modes surfaced by the library.
///
/// The variants map onto distinct caller responsibilities: `InvalidInput`
/// means the arguments themselves are malformed (dimension mismatches,
/// unnormalized seeds, non-Hermitian generators) and the call can be fixed at
/// the call site; `Domain` means a parameter lies outside the mathematical
/// domain of the requested quantity; `Truncation` means a finite cutoff was
/// too small for the requested accuracy and says how to enlarge it;
/// `Numerical` means an iterative scheme failed to converge; `NotCoherent`
/// is specific to angle tomography, which is only defined on coherent states.
#[derive(Debug, Error)]
pub enum KrylovError {
    /// Malformed argument (shape, normalization, Hermiticity, grid range).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Parameter outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A finite cutoff (basis size, series length) was insufficient.
    #[error("truncation error: {0}")]
    Truncation(String),

    /// An iterative numerical scheme failed to converge.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// State tomography was asked to invert a non-coherent state.
    #[error("not a coherent state: {0}")]
    NotCoherent(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, KrylovError>;
