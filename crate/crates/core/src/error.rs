//! Error type shared by all library modules.

use thiserror::Error;

/// Failures raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The input matrix is not Hermitian within tolerance.
    #[error(
        "matrix is not Hermitian: max asymmetry {asymmetry:e} exceeds tolerance {tolerance:e}"
    )]
    NonHermitianInput { asymmetry: f64, tolerance: f64 },

    /// Matrix dimension outside the supported range.
    #[error("unsupported matrix dimension {0} (supported: 1..=8)")]
    InvalidDimension(usize),

    /// Operand shapes do not fit together.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A NaN or infinite value was supplied.
    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// Two coupled levels are too close for perturbation theory.
    #[error("degenerate denominator between levels {a} and {b}: gap {gap:e} eV")]
    DegenerateDenominator { a: usize, b: usize, gap: f64 },

    /// A basis ordering is not a permutation of the four labels.
    #[error("invalid basis ordering: {0}")]
    InvalidOrdering(String),

    /// Every generator coefficient is zero.
    #[error("hamiltonian has no nonzero generator coefficient")]
    ZeroHamiltonian,

    /// Rotation coupling is zero, so no finite gate time exists.
    #[error("zero coupling: gate time undefined")]
    ZeroCoupling,

    /// No population minimum was found on the supplied grid.
    #[error("no population minimum found: {0}")]
    NoExtremumFound(String),

    /// State vector has the wrong dimension or norm.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Time grid is empty, unsorted or non-finite.
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    /// Physical parameter out of range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Jacobi sweeps failed to converge.
    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),
}

/// Library result alias.
pub type Result<T> = std::result::Result<T, Error>;
