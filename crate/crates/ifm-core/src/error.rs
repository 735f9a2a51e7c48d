//! Error type shared by all modules.

use thiserror::Error;

/// Errors surfaced by the IFM library.
#[derive(Debug, Clone, Error)]
pub enum IfmError {
    /// A matrix handed to the Hermitian eigensolver was not Hermitian.
    #[error("matrix is not Hermitian: max |M - M†| = {deviation:.3e} exceeds tol {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    /// The Jacobi sweep limit was exhausted before the off-diagonal norm
    /// dropped below threshold.
    #[error(
        "eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})"
    )]
    NoConvergence { sweeps: usize, off_norm: f64 },

    /// Operand dimensions are inconsistent with the operation.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The coefficient closed forms diverge as the transparency amplitude
    /// approaches 1; callers must use the channel/product path there.
    #[error("transparency amplitude a = {0} is within 1e-12 of 1; coefficient forms diverge")]
    DegenerateTransparency(f64),

    /// Requested a zero-error input state outside the existence region
    /// k1 <= 1.
    #[error("no zero-error input state exists: k1 = {0} > 1")]
    NoZeroErrorState(f64),

    /// A value violates its documented range or normalization.
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, IfmError>;
