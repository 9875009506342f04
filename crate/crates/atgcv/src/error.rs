//! Error type shared by the whole crate.

use thiserror::Error;

/// Errors raised by the numerical kernels and the experiment driver.
#[derive(Debug, Error)]
pub enum Error {
    /// Operand shapes are incompatible.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A triangular factor has a diagonal entry below the rank tolerance.
    #[error("rank deficient matrix: |R[{index},{index}]| = {value:e} below tolerance")]
    RankDeficient { index: usize, value: f64 },

    /// The SVD iteration did not converge within the sweep cap.
    #[error("svd failed to converge within {sweeps} sweeps")]
    SvdNonConvergence { sweeps: usize },

    /// An operation that needs a nonzero vector received a zero one.
    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,

    /// The Krylov recurrence terminated and cannot be extended.
    #[error("arnoldi breakdown at step {m}: subdiagonal {h:e} below tolerance")]
    Breakdown { m: usize, h: f64 },

    /// An index or size argument is outside its valid range.
    #[error("argument out of range: {0}")]
    OutOfRange(String),

    /// A function evaluation produced NaN or infinity where a finite value is required.
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    /// Bad user-facing input (problem name, image shape, config field).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// File input/output failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 bad arguments, 3 numerical, 4 i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::OutOfRange(_) => 2,
            Error::Io(_) => 4,
            _ => 3,
        }
    }
}
