use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("group elements belong to different dihedral groups (D_{0} vs D_{1})")]
    GroupOrderMismatch(usize, usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("bodies {i} and {j} are separated by {sep:.3e}, below the singularity cutoff {cutoff:.1e}")]
    Singularity { i: usize, j: usize, sep: f64, cutoff: f64 },

    #[error("matrix is not symmetric (max asymmetry {0:.3e})")]
    NotSymmetric(f64),

    #[error("character does not decompose into integer multiplicities (residual {0:.3e})")]
    NonIntegerMultiplicity(f64),

    #[error("block structure violated: off-block residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    StructureViolation { residual: f64, tol: f64 },

    #[error("unsupported: {0}")]
    Unsupported(&'static str),

    #[error("no convergence: {0}")]
    NoConvergence(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
