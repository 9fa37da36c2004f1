use thiserror::Error;

/// Errors produced by grid construction, assembly, and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("field lives on a different grid (expected n = {expected}, got n = {got})")]
    GridMismatch { expected: usize, got: usize },

    #[error("plate touches down (min gap {min_gap:e})")]
    Touchdown { min_gap: f64 },

    #[error("singular linear system (zero pivot in column {column})")]
    SingularSystem { column: usize },

    #[error("linear solve backward error {residual:e} exceeds {tol:e}")]
    ResidualTooLarge { residual: f64, tol: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("config: {0}")]
    Config(String),

    #[error("eigen-iteration stagnated after {iterations} iterations (last change {change:e})")]
    EigenStagnation { iterations: usize, change: f64 },

    #[error("eigenvalue computation failed: {0}")]
    EigenSolveFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
