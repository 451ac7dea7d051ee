use thiserror::Error;

/// Errors shared by the model builders and both engines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dense cap exceeded: {n_sites} sites needs dimension {dim}, cap allows {cap}")]
    CapExceeded {
        n_sites: usize,
        dim: usize,
        cap: usize,
    },

    #[error("matrix is not Hermitian: max |A - A^+| entry = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigensolver failed to converge")]
    ConvergenceFailure,

    #[error("need moments from order 1 through {need}, got {have}")]
    InsufficientOrder { have: usize, need: usize },

    #[error(
        "finite-difference step too small: error estimate {estimate:.3e} \
         exceeds |value| = {value:.3e}"
    )]
    StepTooSmall { value: f64, estimate: f64 },

    #[error(
        "commutator series did not converge within {n_cut} terms \
         (remainder estimate {remainder:.3e})"
    )]
    TruncationNotConverged { n_cut: usize, remainder: f64 },

    #[error("state support violation: weight {weight:.3e} lies outside the reference support")]
    SupportViolation { weight: f64 },

    #[error("gapless mode: eps_k = {epsilon:.3e} at k = {k}, lambda = {lambda}")]
    GaplessMode { k: f64, lambda: f64, epsilon: f64 },

    #[error("level c = {level} not bracketed by the u grid")]
    RootBracketFailure { level: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
