use thiserror::Error;

/// Errors raised by distribution construction, claim checks and sweeps.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a distribution needs at least 2 outcomes, got {0}")]
    TooFewOutcomes(usize),

    #[error("not a probability distribution: {0}")]
    NotADistribution(String),

    #[error("dimension mismatch: {left} vs {right} outcomes")]
    DimensionMismatch { left: usize, right: usize },

    #[error("trial index {index} out of range for {trials} trials")]
    TrialOutOfRange { index: u64, trials: u64 },

    #[error("unknown claim `{0}` (expected C1..C9)")]
    UnknownClaim(String),

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("execution error: {0}")]
    Execution(String),
}

pub type Result<T> = std::result::Result<T, Error>;
