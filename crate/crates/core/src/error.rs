use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),

    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },

    #[error("depth must be at least 1")]
    ZeroDepth,

    #[error("sample count must be at least 1")]
    ZeroSamples,

    #[error("series tolerance {eps:e} not reached within {max_terms} terms")]
    ToleranceNotReached { eps: f64, max_terms: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("conditioning event had zero count; increase the sample size")]
    ZeroConditionCount,

    #[error("could not locate a starting ball capturing the bridge mass")]
    TailSearchFailure,

    #[error("invalid p-adic literal `{0}`: {1}")]
    Parse(String, &'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
