use thiserror::Error;

/// Errors shared across kernel evaluation, matrix certification,
/// inequality sweeps, and quadrature.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite input (NaN or infinity)")]
    NonFinite,

    #[error("truncation budget exhausted after {terms} terms (tail bound {tail_bound:e})")]
    TruncationExceeded { terms: usize, tail_bound: f64 },

    #[error("pole in the b-parameter: a denominator factor (1 - b q^k) vanishes")]
    PoleAtB,

    #[error("theta function argument z is zero (negative powers of z diverge)")]
    ZeroArgument,

    #[error("tau must satisfy Im(tau) > 0")]
    BadTau,

    #[error("q-gamma pole: q^x hits q^(-m) for a nonnegative integer m")]
    PoleAtNonpositiveInteger,

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("matrix dimension mismatch: {a} vs {b}")]
    DimMismatch { a: usize, b: usize },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("integration cutoff {cutoff} insufficient, need at least {needed}")]
    CutoffInsufficient { cutoff: f64, needed: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
