use thiserror::Error;

/// Crate-wide error type.
///
/// Variants are split between validation failures (caller passed parameters
/// outside an operation's contract) and internal failures (an arithmetic
/// self-check tripped). `is_validation` drives the CLI exit-code mapping.
#[derive(Debug, Error)]
pub enum Error {
    #[error("n_max {requested} exceeds the exact-arithmetic budget {cap}")]
    BudgetExceeded { requested: u64, cap: u64 },

    #[error("table covers n <= {have} but the operation needs n <= {needed}")]
    TableTooSmall { needed: u64, have: u64 },

    #[error("value {n} is outside the valid range {low}..={high}")]
    OutOfRange { n: u64, low: u64, high: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Euler factor vanished at p = {p} (|factor| = {magnitude:e})")]
    Pole { p: u64, magnitude: f64 },

    #[error("divisor bound violated at n = {n}: |lambda(n)|/d(n) = {ratio}")]
    DivisorBoundViolation { n: u64, ratio: f64 },

    #[error("quadrature failed to converge: {0}")]
    QuadratureNonConvergence(String),

    #[error("grid resolution too coarse: doubling error estimate {estimate:e} > {limit:e}")]
    ResolutionTooCoarse { estimate: f64, limit: f64 },

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("missing table cache: {0}")]
    MissingCache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True when the error is due to caller input rather than an internal bug.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Internal(_) | Error::Io(_))
    }
}
