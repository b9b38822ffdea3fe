//! Error type shared by all numerical components.

/// Errors produced by model validation, spectral computation, series
/// construction, special-function evaluation, and Monte Carlo orchestration.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    /// A model, lag, or configuration parameter lies outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A function argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Mismatched dimensions between related inputs.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// The iterative eigenvalue solver failed to converge for one eigenvalue.
    #[error(
        "eigenvalue iteration failed to converge: eigenvalue index {index} \
         exceeded {iterations} implicit-shift sweeps (matrix dimension {dimension})"
    )]
    EigenNonConvergence {
        index: usize,
        iterations: usize,
        dimension: usize,
    },

    /// A covariance matrix that must be positive definite produced a
    /// non-positive eigenvalue (or a Cholesky pivot failed).
    #[error("covariance matrix is not positive definite: offending value {value:e}")]
    NotPositiveDefinite { value: f64 },

    /// The gamma-mixture series hit its hard term cap before absorbing the
    /// requested probability mass.
    #[error(
        "series truncation failed: {terms} terms reached with residual mass {deficit:e} \
         still above the requested tolerance"
    )]
    TruncationFailure { deficit: f64, terms: usize },

    /// An iterative special-function evaluation failed to converge.
    #[error("special function evaluation failed: {0}")]
    SpecialFunction(String),

    /// Parameter combination the implementation deliberately does not support.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A sampled trajectory is degenerate for the requested statistic.
    #[error("degenerate path: {0}")]
    DegeneratePath(String),

    /// A Monte Carlo run stopped before completing all requested trials.
    /// Carries the number of trials that did complete.
    #[error("monte carlo run stopped after {completed} completed trials: {reason}")]
    PartialResult { completed: u64, reason: String },
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
