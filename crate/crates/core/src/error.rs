use thiserror::Error;

/// Errors raised by the analysis and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of a numerical routine.
    #[error("{function}: argument out of domain ({detail})")]
    Domain {
        function: &'static str,
        detail: String,
    },

    /// An iterative evaluation failed to reach the requested tolerance.
    #[error("{function}: no convergence after {iterations} iterations")]
    NoConvergence {
        function: &'static str,
        iterations: usize,
    },

    /// Node placement that the down-facing surface model cannot describe.
    #[error("invalid geometry: {0}")]
    Geometry(String),

    /// Linearized error propagation is singular at this direction.
    #[error("singular direction: {0}")]
    Singular(String),

    /// A configuration value violates its invariant.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The operation does not apply to the supplied configuration.
    #[error("usage: {0}")]
    Usage(String),

    /// Moments or correlations collapse (zero variance, zero mean).
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
