use thiserror::Error;

/// Unified error type for model construction, integration, and analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A value that must be finite is NaN or infinite.
    #[error("non-finite value in {context} (component {index})")]
    NonFinite { context: &'static str, index: usize },

    /// The integrator produced a non-finite state.
    #[error("numerical divergence at step {step} (state component {component})")]
    Divergence { step: usize, component: usize },

    /// Input is structurally valid but analytically unusable (e.g. a
    /// quiescent node with zero amplitude cannot be normalized).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// An optimum was requested over a curve with no defined points.
    #[error("no optimum: {0}")]
    NoOptimum(String),

    /// No inter-spike intervals were produced by any trial.
    #[error("no spikes recorded")]
    NoSpikes,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn degenerate(msg: impl Into<String>) -> Self {
        Error::DegenerateInput(msg.into())
    }
}
