use thiserror::Error;

use crate::expr::DomainError;

/// Errors shared across the numeric layers.
///
/// `InvalidProblem` carries the field path of the offending input
/// (`"bc.alpha"`, `"phi.exponents[1]"`, ...) so callers can report it
/// without re-deriving context.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("{path}: {message}")]
    InvalidProblem { path: String, message: String },

    #[error("bracket expansion hit the cap of {max_doublings} doublings while solving for {context}")]
    IterationCap {
        context: &'static str,
        max_doublings: u32,
    },

    #[error(transparent)]
    Domain(#[from] DomainError),

    #[error("continuation stalled at lambda = {lambda_reached} (last residual {last_residual:e})")]
    NonConvergence {
        lambda_reached: f64,
        last_residual: f64,
    },

    #[error("shot map shows no usable sign change over [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("grid mismatch: {left} vs {right} intervals")]
    GridMismatch { left: usize, right: usize },

    #[error("non-finite value produced in {context}")]
    NonFinite { context: &'static str },
}

impl Error {
    pub(crate) fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidProblem {
            path: path.into(),
            message: message.into(),
        }
    }
}
