//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by wedgeflow computations.
#[derive(Debug, Error)]
pub enum WedgeError {
    /// Input failed a precondition (bad parameter, malformed file, ...).
    #[error("validation: {0}")]
    Validation(String),

    /// A numerical procedure failed (no convergence, singular solve, ...).
    #[error("numerical: {0}")]
    Numerical(String),

    /// A stated invariant was violated at run time; carries a witness
    /// where one exists so the failure can be reproduced.
    #[error("invariant violated: {message}")]
    Invariant {
        message: String,
        /// Offending vector, if the check had one.
        witness: Option<Vec<f64>>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl WedgeError {
    pub fn validation(msg: impl Into<String>) -> Self {
        WedgeError::Validation(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        WedgeError::Numerical(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, WedgeError>;
