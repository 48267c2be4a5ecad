use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A record or geometry violates one of its invariants.
    #[error("invalid {record}: {reason}")]
    Validation { record: String, reason: String },

    /// An iterative solve failed to converge or to bracket a root.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// The geometry produces no snap displacement, so the torque is undefined.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("parse error in {file} line {line}: {reason}")]
    Parse {
        file: String,
        line: u64,
        reason: String,
    },

    #[error("{kind} '{name}' not found{}", suggestion_suffix(.suggestions))]
    NotFound {
        kind: &'static str,
        name: String,
        suggestions: Vec<String>,
    },

    #[error("i/o error on {path}: {reason}")]
    Io { path: String, reason: String },
}

fn suggestion_suffix(suggestions: &[String]) -> String {
    if suggestions.is_empty() {
        String::new()
    } else {
        format!("; did you mean {}?", suggestions.join(", "))
    }
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(record: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            record: record.into(),
            reason: reason.into(),
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::NoConvergence(_) | Error::DegenerateGeometry(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
