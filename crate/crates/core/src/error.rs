use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed or inconsistent input (bad mass, overlapping arcs, ...).
    #[error("invalid input: {0}")]
    Validation(String),

    /// An equation has no solution in the admissible range.
    #[error("no solution: {0}")]
    NoSolution(String),

    /// A proof-driven construction could not be carried out.
    #[error("construction failed at generation {generation}: {reason}")]
    Construction { generation: usize, reason: String },

    /// A quantity underflows double precision; log-domain mode is required.
    #[error("not representable in double precision: {0} (use surrogate mode)")]
    Representability(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
