use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error)]
pub enum Error {
    /// A mode index beyond the configured Hermite-Gauss truncation.
    #[error("mode index {n} exceeds truncation n_max = {n_max}")]
    Truncation { n: usize, n_max: usize },

    /// Invalid beam or detector geometry.
    #[error("invalid geometry: {0}")]
    Geometry(String),

    /// A modulation outside the linearized small-signal window.
    #[error("small-signal validity violated: {quantity} = {ratio:.4} (limit {limit})")]
    Validity {
        quantity: &'static str,
        ratio: f64,
        limit: f64,
    },

    /// An argument violates an operation precondition.
    #[error("usage error: {0}")]
    Usage(String),

    /// A quantity is undefined at the requested limit (e.g. zero photons).
    #[error("undefined limit: {0}")]
    UndefinedLimit(String),

    /// Numerical failure (non-PSD covariance, failed factorization, ...).
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A combination of inputs the model cannot evaluate exactly.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Scenario text could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// Scenario parsed but failed validation.
    #[error("invalid scenario field `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(String),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn geometry(msg: impl Into<String>) -> Self {
        Error::Geometry(msg.into())
    }

    pub(crate) fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for input problems (parse and validation), as opposed to
    /// failures during evaluation.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Validation { .. })
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Serde(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
