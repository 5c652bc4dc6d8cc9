use thiserror::Error;

/// Errors raised by the measurement, data and training layers.
#[derive(Debug, Error)]
pub enum Error {
    /// An input value lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The index cannot be evaluated (zero mean, zero overall inequality, ...).
    #[error("undefined index: {0}")]
    UndefinedIndex(String),

    /// Ids, groups or dimensions do not line up.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("parse error at row {row}, column `{column}`: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    #[error("config error: {0}")]
    Config(String),

    /// Training data cannot support the requested fit.
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("constrained training failed at factor {factor}: {message}")]
    ConstrainedTrainingFailed { factor: f64, message: String },

    #[error("enumeration limit exceeded: n = {n}, at most {limit} individuals supported")]
    EnumerationLimit { n: usize, limit: usize },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures caused by numerics or infeasibility rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::UndefinedIndex(_)
                | Error::DegenerateData(_)
                | Error::ConstrainedTrainingFailed { .. }
                | Error::EnumerationLimit { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
