use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input data or parameters outside the admissible range.
    #[error("{0}")]
    Validation(String),

    #[error("value at cell {index} is not finite ({value})")]
    NonFinite { index: usize, value: String },

    #[error("expected {expected} cell values, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    /// A hypothesis of a decomposition or inequality does not hold.
    #[error("{0}")]
    Precondition(String),

    #[error("level {lambda} is below the root median {root_median}")]
    BelowRootMedian { lambda: f64, root_median: f64 },

    /// Instance too large for the requested operation.
    #[error("{0}")]
    Resource(String),

    #[error("{0}")]
    Unsupported(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short machine-readable category, used by the command line front end.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Validation(_) | Error::NonFinite { .. } | Error::LengthMismatch { .. } => {
                "validation"
            }
            Error::Precondition(_) | Error::BelowRootMedian { .. } => "precondition",
            Error::Resource(_) => "resource",
            Error::Unsupported(_) => "unsupported",
            Error::Internal(_) => "internal",
            Error::Io(_) => "io",
            Error::Json(_) | Error::Csv(_) => "validation",
        }
    }
}

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
