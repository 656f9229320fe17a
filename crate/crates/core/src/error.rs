use thiserror::Error;

/// Failure classes surfaced by every computation in the crate.
///
/// The CLI maps each variant to a distinct exit status, so the variants
/// double as a machine-readable error taxonomy.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("search bound exceeded: {what} (bound {bound})")]
    BoundExceeded { what: String, bound: u64 },
    #[error("precision insufficient: {0}")]
    Precision(String),
    #[error("inconsistency alarm: {0}")]
    Inconsistency(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub fn inconsistency(msg: impl Into<String>) -> Self {
        Error::Inconsistency(msg.into())
    }

    /// Short stable tag used in machine-readable error output.
    pub fn class(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Shape(_) => "shape",
            Error::Unsupported(_) => "unsupported",
            Error::BoundExceeded { .. } => "bound_exceeded",
            Error::Precision(_) => "precision",
            Error::Inconsistency(_) => "inconsistency",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
