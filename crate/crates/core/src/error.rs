use thiserror::Error;

/// Failures reported by the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("extension degree {0} is outside 1..=4")]
    ExtensionDegree(u32),
    #[error("{what} has {count} candidates, above the limit {limit}")]
    TooLarge {
        what: &'static str,
        count: u128,
        limit: u128,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("point violates relation {0}")]
    InvalidPoint(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("operator is not nilpotent of order at most {0}")]
    NotNilpotent(u32),
    #[error("module relation fails: {0}")]
    InvalidModule(String),
    #[error("graded kernel search reached degree {ceiling} without stabilizing")]
    Ceiling { ceiling: i64 },
    #[error("submodule is not certified free")]
    NotFree,
    #[error("image is not contained in kernel: {0}")]
    Containment(String),
    #[error("zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("decomposition failed: {0}")]
    Decomposition(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable identifier printed alongside the message.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "E_NOT_PRIME",
            Error::ExtensionDegree(_) => "E_EXT_DEGREE",
            Error::TooLarge { .. } => "E_TOO_LARGE",
            Error::Dimension(_) => "E_DIMENSION",
            Error::FieldMismatch(_) => "E_FIELD",
            Error::InvalidPoint(_) => "E_POINT",
            Error::Unsupported(_) => "E_UNSUPPORTED",
            Error::NotNilpotent(_) => "E_NILPOTENT",
            Error::InvalidModule(_) => "E_MODULE",
            Error::Ceiling { .. } => "E_CEILING",
            Error::NotFree => "E_NOT_FREE",
            Error::Containment(_) => "E_CONTAINMENT",
            Error::ZeroPolynomial => "E_ZERO_POLY",
            Error::Decomposition(_) => "E_DECOMPOSITION",
            Error::Parse(_) => "E_PARSE",
            Error::Json(_) => "E_JSON",
        }
    }
}
