use thiserror::Error;

/// Errors raised by the planted-cycles toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A documented precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The risk of an estimate was requested against an empty planted set.
    #[error("undefined risk: the planted edge set is empty")]
    UndefinedRisk,

    /// Trail enumeration found more trails than the configured cap.
    #[error("trail explosion: more than {cap} trails (lower the length bound or the edge density)")]
    TrailExplosion { cap: usize },

    /// A point outside the domain of the generating function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed graph or config text.
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Precondition(_) => "precondition",
            Error::UndefinedRisk => "undefined-risk",
            Error::TrailExplosion { .. } => "trail-explosion",
            Error::Domain(_) => "domain",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
        }
    }
}
