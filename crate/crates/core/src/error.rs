use thiserror::Error;

/// Errors raised by constructions, covers and checkers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A document could not be parsed or violates a structural invariant.
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    /// The requested instance is larger than the configured limits.
    #[error("sizing error: {0}")]
    Sizing(String),

    /// Two points share no tree of the cover.
    #[error("points {p} and {q} are disconnected in the cover")]
    DisconnectedInCover { p: usize, q: usize },

    /// A head lookup found two equally close candidates.
    #[error("ambiguous head for point {point:?} with label {label}")]
    AmbiguousHead { point: [i64; 3], label: char },

    /// No qualifying witness pair exists for the given coloring.
    #[error("degenerate instance: {0}")]
    DegenerateInstance(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
