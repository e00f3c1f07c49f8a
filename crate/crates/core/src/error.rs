use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("constraints contain a cycle through {0} and {1}")]
    CycleInConstraints(usize, usize),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("id out of range: {0}")]
    Range(String),
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("not a block graph: {0}")]
    NotBlockGraph(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("embedding does not match the graph: {0}")]
    NotPlanarConsistent(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
