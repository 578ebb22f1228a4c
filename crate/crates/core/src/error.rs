use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field characteristic {0} is not a supported prime")]
    NotPrime(u64),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(u32, u32),
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("inadmissible relation: {0}")]
    InadmissibleRelation(String),
    #[error("algebra is not finite dimensional within path length {0}")]
    NotFiniteDimensional(usize),
    #[error("invalid representation `{name}`: {reason}")]
    InvalidRep { name: String, reason: String },
    #[error("invalid morphism: {0}")]
    InvalidMap(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("zero module has no {0}")]
    ZeroModule(&'static str),
    #[error("atlas incomplete: {0}")]
    AtlasIncomplete(String),
    #[error("invalid atlas: {0}")]
    InvalidAtlas(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("not exact: {0}")]
    NotExact(String),
    #[error("{line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("undeclared reference {0}")]
    Undeclared(String),
}

impl Error {
    pub fn verification(msg: impl Into<String>) -> Self {
        Error::Verification(msg.into())
    }
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
