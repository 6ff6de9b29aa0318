use thiserror::Error;

/// Errors reported by graph parsing, lattice construction and enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("duplicate vertex id `{0}`")]
    DuplicateId(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("intersection form is not negative definite")]
    NotNegDefinite,
    #[error("enumeration exceeded the term guard of {limit} terms")]
    ResourceLimit { limit: u64 },
    #[error("expected an integer, got {0}")]
    NonIntegral(String),
    #[error("no stabilization: {0}")]
    Unstable(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

impl Error {
    /// Stable upper-case code used in reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Malformed(_) => "MALFORMED",
            Error::NotATree(_) => "NOT_A_TREE",
            Error::DuplicateId(_) => "DUPLICATE_ID",
            Error::UnknownVertex(_) => "UNKNOWN_VERTEX",
            Error::NotNegDefinite => "NOT_NEG_DEFINITE",
            Error::ResourceLimit { .. } => "RESOURCE_LIMIT",
            Error::NonIntegral(_) => "NON_INTEGRAL",
            Error::Unstable(_) => "UNSTABLE",
            Error::InvalidArgument(_) => "INVALID_ARGUMENT",
            Error::Overflow(_) => "OVERFLOW",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
