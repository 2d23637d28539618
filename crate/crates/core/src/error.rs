use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
    #[error("invalid tuple: {0}")]
    InvalidTuple(String),
    #[error("a relation must contain at least one tuple")]
    EmptyRelation,
    #[error("subscheme must not be empty")]
    EmptySubScheme,
    #[error("attribute id {id} out of range for a scheme of {arity} attributes")]
    AttributeOutOfRange { id: usize, arity: usize },
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("join operands share attribute `{0}`")]
    OverlappingSchemes(String),
    #[error("join needs at least one relation")]
    EmptyJoin,
    #[error("partitions over {left} and {right} elements cannot be compared")]
    SchemeMismatch { left: usize, right: usize },
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("block selection must not be empty")]
    EmptySelection,
    #[error("selected block {0:?} is not a block of the partition")]
    BlockNotInPartition(Vec<usize>),
    #[error("malformed input: {0}")]
    Input(String),
    #[error("refused: {0}")]
    Guard(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// Broad classes of failure, mapped by the CLI onto exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Guard,
    Invariant,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Guard(_) => ErrorKind::Guard,
            Error::Invariant(_) => ErrorKind::Invariant,
            _ => ErrorKind::Input,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
