use thiserror::Error;

use crate::graph::{GraphKind, Vertex};

/// Problems with a single graph: bad text, bad labels, or a kind invariant violated.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("vertex label {label} out of range for {count} internal vertices")]
    LabelOutOfRange { label: usize, count: usize },
    #[error("too many internal vertices ({0}); at most {max} are supported", max = crate::graph::MAX_INTERNAL)]
    TooManyVertices(usize),
    #[error("vertex {vertex} is not allowed in a graph of kind {kind}")]
    ForeignVertex { vertex: String, kind: GraphKind },
    #[error("edge {edge} violates the in/out rule (out has only outgoing, in only incoming edges)")]
    InOutDirection { edge: String },
    #[error("tadpole at {vertex} is not allowed in a graph of kind {kind}")]
    TadpolePolicy { vertex: String, kind: GraphKind },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("kind mismatch: expected {expected}, found {found}")]
    KindMismatch { expected: String, found: String },
    #[error("vertex {0} is not an internal vertex")]
    NotInternal(Vertex),
    #[error("element is not divergence free; divergence is:\n{0}")]
    NotDivergenceFree(String),
    #[error("element does not lie in {complex}: {reason}")]
    NotInComplex { complex: String, reason: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("prime {0} divides a denominator")]
    BadPrime(u64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn kind_mismatch(expected: impl ToString, found: impl ToString) -> Self {
        Error::KindMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
