use thiserror::Error;

use crate::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),

    #[error("edge {{{0}, {1}}} is already present")]
    DuplicateEdge(VertexId, VertexId),

    #[error("edge {{{0}, {1}}} is not present")]
    AbsentEdge(VertexId, VertexId),

    /// An internal invariant was found broken while mutating the structure.
    /// The graph should be considered poisoned afterwards.
    #[error("integrity violation: {0}")]
    Integrity(String),

    #[error("value {value} does not fit the {width}-bit `{field}` field")]
    FieldOverflow {
        field: &'static str,
        value: u64,
        width: u32,
    },

    #[error("{what} = {actual} exceeds the cap of {limit}")]
    SizeCap {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("cannot draw {m} distinct edges on {n} vertices")]
    InfeasibleEdgeCount { n: usize, m: u64 },

    #[error("update {update}: {message}")]
    Stream { update: usize, message: String },

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

impl Error {
    pub(crate) fn format(line: usize, message: impl Into<String>) -> Self {
        Error::Format {
            line,
            message: message.into(),
        }
    }
}
