use thiserror::Error;

use crate::graph::{Edge, Pair, VertexId};

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    UnknownVertex { vertex: VertexId, n: usize },

    #[error("edge ({}, {}) is not in the graph", .0.0, .0.1)]
    UnknownEdge(Edge),

    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),

    #[error("duplicate edge ({}, {})", .0.0, .0.1)]
    DuplicateEdge(Edge),

    #[error("{} is not reachable from {}", .0.1, .0.0)]
    Unreachable(Pair),

    #[error("pair ({}, {}) is not served by this structure", .0.0, .0.1)]
    UnknownPair(Pair),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("builder contract violated: {0}")]
    ContractViolation(String),

    #[error("enumeration of {needed} failure sets exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("malformed structure file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
