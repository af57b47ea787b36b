//! Fault-tolerant reachability preservers and oracles for designated
//! source/destination pairs in directed graphs.
//!
//! Preservers are sparse subgraphs that keep every designated pair's
//! reachability intact under a bounded number of edge failures; oracles
//! answer "is t still reachable from s after these failures?" directly.

pub mod bench;
pub mod cutset;
pub mod dual_oracle;
pub mod dual_preserver;
pub mod error;
pub mod graph;
pub mod hitting;
pub mod instances;
pub mod io;
pub mod kftrs;
pub mod lca;
pub mod lift;
pub mod provider;
pub mod segments;
pub mod single_oracle;
pub mod skeleton;
pub mod store;
pub mod strands;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{DiGraph, Edge, EdgeId, FailureSet, Pair, Subgraph, VertexId};

/// Number of machine words a built structure stores, counting every integer
/// (including provider subgraphs).
pub trait Words {
    fn words(&self) -> usize;
}

impl Words for graph::DiGraph {
    fn words(&self) -> usize {
        1 + 2 * self.m()
    }
}

impl Words for graph::Subgraph {
    fn words(&self) -> usize {
        1 + 2 * self.len()
    }
}
