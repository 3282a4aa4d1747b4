//! Pattern and host graph representations.

mod blowup;
mod host;
mod iso;
mod pattern;
pub mod text;

use thiserror::Error;

pub use blowup::{blowup_pattern, Blowup, EdgeSlot};
pub use host::{GraphKind, HostBuilder, HostGraph, Partition};
pub use iso::{are_isomorphic, ISO_VERTEX_CAP};
pub use pattern::PatternGraph;
pub use text::{parse_graph, parse_host, parse_pattern, write_host, write_pattern, GraphDoc, ParseError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("duplicate edge {0} {1} in a simple graph")]
    DuplicateEdge(usize, usize),
    #[error("vertex {0} appears in two partition classes")]
    PartitionOverlap(usize),
    #[error("vertex {0} is in no partition class")]
    PartitionUncovered(usize),
    #[error("partition classes have unequal sizes")]
    PartitionUnequal,
    #[error("expected {expected} role names, got {got}")]
    RoleCount { expected: usize, got: usize },
    #[error("role name `{0}` must be non-empty without whitespace")]
    BadRoleName(String),
    #[error("role name `{0}` is used twice")]
    DuplicateRole(String),
    #[error("{count} vertices exceeds the brute-force cap of {cap}")]
    TooLarge { count: usize, cap: usize },
}

/// Induced subgraph of `g` on `subset` (alias of the method, for callers
/// that prefer the free-function form).
pub fn induced_subgraph(g: &PatternGraph, subset: &[usize]) -> PatternGraph {
    g.induced_subgraph(subset)
}
