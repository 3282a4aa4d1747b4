//! Copies of a pattern in a host, exact factor search and counting,
//! partial factors, the two covering conditions, and the two-phase
//! construction through the collapsed multigraph.
//!
//! A copy is identified by its vertex set. In an unpartitioned host one
//! representative role map is kept per vertex set; in a partitioned host
//! role i must land in class i, so the vertex set fixes the map anyway.
//! Pattern edges with multiplicity m need host multiplicity at least m,
//! oriented the same way for digraphs.

mod copies;
mod count;
mod partial;
mod search;
mod covering;
mod two_phase;
mod validate;

use serde::Serialize;
use thiserror::Error;

pub use copies::{enumerate_copies, enumerate_copies_with, CopyIndex, PatternCopy, DEFAULT_COPY_LIMIT};
pub use count::{count_factors, FactorCounter, COUNT_VERTEX_CAP};
pub use partial::{partial_factor, PartialFactor};
pub use search::{find_factor, DEFAULT_BUDGET};
pub use covering::{check_th2, Th2Report};
pub use two_phase::{two_phase_factor, Phase, SplitMode, TwoPhaseOptions, TwoPhaseOutcome};
pub use validate::{validate_factor, FactorViolation};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FactorError {
    #[error("pattern size {pattern} does not divide host size {host}")]
    Divisibility { host: usize, pattern: usize },
    #[error("host has {classes} classes but the pattern has {roles} roles")]
    PartitionMismatch { classes: usize, roles: usize },
    #[error("pattern and host must both be directed or both undirected")]
    DirectionMismatch,
    #[error("more than {0} copies; raise the copy limit")]
    CopyLimit(usize),
    #[error("{count} host vertices exceeds the exhaustive-count cap of {cap}")]
    TooLarge { count: usize, cap: usize },
    #[error("eps must lie strictly between 0 and 1, got {0}")]
    BadEps(f64),
    #[error("vertex {vertex} out of range for {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("two-phase construction needs a non-vertex-balanced pattern")]
    VertexBalanced,
    #[error("two-phase construction needs an unpartitioned undirected host")]
    UnsupportedHost,
    #[error(transparent)]
    Collapse(#[from] crate::collapse::CollapseError),
    #[error(transparent)]
    Density(#[from] crate::density::DensityError),
    #[error(transparent)]
    Sample(#[from] crate::random::SampleError),
}

/// Result of a budgeted exact search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Search<T> {
    Found(T),
    /// The search space was exhausted: nothing exists.
    Absent,
    /// The node budget ran out before the search finished.
    Budget,
}

impl<T> Search<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Search::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Search::Found(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Search::Found(_) => "found",
            Search::Absent => "absent",
            Search::Budget => "budget",
        }
    }
}

/// Vertex-disjoint copies, each given as its role -> host vertex map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorAssignment {
    pub copies: Vec<Vec<usize>>,
    /// Host vertices in no copy, ascending. Empty for a full factor.
    pub uncovered: Vec<usize>,
}

impl FactorAssignment {
    pub fn is_full(&self) -> bool {
        self.uncovered.is_empty()
    }

    pub fn covered_count(&self) -> usize {
        self.copies.iter().map(Vec::len).sum()
    }

    /// `copy role:vertex ...` lines.
    pub fn to_lines(&self, pattern: &crate::graph::PatternGraph) -> String {
        let mut out = String::new();
        for map in &self.copies {
            out.push_str("copy");
            for (role, v) in map.iter().enumerate() {
                out.push_str(&format!(" {}:{v}", pattern.role(role)));
            }
            out.push('\n');
        }
        if !self.uncovered.is_empty() {
            let list: Vec<String> = self.uncovered.iter().map(ToString::to_string).collect();
            out.push_str(&format!("uncovered {}\n", list.join(" ")));
        }
        out
    }
}
