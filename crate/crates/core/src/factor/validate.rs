use thiserror::Error;

use super::FactorAssignment;
use crate::graph::{HostGraph, PatternGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorViolation {
    #[error("copy {copy} maps {got} roles, the pattern has {expected}")]
    WrongArity { copy: usize, got: usize, expected: usize },
    #[error("vertex {0} is out of range")]
    OutOfRange(usize),
    #[error("vertex {0} is used twice")]
    Repeated(usize),
    #[error("copy {copy}: pattern edge {a}-{b} needs multiplicity {need}, host has {have}")]
    MissingEdge { copy: usize, a: usize, b: usize, need: u32, have: u32 },
    #[error("copy {copy}: role {role} sits at vertex {vertex} outside its class")]
    WrongClass { copy: usize, role: usize, vertex: usize },
    #[error("the uncovered list does not match the vertices outside all copies")]
    UncoveredMismatch,
    #[error("{0} vertices are not covered")]
    NotFull(usize),
}

/// Checks an assignment from scratch: maps are injective and mutually
/// disjoint, every pattern edge is present with enough multiplicity (in
/// the right direction), roles respect the partition, and `uncovered` is
/// exactly the complement. With `full`, nothing may be left uncovered.
pub fn validate_factor(
    g: &HostGraph,
    h: &PatternGraph,
    f: &FactorAssignment,
    full: bool,
) -> Result<(), FactorViolation> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    for (ci, map) in f.copies.iter().enumerate() {
        if map.len() != h.vertex_count() {
            return Err(FactorViolation::WrongArity {
                copy: ci,
                got: map.len(),
                expected: h.vertex_count(),
            });
        }
        for (role, &v) in map.iter().enumerate() {
            if v >= n {
                return Err(FactorViolation::OutOfRange(v));
            }
            if seen[v] {
                return Err(FactorViolation::Repeated(v));
            }
            seen[v] = true;
            if let Some(part) = g.partition() {
                if part.class_of(v) != role {
                    return Err(FactorViolation::WrongClass { copy: ci, role, vertex: v });
                }
            }
        }
        for ((a, b), need) in h.edges() {
            let have = g.multiplicity(map[a], map[b]);
            if have < need {
                return Err(FactorViolation::MissingEdge { copy: ci, a, b, need, have });
            }
        }
    }
    let rest: Vec<usize> = (0..n).filter(|&v| !seen[v]).collect();
    if rest != f.uncovered {
        return Err(FactorViolation::UncoveredMismatch);
    }
    if full && !rest.is_empty() {
        return Err(FactorViolation::NotFull(rest.len()));
    }
    Ok(())
}
