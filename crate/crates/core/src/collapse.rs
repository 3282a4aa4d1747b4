//! The vertex-collapsing process.
//!
//! Starting from H, a subgraph of density exactly m(H) is contracted to a
//! single vertex, edges leaving it are re-attached (accumulating
//! multiplicity) and internal edges are dropped. This repeats until no
//! proper subgraph of density m(H) remains. The result is the multigraph ℋ;
//! the dropped edges form H′ on the original vertex set.

use std::cmp::Ordering;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::density::{mask_to_vertices, DensityError, Frac, SubsetTable};
use crate::graph::PatternGraph;
use crate::scalar::{serialize_ratio, ExactInt};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CollapseError {
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error("collapsing is defined for undirected patterns only")]
    Directed,
    #[error("a witness needs at least two vertices")]
    WitnessTooSmall,
    #[error("witness vertex {0} is out of range or repeated")]
    BadWitnessVertex(usize),
    #[error("witness has density {got}, but the maximum is {max}")]
    NotMaximum { got: String, max: String },
}

/// How the next witness is chosen among all subsets of density m(H).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessOrder {
    /// Most edges, then smallest bitmask.
    Deterministic,
    /// Uniformly among all candidates, from a seeded stream.
    Random(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollapseStep {
    /// Vertices of the graph before this step.
    pub witness: Vec<usize>,
    pub result: PatternGraph,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct CollapseTrace<T: ExactInt> {
    #[serde(serialize_with = "serialize_ratio")]
    pub m: Ratio<T>,
    pub steps: Vec<CollapseStep>,
    pub terminal: PatternGraph,
    pub h_prime: PatternGraph,
    /// Original vertex -> terminal vertex.
    pub cluster_map: Vec<usize>,
    /// The terminal itself still has density m(H), so one more step would
    /// contract everything to a point.
    pub degenerate: bool,
}

impl<T: ExactInt> CollapseTrace<T> {
    /// Original vertices grouped by terminal vertex.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.terminal.vertex_count()];
        for (v, &c) in self.cluster_map.iter().enumerate() {
            out[c].push(v);
        }
        out
    }
}

/// Contracts `witness` (vertices of `g`) into one vertex placed where its
/// smallest member was. Returns the new graph and the old -> new map.
fn contract(g: &PatternGraph, witness_mask: usize) -> (PatternGraph, Vec<usize>) {
    let n = g.vertex_count();
    let mut map = vec![0; n];
    let mut names = Vec::new();
    let mut merged_at = None;
    for (v, slot) in map.iter_mut().enumerate() {
        if witness_mask & (1 << v) != 0 {
            match merged_at {
                Some(at) => *slot = at,
                None => {
                    merged_at = Some(names.len());
                    *slot = names.len();
                    names.push(String::new());
                }
            }
        } else {
            *slot = names.len();
            names.push(g.role(v).to_string());
        }
    }
    let at = merged_at.expect("witness is non-empty");
    let members: Vec<&str> = (0..n)
        .filter(|v| witness_mask & (1 << v) != 0)
        .map(|v| g.role(v))
        .collect();
    names[at] = format!("({})", members.join("+"));

    let mut out = PatternGraph::new(names.len())
        .with_roles(names)
        .expect("names carry no whitespace");
    for ((a, b), m) in g.edges() {
        let (x, y) = (map[a], map[b]);
        if x != y {
            out.add_edge_with_multiplicity(x, y, m)
                .expect("contracted endpoints are distinct and in range");
        }
    }
    (out, map)
}

/// One collapse step. The witness must have density equal to the current
/// maximum density of `g`.
pub fn collapse_step(g: &PatternGraph, witness: &[usize]) -> Result<PatternGraph, CollapseError> {
    if g.is_directed() {
        return Err(CollapseError::Directed);
    }
    if witness.len() < 2 {
        return Err(CollapseError::WitnessTooSmall);
    }
    let table = SubsetTable::new(g)?;
    let mut mask = 0usize;
    for &v in witness {
        if v >= g.vertex_count() || mask & (1 << v) != 0 {
            return Err(CollapseError::BadWitnessVertex(v));
        }
        mask |= 1 << v;
    }
    let best = table.best(|_| true).expect("at least two vertices");
    let (got, max) = (table.frac(mask), table.frac(best));
    if got.cmp_density(&max) != Ordering::Equal {
        return Err(CollapseError::NotMaximum {
            got: crate::scalar::format_ratio(&got.to_ratio::<i64>()),
            max: crate::scalar::format_ratio(&max.to_ratio::<i64>()),
        });
    }
    Ok(contract(g, mask).0)
}

pub fn collapse_full<T: ExactInt>(h: &PatternGraph) -> Result<CollapseTrace<T>, CollapseError> {
    collapse_full_with(h, WitnessOrder::Deterministic)
}

/// Runs the process to completion, choosing witnesses by `order`.
pub fn collapse_full_with<T: ExactInt>(
    h: &PatternGraph,
    order: WitnessOrder,
) -> Result<CollapseTrace<T>, CollapseError> {
    if h.is_directed() {
        return Err(CollapseError::Directed);
    }
    if h.vertex_count() < 2 {
        return Err(DensityError::TooFewVertices(h.vertex_count()).into());
    }
    let original = SubsetTable::new(h)?;
    let m = original.frac(original.best(|_| true).expect("at least two vertices"));
    let mut rng = match order {
        WitnessOrder::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        WitnessOrder::Deterministic => None,
    };

    let mut current = h.clone();
    let mut cluster_map: Vec<usize> = (0..h.vertex_count()).collect();
    let mut steps = Vec::new();
    loop {
        let table = SubsetTable::new(&current)?;
        let full = table.full();
        let is_candidate = |mask: usize| {
            mask != full
                && mask.count_ones() >= 2
                && table.frac(mask).cmp_density(&m) != Ordering::Less
        };
        let chosen = match rng.as_mut() {
            None => table.best(is_candidate),
            Some(rng) => {
                let all: Vec<usize> = (1..=full).filter(|&mask| is_candidate(mask)).collect();
                (!all.is_empty()).then(|| all[rng.random_range(0..all.len())])
            }
        };
        let Some(mask) = chosen else { break };
        debug_assert_eq!(table.frac(mask).cmp_density(&m), Ordering::Equal);
        let (next, map) = contract(&current, mask);
        for c in cluster_map.iter_mut() {
            *c = map[*c];
        }
        steps.push(CollapseStep {
            witness: mask_to_vertices(mask),
            result: next.clone(),
        });
        current = next;
    }

    let degenerate = current.vertex_count() >= 2
        && Frac {
            edges: current.edge_count(),
            span: current.vertex_count() as u64 - 1,
        }
        .cmp_density(&m)
            == Ordering::Equal;

    let mut h_prime = PatternGraph::new(h.vertex_count())
        .with_roles(h.roles().to_vec())
        .expect("roles come from a valid pattern");
    for ((a, b), mult) in h.edges() {
        if cluster_map[a] == cluster_map[b] {
            h_prime
                .add_edge_with_multiplicity(a, b, mult)
                .expect("edge of h");
        }
    }

    Ok(CollapseTrace {
        m: m.to_ratio(),
        steps,
        terminal: current,
        h_prime,
        cluster_map,
        degenerate,
    })
}
