use std::collections::BTreeMap;

use serde::Serialize;

use super::host::{GraphKind, HostGraph, Partition};
use super::PatternGraph;

/// One potential edge of a blowup: the `copy`-th parallel edge between
/// `u ∈ V_part_i` and `v ∈ V_part_j`, where `(part_i, part_j)` is a pattern
/// edge. Parallel slots between the same vertices are distinct.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeSlot {
    pub part_i: usize,
    pub part_j: usize,
    /// 1-based parallel copy index.
    pub copy: u32,
    pub u: usize,
    pub v: usize,
}

/// The r-fold blowup B(H, r), kept implicit: the pattern plus the class
/// size. Slots are generated on demand and hosts are realized from a
/// per-slot retention predicate.
#[derive(Clone, Debug)]
pub struct Blowup {
    pattern: PatternGraph,
    r: usize,
    pairs: Vec<((usize, usize), u32)>,
}

impl Blowup {
    pub fn new(pattern: &PatternGraph, r: usize) -> Self {
        Self {
            pairs: pattern.edges().collect(),
            pattern: pattern.clone(),
            r,
        }
    }

    pub fn pattern(&self) -> &PatternGraph {
        &self.pattern
    }

    pub fn class_size(&self) -> usize {
        self.r
    }

    pub fn vertex_count(&self) -> usize {
        self.pattern.vertex_count() * self.r
    }

    /// r² times the total pattern multiplicity.
    pub fn slot_count(&self) -> u64 {
        self.pattern.edge_count() * (self.r as u64).pow(2)
    }

    pub fn partition(&self) -> Partition {
        Partition::blocks(self.pattern.vertex_count(), self.r)
    }

    pub fn slots(&self) -> impl Iterator<Item = EdgeSlot> + '_ {
        let r = self.r;
        self.pairs.iter().flat_map(move |&((i, j), m)| {
            (1..=m).flat_map(move |copy| {
                (0..r).flat_map(move |a| {
                    (0..r).map(move |b| EdgeSlot {
                        part_i: i,
                        part_j: j,
                        copy,
                        u: i * r + a,
                        v: j * r + b,
                    })
                })
            })
        })
    }

    /// Stable 64-bit identity of a slot, independent of iteration order.
    pub fn slot_key(&self, slot: &EdgeSlot) -> u64 {
        let pair = self
            .pairs
            .iter()
            .position(|&((i, j), _)| i == slot.part_i && j == slot.part_j)
            .expect("slot belongs to this blowup") as u64;
        let (a, b) = ((slot.u % self.r) as u64, (slot.v % self.r) as u64);
        (pair << 56) | (u64::from(slot.copy) << 48) | (a << 24) | b
    }

    /// Host keeping exactly the slots accepted by `keep`.
    pub fn realize(&self, mut keep: impl FnMut(&EdgeSlot) -> bool) -> HostGraph {
        let kind = if self.pattern.is_directed() {
            GraphKind::Digraph
        } else if self.pattern.is_simple() {
            GraphKind::Simple
        } else {
            GraphKind::Multi
        };
        let mut mult: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for slot in self.slots() {
            if keep(&slot) {
                let key = if kind == GraphKind::Digraph {
                    (slot.u, slot.v)
                } else {
                    (slot.u.min(slot.v), slot.u.max(slot.v))
                };
                *mult.entry(key).or_insert(0) += 1;
            }
        }
        HostGraph::assemble(self.vertex_count(), kind, mult, Some(self.partition()))
    }
}

/// The complete blowup B(H, r) as a partitioned host.
pub fn blowup_pattern(pattern: &PatternGraph, r: usize) -> HostGraph {
    Blowup::new(pattern, r).realize(|_| true)
}
