//! Seeded samplers: G(n,p), the partitioned multigraph model over a
//! blowup, and the random digraph D(n,p), plus edge splitting.
//!
//! Randomness is counter based: every edge (or blowup slot) owns a ChaCha8
//! stream selected by its identity, under a key derived from the seed and
//! a model tag. A sample therefore does not depend on iteration order, and
//! two samples with the same seed but different `p` are coupled: the
//! larger `p` keeps a superset of edges.

use std::collections::BTreeMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Blowup, GraphKind, HostGraph, Partition, PatternGraph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SampleError {
    #[error("probability {0} is outside [0, 1]")]
    BadProbability(f64),
    #[error("the partitioned model needs a pattern")]
    MissingPattern,
    #[error("the partitioned model takes an undirected pattern; orient a digraph sample instead")]
    DirectedPattern,
    #[error("orientation needs a directed pattern and a digraph host")]
    NotDirected,
    #[error("partition has {classes} classes but the pattern has {roles} roles")]
    PartitionMismatch { classes: usize, roles: usize },
    #[error("host has no partition")]
    MissingPartition,
    #[error("split needs at least two shares, got {0}")]
    TooFewShares(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Gnp,
    Partitioned,
    Digraph,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Gnp => "gnp",
            Model::Partitioned => "partitioned",
            Model::Digraph => "digraph",
        }
    }

    fn tag(self) -> u64 {
        match self {
            Model::Gnp => 0x676e70,
            Model::Partitioned => 0x70617274,
            Model::Digraph => 0x646e70,
        }
    }
}

impl std::str::FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gnp" => Ok(Model::Gnp),
            "partitioned" => Ok(Model::Partitioned),
            "digraph" => Ok(Model::Digraph),
            other => Err(format!("unknown model `{other}`")),
        }
    }
}

/// Parameters of one sample. `size` is `n` for gnp/digraph and the class
/// size `r` for the partitioned model.
#[derive(Clone, Debug)]
pub struct SampleSpec {
    pub model: Model,
    pub pattern: Option<PatternGraph>,
    pub size: usize,
    pub p: f64,
    pub seed: u64,
}

impl SampleSpec {
    pub fn gnp(n: usize, p: f64, seed: u64) -> Self {
        Self {
            model: Model::Gnp,
            pattern: None,
            size: n,
            p,
            seed,
        }
    }

    pub fn partitioned(pattern: &PatternGraph, r: usize, p: f64, seed: u64) -> Self {
        Self {
            model: Model::Partitioned,
            pattern: Some(pattern.clone()),
            size: r,
            p,
            seed,
        }
    }

    pub fn digraph(n: usize, p: f64, seed: u64) -> Self {
        Self {
            model: Model::Digraph,
            pattern: None,
            size: n,
            p,
            seed,
        }
    }

    /// Vertex count of the sampled host.
    pub fn vertex_count(&self) -> usize {
        match (self.model, &self.pattern) {
            (Model::Partitioned, Some(h)) => h.vertex_count() * self.size,
            _ => self.size,
        }
    }
}

/// Uniform draws in [0, 1) addressed by (key, counter).
pub struct EdgeStream {
    rng: ChaCha8Rng,
}

impl EdgeStream {
    pub fn new(seed: u64, tag: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        key[8..16].copy_from_slice(&tag.to_le_bytes());
        Self {
            rng: ChaCha8Rng::from_seed(key),
        }
    }

    /// The first `N` uniforms of the stream owned by `id`.
    pub fn draw<const N: usize>(&mut self, id: u64) -> [f64; N] {
        self.rng.set_stream(id);
        self.rng.set_word_pos(0);
        std::array::from_fn(|_| unit(self.rng.next_u64()))
    }
}

fn unit(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn pair_id(u: usize, v: usize) -> u64 {
    ((u as u64) << 32) | v as u64
}

fn check_p(p: f64) -> Result<(), SampleError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(SampleError::BadProbability(p))
    }
}

/// Seed of trial `i` under a master seed.
pub fn trial_seed(master: u64, i: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(i);
    rng.next_u64()
}

pub fn sample(spec: &SampleSpec) -> Result<HostGraph, SampleError> {
    match spec.model {
        Model::Gnp => sample_gnp(spec.size, spec.p, spec.seed),
        Model::Digraph => sample_dnp(spec.size, spec.p, spec.seed),
        Model::Partitioned => {
            let h = spec.pattern.as_ref().ok_or(SampleError::MissingPattern)?;
            sample_partitioned(h, spec.size, spec.p, spec.seed)
        }
    }
}

pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<HostGraph, SampleError> {
    check_p(p)?;
    let mut stream = EdgeStream::new(seed, Model::Gnp.tag());
    let mut mult = BTreeMap::new();
    for u in 0..n {
        for v in u + 1..n {
            let [x] = stream.draw(pair_id(u, v));
            if x < p {
                mult.insert((u, v), 1);
            }
        }
    }
    Ok(HostGraph::assemble(n, GraphKind::Simple, mult, None))
}

/// Every slot of B(pattern, r) kept independently with probability `p`.
pub fn sample_partitioned(
    pattern: &PatternGraph,
    r: usize,
    p: f64,
    seed: u64,
) -> Result<HostGraph, SampleError> {
    check_p(p)?;
    if pattern.is_directed() {
        return Err(SampleError::DirectedPattern);
    }
    let blowup = Blowup::new(pattern, r);
    let mut stream = EdgeStream::new(seed, Model::Partitioned.tag());
    Ok(blowup.realize(|slot| {
        let [x] = stream.draw(blowup.slot_key(slot));
        x < p
    }))
}

/// Each pair carries an arc with probability `p`, pointing either way with
/// probability one half.
pub fn sample_dnp(n: usize, p: f64, seed: u64) -> Result<HostGraph, SampleError> {
    check_p(p)?;
    let mut stream = EdgeStream::new(seed, Model::Digraph.tag());
    let mut mult = BTreeMap::new();
    for u in 0..n {
        for v in u + 1..n {
            let [x, dir] = stream.draw(pair_id(u, v));
            if x < p {
                let key = if dir < 0.5 { (u, v) } else { (v, u) };
                mult.insert(key, 1);
            }
        }
    }
    Ok(HostGraph::assemble(n, GraphKind::Digraph, mult, None))
}

/// Keeps the arcs of `d` that run from class i to class j for some pattern
/// arc i -> j. The result is a partitioned digraph whose slots are present
/// independently with probability p/2 when `d` is D(n,p).
pub fn orient_restrict(
    d: &HostGraph,
    pattern: &PatternGraph,
    partition: &Partition,
) -> Result<HostGraph, SampleError> {
    if !pattern.is_directed() || !d.is_directed() {
        return Err(SampleError::NotDirected);
    }
    if partition.class_count() != pattern.vertex_count() {
        return Err(SampleError::PartitionMismatch {
            classes: partition.class_count(),
            roles: pattern.vertex_count(),
        });
    }
    let mut mult = BTreeMap::new();
    for ((u, v), m) in d.edges() {
        if pattern.multiplicity(partition.class_of(u), partition.class_of(v)) > 0 {
            mult.insert((u, v), m);
        }
    }
    Ok(HostGraph::assemble(
        d.vertex_count(),
        GraphKind::Digraph,
        mult,
        Some(partition.clone()),
    ))
}

fn share_hosts(g: &HostGraph, shares: Vec<BTreeMap<(usize, usize), u32>>) -> Vec<HostGraph> {
    shares
        .into_iter()
        .map(|mult| HostGraph::assemble(g.vertex_count(), g.kind(), mult, g.partition().cloned()))
        .collect()
}

/// Sends every edge (each parallel copy separately) to one of `ways`
/// shares, uniformly. Shares are edge-disjoint and their union is `g`.
pub fn split_edges(g: &HostGraph, ways: usize, seed: u64) -> Result<Vec<HostGraph>, SampleError> {
    if ways < 2 {
        return Err(SampleError::TooFewShares(ways));
    }
    let mut stream = EdgeStream::new(seed, 0x73706c6974);
    let mut shares = vec![BTreeMap::new(); ways];
    for ((u, v), m) in g.edges() {
        for c in 0..m {
            let [x] = stream.draw(pair_id(u, v) ^ (u64::from(c) << 58));
            let k = ((x * ways as f64) as usize).min(ways - 1);
            *shares[k].entry((u, v)).or_insert(0) += 1;
        }
    }
    Ok(share_hosts(g, shares))
}

/// Splits a sample of edge probability `p` into two shares that are each
/// distributed as an independent sample with probability
/// `q = 1 - sqrt(1 - p)`, whose union is exactly `g`. An edge may land in
/// both shares.
pub fn split_overlapping(g: &HostGraph, p: f64, seed: u64) -> Result<[HostGraph; 2], SampleError> {
    check_p(p)?;
    let q = 1.0 - (1.0 - p).sqrt();
    // conditional on presence: only first, only second, both
    let both = if p > 0.0 { q * q / p } else { 0.0 };
    let one = (1.0 - both) / 2.0;
    let mut stream = EdgeStream::new(seed, 0x6f7665726c6170);
    let mut shares = vec![BTreeMap::new(); 2];
    for ((u, v), m) in g.edges() {
        for c in 0..m {
            let [x] = stream.draw(pair_id(u, v) ^ (u64::from(c) << 58));
            let targets: &[usize] = if x < one {
                &[0]
            } else if x < 2.0 * one {
                &[1]
            } else {
                &[0, 1]
            };
            for &k in targets {
                *shares[k].entry((u, v)).or_insert(0) += 1;
            }
        }
    }
    let mut out = share_hosts(g, shares).into_iter();
    Ok([out.next().unwrap(), out.next().unwrap()])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes() {
        assert_eq!(sample_gnp(10, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(sample_gnp(10, 1.0, 1).unwrap().edge_count(), 45);
        assert_eq!(sample_dnp(10, 0.0, 1).unwrap().edge_count(), 0);
        assert!(matches!(
            sample_gnp(3, 1.5, 0),
            Err(SampleError::BadProbability(_))
        ));
    }

    #[test]
    fn deterministic() {
        assert_eq!(sample_gnp(30, 0.3, 9).unwrap(), sample_gnp(30, 0.3, 9).unwrap());
        assert_ne!(sample_gnp(30, 0.3, 9).unwrap(), sample_gnp(30, 0.3, 10).unwrap());
    }

    #[test]
    fn coupled_in_p() {
        let lo = sample_gnp(40, 0.2, 5).unwrap();
        let hi = sample_gnp(40, 0.5, 5).unwrap();
        for ((u, v), _) in lo.edges() {
            assert!(hi.adjacent(u, v));
        }
    }

    #[test]
    fn partitioned_full_and_directed_rejection() {
        let h = sample_partitioned(&PatternGraph::complete(2), 2, 1.0, 3).unwrap();
        assert_eq!(h.edge_count(), 4);
        let dbl = PatternGraph::from_edges(2, &[(0, 1), (0, 1)]).unwrap();
        let h = sample_partitioned(&dbl, 1, 1.0, 3).unwrap();
        assert_eq!(h.multiplicity(0, 1), 2);
        let arc = PatternGraph::from_arcs(2, &[(0, 1)]).unwrap();
        assert_eq!(
            sample_partitioned(&arc, 2, 0.5, 0),
            Err(SampleError::DirectedPattern)
        );
    }

    #[test]
    fn split_shares_partition_edges() {
        let g = sample_gnp(20, 0.5, 2).unwrap();
        let shares = split_edges(&g, 3, 7).unwrap();
        let total: u64 = shares.iter().map(HostGraph::edge_count).sum();
        assert_eq!(total, g.edge_count());
        for ((u, v), _) in g.edges() {
            let hits = shares.iter().filter(|s| s.adjacent(u, v)).count();
            assert_eq!(hits, 1);
        }
        assert_eq!(split_edges(&g, 1, 0), Err(SampleError::TooFewShares(1)));
    }

    #[test]
    fn overlapping_split_covers_input() {
        let g = sample_gnp(20, 0.5, 2).unwrap();
        let [a, b] = split_overlapping(&g, 0.5, 4).unwrap();
        for ((u, v), _) in g.edges() {
            assert!(a.adjacent(u, v) || b.adjacent(u, v));
        }
        assert!(a.edges().count() + b.edges().count() >= g.edges().count());
        let full = HostGraph::complete(6);
        let [a, b] = split_overlapping(&full, 1.0, 4).unwrap();
        assert_eq!(a, full);
        assert_eq!(b, full);
    }

    #[test]
    fn trial_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..100).map(|i| trial_seed(1, i)).collect();
        assert_eq!(seeds.len(), 100);
    }
}
