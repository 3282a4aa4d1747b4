use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::copies::{check_compat, collect_copies, PatternCopy, DEFAULT_COPY_LIMIT};
use super::search::{attach_isolated, find_factor};
use super::{FactorAssignment, FactorError, Search};
use crate::graph::{HostGraph, PatternGraph};

const RESTARTS: u64 = 4;
/// Hosts up to this size get an exact search when packing falls short.
const EXACT_FALLBACK_VERTICES: usize = 36;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartialFactor {
    pub assignment: FactorAssignment,
    /// Minimum number of covered vertices asked for.
    pub target: usize,
    pub target_met: bool,
}

/// Disjoint copies covering at least `(1 - eps) n` vertices if it can find
/// them. Randomized greedy packing, improved by replacing one copy with two
/// wherever possible, over a few seeded restarts; small hosts fall back to
/// exact search when the target is missed.
pub fn partial_factor(
    g: &HostGraph,
    h: &PatternGraph,
    eps: f64,
    seed: u64,
    budget: u64,
) -> Result<PartialFactor, FactorError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(FactorError::BadEps(eps));
    }
    check_compat(g, h)?;
    let n = g.vertex_count();
    let k = h.vertex_count();
    let target = ((1.0 - eps) * n as f64).ceil() as usize;
    let limit = n.checked_div(k).unwrap_or(0);
    let isolated = h.isolated_vertices();
    let core_roles: Vec<usize> = (0..k).filter(|v| !isolated.contains(v)).collect();

    let core_maps: Vec<Vec<usize>> = if core_roles.is_empty() {
        vec![Vec::new(); limit]
    } else {
        let core = h.induced_subgraph(&core_roles);
        let classes = g.partition().map(|_| core_roles.clone());
        let copies = collect_copies(g, &core, classes, None, DEFAULT_COPY_LIMIT)?;
        let packing = Packing::new(n, &copies);
        let mut best: Vec<usize> = Vec::new();
        for restart in 0..RESTARTS {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(restart);
            let chosen = packing.improve(packing.greedy(&mut rng, limit), limit);
            if chosen.len() > best.len() {
                best = chosen;
            }
            if best.len() == limit {
                break;
            }
        }
        best.into_iter().map(|c| copies[c].map.clone()).collect()
    };

    let mut assignment = attach_isolated(g, h, &core_roles, &isolated, &core_maps);
    if assignment.covered_count() < target && n <= EXACT_FALLBACK_VERTICES && k > 0 && n.is_multiple_of(k) {
        if let Search::Found(full) = find_factor(g, h, budget)? {
            assignment = full;
        }
    }
    let target_met = assignment.covered_count() >= target;
    Ok(PartialFactor {
        assignment,
        target,
        target_met,
    })
}

struct Packing<'a> {
    n: usize,
    copies: &'a [PatternCopy],
    masks: Vec<FixedBitSet>,
    by_vertex: Vec<Vec<usize>>,
}

impl<'a> Packing<'a> {
    fn new(n: usize, copies: &'a [PatternCopy]) -> Self {
        let mut by_vertex = vec![Vec::new(); n];
        let masks = copies
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut m = FixedBitSet::with_capacity(n);
                for &v in &c.vertices {
                    m.insert(v);
                    by_vertex[v].push(i);
                }
                m
            })
            .collect();
        Self {
            n,
            copies,
            masks,
            by_vertex,
        }
    }

    fn covered(&self, chosen: &[usize]) -> FixedBitSet {
        let mut covered = FixedBitSet::with_capacity(self.n);
        for &c in chosen {
            covered.union_with(&self.masks[c]);
        }
        covered
    }

    fn greedy(&self, rng: &mut ChaCha8Rng, limit: usize) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.copies.len()).collect();
        order.shuffle(rng);
        let mut covered = FixedBitSet::with_capacity(self.n);
        let mut chosen = Vec::new();
        for c in order {
            if chosen.len() == limit {
                break;
            }
            if self.masks[c].is_disjoint(&covered) {
                covered.union_with(&self.masks[c]);
                chosen.push(c);
            }
        }
        chosen
    }

    /// Adds every copy that fits in the free vertices.
    fn fill(&self, chosen: &mut Vec<usize>, covered: &mut FixedBitSet, limit: usize) {
        for c in 0..self.copies.len() {
            if chosen.len() == limit {
                return;
            }
            if self.masks[c].is_disjoint(covered) {
                covered.union_with(&self.masks[c]);
                chosen.push(c);
            }
        }
    }

    /// Replaces one chosen copy by two disjoint copies inside its vertices
    /// plus the free ones, until no such swap exists.
    fn improve(&self, mut chosen: Vec<usize>, limit: usize) -> Vec<usize> {
        let mut improved = true;
        while improved && chosen.len() < limit {
            improved = false;
            for slot in 0..chosen.len() {
                let out = chosen[slot];
                let mut others = chosen.clone();
                others.swap_remove(slot);
                let covered = self.covered(&others);
                let mut cands: Vec<usize> = self.copies[out]
                    .vertices
                    .iter()
                    .flat_map(|&v| self.by_vertex[v].iter().copied())
                    .filter(|&c| c != out && self.masks[c].is_disjoint(&covered))
                    .collect();
                cands.sort_unstable();
                cands.dedup();
                let pair = cands.iter().enumerate().find_map(|(i, &a)| {
                    cands[i + 1..]
                        .iter()
                        .find(|&&b| self.masks[a].is_disjoint(&self.masks[b]))
                        .map(|&b| (a, b))
                });
                if let Some((a, b)) = pair {
                    let mut covered = covered;
                    covered.union_with(&self.masks[a]);
                    covered.union_with(&self.masks[b]);
                    others.push(a);
                    others.push(b);
                    self.fill(&mut others, &mut covered, limit);
                    chosen = others;
                    improved = true;
                    break;
                }
            }
        }
        chosen
    }
}
