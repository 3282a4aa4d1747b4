use fixedbitset::FixedBitSet;

use super::copies::{check_compat, collect_copies, PatternCopy, DEFAULT_COPY_LIMIT};
use super::{FactorAssignment, FactorError, Search};
use crate::graph::{HostGraph, PatternGraph};

pub const DEFAULT_BUDGET: u64 = 2_000_000;

/// Exact H-factor search.
///
/// Isolated pattern vertices never constrain anything, so the search
/// packs `n / v_H` disjoint copies of the rest of the pattern and lets
/// every unused host vertex fill an isolated role. At each node the
/// uncovered vertex with the fewest remaining copies is branched on;
/// vertices with none must be fillers.
pub fn find_factor(
    g: &HostGraph,
    h: &PatternGraph,
    budget: u64,
) -> Result<Search<FactorAssignment>, FactorError> {
    check_compat(g, h)?;
    let n = g.vertex_count();
    let k = h.vertex_count();
    if k == 0 || !n.is_multiple_of(k) {
        return Err(FactorError::Divisibility { host: n, pattern: k });
    }
    let t = n / k;
    let isolated = h.isolated_vertices();
    let core_roles: Vec<usize> = (0..k).filter(|v| !isolated.contains(v)).collect();
    let part = g.partition();

    let mut prefilled = FixedBitSet::with_capacity(n);
    let filler_budget = match part {
        Some(part) => {
            for &r in &isolated {
                for &v in part.class(r) {
                    prefilled.insert(v);
                }
            }
            0
        }
        None => t * isolated.len(),
    };

    let core_maps: Vec<Vec<usize>> = if core_roles.is_empty() {
        vec![Vec::new(); t]
    } else {
        let core = h.induced_subgraph(&core_roles);
        let classes = part.map(|_| core_roles.clone());
        let copies = collect_copies(g, &core, classes, None, DEFAULT_COPY_LIMIT)?;
        let mut packer = Packer::new(n, &copies, core_roles.len(), budget);
        match packer.pack(prefilled, filler_budget, t) {
            Search::Found(chosen) => chosen.into_iter().map(|c| copies[c].map.clone()).collect(),
            Search::Absent => return Ok(Search::Absent),
            Search::Budget => return Ok(Search::Budget),
        }
    };

    Ok(Search::Found(attach_isolated(g, h, &core_roles, &isolated, &core_maps)))
}

/// Extends maps of the non-isolated roles to full role maps: isolated
/// roles take unused vertices (from their own class when partitioned).
pub(crate) fn attach_isolated(
    g: &HostGraph,
    h: &PatternGraph,
    core_roles: &[usize],
    isolated: &[usize],
    core_maps: &[Vec<usize>],
) -> FactorAssignment {
    let n = g.vertex_count();
    let k = h.vertex_count();
    let part = g.partition();
    let mut used = vec![false; n];
    for map in core_maps {
        for &v in map {
            used[v] = true;
        }
    }
    let fillers: Vec<usize> = (0..n).filter(|&v| !used[v]).collect();
    let copies: Vec<Vec<usize>> = core_maps
        .iter()
        .enumerate()
        .map(|(j, core_map)| {
            let mut map = vec![0; k];
            for (i, &r) in core_roles.iter().enumerate() {
                map[r] = core_map[i];
            }
            for (i, &r) in isolated.iter().enumerate() {
                map[r] = match part {
                    Some(part) => part.class(r)[j],
                    None => fillers[j * isolated.len() + i],
                };
            }
            map
        })
        .collect();
    let mut covered = vec![false; n];
    for map in &copies {
        for &v in map {
            covered[v] = true;
        }
    }
    FactorAssignment {
        copies,
        uncovered: (0..n).filter(|&v| !covered[v]).collect(),
    }
}

/// Packs a fixed number of disjoint copies, leaving exactly a given
/// number of vertices as fillers.
pub(crate) struct Packer {
    n: usize,
    masks: Vec<FixedBitSet>,
    by_vertex: Vec<Vec<usize>>,
    copy_size: usize,
    nodes: u64,
    budget: u64,
}

enum Step {
    Done,
    Fail,
    Budget,
}

impl Packer {
    pub fn new(n: usize, copies: &[PatternCopy], copy_size: usize, budget: u64) -> Self {
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
            masks,
            by_vertex,
            copy_size,
            nodes: 0,
            budget,
        }
    }

    /// Chooses `need` disjoint copies avoiding `covered`, with exactly
    /// `fillers` uncovered vertices left over.
    pub fn pack(&mut self, mut covered: FixedBitSet, fillers: usize, need: usize) -> Search<Vec<usize>> {
        let mut chosen = Vec::new();
        match self.search(&mut covered, fillers, need, &mut chosen) {
            Step::Done => Search::Found(chosen),
            Step::Fail => Search::Absent,
            Step::Budget => Search::Budget,
        }
    }

    fn search(
        &mut self,
        covered: &mut FixedBitSet,
        fillers: usize,
        need: usize,
        chosen: &mut Vec<usize>,
    ) -> Step {
        if need == 0 {
            return Step::Done;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Step::Budget;
        }
        let mut dead = Vec::new();
        let mut live = 0;
        let mut best: Option<(usize, usize)> = None;
        for v in 0..self.n {
            if covered.contains(v) {
                continue;
            }
            let count = self.by_vertex[v]
                .iter()
                .filter(|&&c| self.masks[c].is_disjoint(covered))
                .count();
            if count == 0 {
                dead.push(v);
            } else {
                live += 1;
                if best.is_none_or(|(_, b)| count < b) {
                    best = Some((v, count));
                }
            }
        }
        if dead.len() > fillers || live < need * self.copy_size {
            return Step::Fail;
        }
        if !dead.is_empty() {
            for &v in &dead {
                covered.insert(v);
            }
            let step = self.search(covered, fillers - dead.len(), need, chosen);
            for &v in &dead {
                covered.set(v, false);
            }
            return step;
        }
        let (v, _) = best.expect("live vertices remain");
        let options: Vec<usize> = self.by_vertex[v]
            .iter()
            .copied()
            .filter(|&c| self.masks[c].is_disjoint(covered))
            .collect();
        for c in options {
            covered.union_with(&self.masks[c]);
            chosen.push(c);
            match self.search(covered, fillers, need - 1, chosen) {
                Step::Fail => {}
                other => return other,
            }
            chosen.pop();
            covered.difference_with(&self.masks[c]);
        }
        if fillers > 0 {
            covered.insert(v);
            let step = self.search(covered, fillers - 1, need, chosen);
            covered.set(v, false);
            return step;
        }
        Step::Fail
    }
}
