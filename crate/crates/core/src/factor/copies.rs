use std::collections::HashSet;
use std::ops::ControlFlow;

use serde::Serialize;

use super::FactorError;
use crate::graph::{HostGraph, PatternGraph};

pub const DEFAULT_COPY_LIMIT: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PatternCopy {
    /// Role -> host vertex.
    pub map: Vec<usize>,
    /// The image, ascending.
    pub vertices: Vec<usize>,
}

impl PatternCopy {
    fn new(map: &[usize]) -> Self {
        let mut vertices = map.to_vec();
        vertices.sort_unstable();
        Self {
            map: map.to_vec(),
            vertices,
        }
    }
}

/// Copies of a pattern with, per host vertex, the copies through it.
#[derive(Clone, Debug)]
pub struct CopyIndex {
    copies: Vec<PatternCopy>,
    by_vertex: Vec<Vec<usize>>,
}

impl CopyIndex {
    fn new(n: usize, copies: Vec<PatternCopy>) -> Self {
        let mut by_vertex = vec![Vec::new(); n];
        for (i, c) in copies.iter().enumerate() {
            for &v in &c.vertices {
                by_vertex[v].push(i);
            }
        }
        Self { copies, by_vertex }
    }

    pub fn copies(&self) -> &[PatternCopy] {
        &self.copies
    }

    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    /// Indices of the copies containing `x`.
    pub fn through(&self, x: usize) -> &[usize] {
        &self.by_vertex[x]
    }

    /// D(x, G): the number of copies containing `x`.
    pub fn degree(&self, x: usize) -> usize {
        self.by_vertex[x].len()
    }

    pub fn vertex_count(&self) -> usize {
        self.by_vertex.len()
    }
}

/// Direction must agree, and a partitioned host needs one class per role.
pub(crate) fn check_compat(g: &HostGraph, h: &PatternGraph) -> Result<(), FactorError> {
    if g.is_directed() != h.is_directed() {
        return Err(FactorError::DirectionMismatch);
    }
    if let Some(part) = g.partition() {
        if part.class_count() != h.vertex_count() {
            return Err(FactorError::PartitionMismatch {
                classes: part.class_count(),
                roles: h.vertex_count(),
            });
        }
    }
    Ok(())
}

/// Backtracking embedder of a pattern into a host.
///
/// `classes[role]`, when given, restricts the image of each role to one
/// partition class of the host.
pub(crate) struct Embedder<'a> {
    g: &'a HostGraph,
    classes: Option<Vec<usize>>,
    order: Vec<usize>,
    /// For each position, an earlier role adjacent to it.
    parent: Vec<Option<usize>>,
    /// For each position, (earlier role, tail is current, multiplicity).
    checks: Vec<Vec<(usize, bool, u32)>>,
}

impl<'a> Embedder<'a> {
    pub fn new(g: &'a HostGraph, h: &PatternGraph, classes: Option<Vec<usize>>, first: Option<usize>) -> Self {
        let k = h.vertex_count();
        let mut placed = vec![false; k];
        let mut order = Vec::with_capacity(k);
        let start = first.or_else(|| (0..k).max_by_key(|&v| (h.degree(v), std::cmp::Reverse(v))));
        if let Some(s) = start {
            placed[s] = true;
            order.push(s);
        }
        while order.len() < k {
            let next = (0..k)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| {
                    let linked = h.neighbors(v).iter().filter(|&&u| placed[u]).count();
                    (linked, h.degree(v), std::cmp::Reverse(v))
                })
                .expect("an unplaced role remains");
            placed[next] = true;
            order.push(next);
        }
        let mut position = vec![0; k];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        let mut parent = vec![None; k];
        let mut checks = vec![Vec::new(); k];
        for ((a, b), m) in h.edges() {
            let (later, earlier, later_is_tail) = if position[a] > position[b] {
                (a, b, true)
            } else {
                (b, a, false)
            };
            let i = position[later];
            checks[i].push((earlier, later_is_tail, m));
            if parent[i].is_none_or(|p: usize| position[earlier] < position[p]) {
                parent[i] = Some(earlier);
            }
        }
        Self {
            g,
            classes,
            order,
            parent,
            checks,
        }
    }

    fn fits(&self, i: usize, role: usize, v: usize, map: &[usize], used: &[bool]) -> bool {
        if used[v] {
            return false;
        }
        if let (Some(classes), Some(part)) = (&self.classes, self.g.partition()) {
            if part.class_of(v) != classes[role] {
                return false;
            }
        }
        self.checks[i].iter().all(|&(other, tail, m)| {
            let w = map[other];
            let have = if tail {
                self.g.multiplicity(v, w)
            } else {
                self.g.multiplicity(w, v)
            };
            have >= m
        })
    }

    /// Calls `visit` with each embedding (role -> vertex); `pin` fixes the
    /// image of the first role in the order.
    pub fn run(
        &self,
        pin: Option<usize>,
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let k = self.order.len();
        let mut map = vec![usize::MAX; k];
        let mut used = vec![false; self.g.vertex_count()];
        self.extend(0, pin, &mut map, &mut used, visit)
    }

    fn extend(
        &self,
        i: usize,
        pin: Option<usize>,
        map: &mut [usize],
        used: &mut [bool],
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if i == self.order.len() {
            return visit(map);
        }
        let role = self.order[i];
        let all: Vec<usize>;
        let candidates: &[usize] = match (i, pin, self.parent[i]) {
            (0, Some(x), _) => {
                all = vec![x];
                &all
            }
            (_, _, Some(p)) => self.g.neighbors(map[p]),
            _ => match (&self.classes, self.g.partition()) {
                (Some(classes), Some(part)) => part.class(classes[role]),
                _ => {
                    all = (0..self.g.vertex_count()).collect();
                    &all
                }
            },
        };
        for &v in candidates {
            if self.fits(i, role, v, map, used) {
                map[role] = v;
                used[v] = true;
                let flow = self.extend(i + 1, pin, map, used, visit);
                used[v] = false;
                map[role] = usize::MAX;
                flow?;
            }
        }
        ControlFlow::Continue(())
    }
}

/// Role -> class assignment for a partitioned host: role i in class i.
pub(crate) fn identity_classes(g: &HostGraph, k: usize) -> Option<Vec<usize>> {
    g.partition().map(|_| (0..k).collect())
}

pub fn enumerate_copies(
    g: &HostGraph,
    h: &PatternGraph,
    anchor: Option<usize>,
) -> Result<CopyIndex, FactorError> {
    enumerate_copies_with(g, h, anchor, DEFAULT_COPY_LIMIT)
}

/// All copies of `h` in `g` (or only those through `anchor`), at most
/// `limit` of them.
pub fn enumerate_copies_with(
    g: &HostGraph,
    h: &PatternGraph,
    anchor: Option<usize>,
    limit: usize,
) -> Result<CopyIndex, FactorError> {
    check_compat(g, h)?;
    let classes = identity_classes(g, h.vertex_count());
    let copies = collect_copies(g, h, classes, anchor, limit)?;
    Ok(CopyIndex::new(g.vertex_count(), copies))
}

/// Distinct copies by vertex set, with roles restricted by `classes`.
pub(crate) fn collect_copies(
    g: &HostGraph,
    h: &PatternGraph,
    classes: Option<Vec<usize>>,
    anchor: Option<usize>,
    limit: usize,
) -> Result<Vec<PatternCopy>, FactorError> {
    let n = g.vertex_count();
    if let Some(x) = anchor {
        if x >= n {
            return Err(FactorError::VertexOutOfRange { vertex: x, count: n });
        }
    }
    let k = h.vertex_count();
    if k == 0 || k > n {
        return Ok(Vec::new());
    }
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut copies = Vec::new();
    let mut over = false;
    let mut visit = |map: &[usize]| {
        let c = PatternCopy::new(map);
        if seen.insert(c.vertices.clone()) {
            copies.push(c);
            if copies.len() > limit {
                over = true;
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    };
    match anchor {
        None => {
            let _ = Embedder::new(g, h, classes, None).run(None, &mut visit);
        }
        Some(x) => {
            for role in 0..k {
                if let (Some(cl), Some(part)) = (&classes, g.partition()) {
                    if part.class_of(x) != cl[role] {
                        continue;
                    }
                }
                let e = Embedder::new(g, h, classes.clone(), Some(role));
                if e.run(Some(x), &mut visit).is_break() {
                    break;
                }
            }
        }
    }
    if over {
        return Err(FactorError::CopyLimit(limit));
    }
    Ok(copies)
}
