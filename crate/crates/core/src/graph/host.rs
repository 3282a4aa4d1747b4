use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::GraphError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Simple,
    Multi,
    Digraph,
}

impl GraphKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GraphKind::Simple => "simple",
            GraphKind::Multi => "multi",
            GraphKind::Digraph => "digraph",
        }
    }
}

/// Disjoint equal-size role classes `V_0..V_{k-1}` covering a host.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    classes: Vec<Vec<usize>>,
    #[serde(skip)]
    class_of: Vec<usize>,
}

impl Partition {
    pub fn new(n: usize, mut classes: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        let mut class_of = vec![usize::MAX; n];
        for (i, class) in classes.iter_mut().enumerate() {
            class.sort_unstable();
            for &v in class.iter() {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, count: n });
                }
                if class_of[v] != usize::MAX {
                    return Err(GraphError::PartitionOverlap(v));
                }
                class_of[v] = i;
            }
        }
        if let Some(v) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(GraphError::PartitionUncovered(v));
        }
        if let Some(first) = classes.first() {
            if classes.iter().any(|c| c.len() != first.len()) {
                return Err(GraphError::PartitionUnequal);
            }
        }
        Ok(Self { classes, class_of })
    }

    /// `k` contiguous classes of size `r`: class `i` is `i*r .. (i+1)*r`.
    pub fn blocks(k: usize, r: usize) -> Self {
        let classes: Vec<Vec<usize>> = (0..k).map(|i| (i * r..(i + 1) * r).collect()).collect();
        let class_of = (0..k * r).map(|v| v / r.max(1)).collect();
        Self { classes, class_of }
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_size(&self) -> usize {
        self.classes.first().map_or(0, Vec::len)
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &[usize] {
        &self.classes[i]
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }
}

/// A host instance: G(n,p), a partitioned multigraph, or a digraph.
///
/// Edge multiplicities live in a map keyed by `(min, max)` for undirected
/// kinds and by `(tail, head)` for digraphs. A union adjacency bitset
/// answers "is there any edge between u and v" in constant time.
#[derive(Clone, Debug, Serialize)]
pub struct HostGraph {
    n: usize,
    kind: GraphKind,
    mult: BTreeMap<(usize, usize), u32>,
    #[serde(skip)]
    adj: Vec<Vec<usize>>,
    #[serde(skip)]
    bits: Vec<Vec<u64>>,
    partition: Option<Partition>,
}

impl PartialEq for HostGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.kind == other.kind
            && self.mult == other.mult
            && self.partition == other.partition
    }
}

impl Eq for HostGraph {}

#[derive(Clone, Debug)]
pub struct HostBuilder {
    n: usize,
    kind: GraphKind,
    mult: BTreeMap<(usize, usize), u32>,
    partition: Option<Vec<Vec<usize>>>,
}

impl HostBuilder {
    pub fn new(n: usize, kind: GraphKind) -> Self {
        Self {
            n,
            kind,
            mult: BTreeMap::new(),
            partition: None,
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<&mut Self, GraphError> {
        self.add_edge_with_multiplicity(u, v, 1)
    }

    pub fn add_edge_with_multiplicity(
        &mut self,
        u: usize,
        v: usize,
        m: u32,
    ) -> Result<&mut Self, GraphError> {
        if u >= self.n || v >= self.n {
            return Err(GraphError::VertexOutOfRange {
                vertex: u.max(v),
                count: self.n,
            });
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if m == 0 {
            return Ok(self);
        }
        let key = match self.kind {
            GraphKind::Digraph => (u, v),
            _ => (u.min(v), u.max(v)),
        };
        let entry = self.mult.entry(key).or_insert(0);
        if *entry > 0 && self.kind != GraphKind::Multi {
            return Err(GraphError::DuplicateEdge(key.0, key.1));
        }
        *entry += m;
        Ok(self)
    }

    pub fn partition(&mut self, classes: Vec<Vec<usize>>) -> &mut Self {
        self.partition = Some(classes);
        self
    }

    pub fn build(&self) -> Result<HostGraph, GraphError> {
        let partition = match &self.partition {
            Some(classes) => Some(Partition::new(self.n, classes.clone())?),
            None => None,
        };
        Ok(HostGraph::assemble(
            self.n,
            self.kind,
            self.mult.clone(),
            partition,
        ))
    }
}

impl HostGraph {
    pub fn builder(n: usize, kind: GraphKind) -> HostBuilder {
        HostBuilder::new(n, kind)
    }

    pub fn empty(n: usize, kind: GraphKind) -> Self {
        Self::assemble(n, kind, BTreeMap::new(), None)
    }

    /// Simple graph from a pair list; panics on malformed input. Meant for
    /// tests and internally generated hosts.
    pub fn simple_from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut b = HostBuilder::new(n, GraphKind::Simple);
        for &(u, v) in edges {
            b.add_edge(u, v).expect("valid simple edge");
        }
        b.build().expect("valid host")
    }

    pub fn complete(n: usize) -> Self {
        let mut mult = BTreeMap::new();
        for u in 0..n {
            for v in u + 1..n {
                mult.insert((u, v), 1);
            }
        }
        Self::assemble(n, GraphKind::Simple, mult, None)
    }

    pub(crate) fn assemble(
        n: usize,
        kind: GraphKind,
        mult: BTreeMap<(usize, usize), u32>,
        partition: Option<Partition>,
    ) -> Self {
        let words = n.div_ceil(64);
        let mut bits = vec![vec![0u64; words]; n];
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in mult.keys() {
            if bits[u][v / 64] & (1 << (v % 64)) == 0 {
                bits[u][v / 64] |= 1 << (v % 64);
                bits[v][u / 64] |= 1 << (u % 64);
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Self {
            n,
            kind,
            mult,
            adj,
            bits,
            partition,
        }
    }

    /// Same edges with a (new) partition attached.
    pub fn with_partition(&self, classes: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        let partition = Partition::new(self.n, classes)?;
        Ok(Self::assemble(
            self.n,
            self.kind,
            self.mult.clone(),
            Some(partition),
        ))
    }

    pub fn without_partition(&self) -> Self {
        Self::assemble(self.n, self.kind, self.mult.clone(), None)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn is_directed(&self) -> bool {
        self.kind == GraphKind::Digraph
    }

    /// Total edge multiplicity (arcs for a digraph).
    pub fn edge_count(&self) -> u64 {
        self.mult.values().map(|&m| u64::from(m)).sum()
    }

    pub fn partition(&self) -> Option<&Partition> {
        self.partition.as_ref()
    }

    /// True when some edge joins `u` and `v`, in either direction.
    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.bits[u][v / 64] & (1 << (v % 64)) != 0
    }

    /// Multiplicity of `u -> v` for digraphs, `{u, v}` otherwise.
    #[inline]
    pub fn multiplicity(&self, u: usize, v: usize) -> u32 {
        if u == v || !self.adjacent(u, v) {
            return 0;
        }
        let key = match self.kind {
            GraphKind::Digraph => (u, v),
            _ => (u.min(v), u.max(v)),
        };
        self.mult.get(&key).copied().unwrap_or(0)
    }

    /// Neighbours in either direction, ascending.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Edges with multiplicity in key order.
    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), u32)> + '_ {
        self.mult.iter().map(|(&k, &m)| (k, m))
    }
}

impl fmt::Display for HostGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::write_host(self))
    }
}
