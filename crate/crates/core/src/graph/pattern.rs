use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::GraphError;

/// A small fixed (multi)graph whose copies make up a factor.
///
/// Vertices are dense indices `0..vertex_count()`; role names are metadata
/// used only for display and serialization. Undirected edges are stored
/// under the key `(min, max)`, directed edges under `(tail, head)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PatternGraph {
    roles: Vec<String>,
    edges: BTreeMap<(usize, usize), u32>,
    directed: bool,
}

pub(crate) fn default_role_name(i: usize) -> String {
    format!("x{}", i + 1)
}

impl PatternGraph {
    /// Edgeless undirected pattern on `n` vertices named `x1..xn`.
    pub fn new(n: usize) -> Self {
        Self {
            roles: (0..n).map(default_role_name).collect(),
            edges: BTreeMap::new(),
            directed: false,
        }
    }

    /// Edgeless directed pattern on `n` vertices.
    pub fn new_directed(n: usize) -> Self {
        Self {
            directed: true,
            ..Self::new(n)
        }
    }

    /// Builds an undirected pattern from an edge list. Repeated pairs
    /// accumulate multiplicity.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::new(n);
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::new_directed(n);
        for &(a, b) in arcs {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Complete graph K_n.
    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for a in 0..n {
            for b in a + 1..n {
                g.edges.insert((a, b), 1);
            }
        }
        g
    }

    pub fn with_roles(mut self, roles: Vec<String>) -> Result<Self, GraphError> {
        if roles.len() != self.roles.len() {
            return Err(GraphError::RoleCount {
                expected: self.roles.len(),
                got: roles.len(),
            });
        }
        for (i, name) in roles.iter().enumerate() {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(GraphError::BadRoleName(name.clone()));
            }
            if roles[..i].contains(name) {
                return Err(GraphError::DuplicateRole(name.clone()));
            }
        }
        self.roles = roles;
        Ok(self)
    }

    fn key(&self, a: usize, b: usize) -> (usize, usize) {
        if self.directed || a < b {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Adds one edge (or one more parallel copy of it).
    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<(), GraphError> {
        self.add_edge_with_multiplicity(a, b, 1)
    }

    pub fn add_edge_with_multiplicity(
        &mut self,
        a: usize,
        b: usize,
        mult: u32,
    ) -> Result<(), GraphError> {
        let n = self.roles.len();
        if a >= n || b >= n {
            return Err(GraphError::VertexOutOfRange {
                vertex: a.max(b),
                count: n,
            });
        }
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        if mult == 0 {
            return Ok(());
        }
        let key = self.key(a, b);
        *self.edges.entry(key).or_insert(0) += mult;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.roles.len()
    }

    /// Total edge multiplicity (e_H, or h for a multigraph).
    pub fn edge_count(&self) -> u64 {
        self.edges.values().map(|&m| u64::from(m)).sum()
    }

    /// Number of distinct vertex pairs carrying at least one edge.
    pub fn pair_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn is_simple(&self) -> bool {
        self.edges.values().all(|&m| m == 1)
    }

    pub fn roles(&self) -> &[String] {
        &self.roles
    }

    pub fn role(&self, v: usize) -> &str {
        &self.roles[v]
    }

    /// Multiplicity of `a -> b` (directed) or `{a, b}` (undirected).
    pub fn multiplicity(&self, a: usize, b: usize) -> u32 {
        if a == b {
            return 0;
        }
        self.edges.get(&self.key(a, b)).copied().unwrap_or(0)
    }

    /// Edges with multiplicity, in key order.
    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), u32)> + '_ {
        self.edges.iter().map(|(&k, &m)| (k, m))
    }

    /// Total multiplicity incident to `v`, counting both directions.
    pub fn degree(&self, v: usize) -> u64 {
        self.edges
            .iter()
            .filter(|((a, b), _)| *a == v || *b == v)
            .map(|(_, &m)| u64::from(m))
            .sum()
    }

    pub fn min_degree(&self) -> u64 {
        (0..self.vertex_count())
            .map(|v| self.degree(v))
            .min()
            .unwrap_or(0)
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&v| self.degree(v) == 0)
            .collect()
    }

    /// Vertices adjacent to `v` in either direction.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .keys()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Subgraph induced on `subset`, keeping multiplicities. Vertices are
    /// renumbered in the order given.
    pub fn induced_subgraph(&self, subset: &[usize]) -> PatternGraph {
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (new, &old) in subset.iter().enumerate() {
            index[old] = new;
        }
        let mut edges = BTreeMap::new();
        for (&(a, b), &m) in &self.edges {
            let (na, nb) = (index[a], index[b]);
            if na != usize::MAX && nb != usize::MAX {
                let key = if self.directed || na < nb {
                    (na, nb)
                } else {
                    (nb, na)
                };
                edges.insert(key, m);
            }
        }
        PatternGraph {
            roles: subset.iter().map(|&v| self.roles[v].clone()).collect(),
            edges,
            directed: self.directed,
        }
    }

    /// Same graph with the orientation dropped; antiparallel arcs merge
    /// into one undirected pair of summed multiplicity.
    pub fn undirected(&self) -> PatternGraph {
        let mut g = PatternGraph {
            roles: self.roles.clone(),
            edges: BTreeMap::new(),
            directed: false,
        };
        for (&(a, b), &m) in &self.edges {
            *g.edges.entry((a.min(b), a.max(b))).or_insert(0) += m;
        }
        g
    }

    /// Disjoint union; the vertices of `other` follow those of `self`.
    pub fn disjoint_union(&self, other: &PatternGraph) -> PatternGraph {
        let shift = self.vertex_count();
        let mut g = self.clone();
        // default names follow the vertex index, so renumber them
        g.roles.extend(other.roles.iter().enumerate().map(|(i, r)| {
            if *r == default_role_name(i) {
                default_role_name(i + shift)
            } else {
                r.clone()
            }
        }));
        for (&(a, b), &m) in &other.edges {
            g.edges.insert((a + shift, b + shift), m);
        }
        g.directed = self.directed || other.directed;
        g
    }
}

impl fmt::Display for PatternGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::write_pattern(self))
    }
}
