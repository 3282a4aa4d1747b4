//! Bundled named patterns, each with the digest of its density report.

use crate::graph::PatternGraph;

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub graph: PatternGraph,
    pub provenance: &'static str,
    /// Expected [`crate::density::DensityReport::digest`].
    pub digest: &'static str,
}

fn build(n: usize, edges: &[(usize, usize)]) -> PatternGraph {
    PatternGraph::from_edges(n, edges).expect("corpus graphs are well formed")
}

pub fn path() -> PatternGraph {
    build(4, &[(0, 1), (1, 2), (2, 3)])
}

pub fn tree() -> PatternGraph {
    build(5, &[(0, 1), (1, 2), (1, 3), (3, 4)])
}

/// K4 on 0..3 plus an edge 4-5 attached by 5-1 and 4-2.
pub fn k4_link() -> PatternGraph {
    let mut g = PatternGraph::complete(4).disjoint_union(&PatternGraph::complete(2));
    g.add_edge(5, 1).unwrap();
    g.add_edge(4, 2).unwrap();
    g
}

/// Triangle 0,1,2 and the isolated vertex 3.
pub fn triangle_plus_isolated() -> PatternGraph {
    build(4, &[(0, 1), (1, 2), (0, 2)])
}

/// K5 on 0..4, a hub 5 joined to two clique vertices, and a triangle
/// 6,7,8 hanging off the hub and the clique.
pub fn k5_figure() -> PatternGraph {
    let mut g = PatternGraph::complete(5).disjoint_union(&PatternGraph::new(1));
    g = g.disjoint_union(&PatternGraph::complete(3));
    for (a, b) in [(2, 5), (3, 5), (5, 6), (4, 7), (5, 8)] {
        g.add_edge(a, b).unwrap();
    }
    g
}

/// Triangle 0,1,2 with pendant vertices 3 (on 2) and 4 (on 1).
pub fn triangle_two_pendants() -> PatternGraph {
    build(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (1, 4)])
}

/// Two triangles and two connector vertices; collapsing both triangles
/// leaves a 4-cycle.
pub fn two_triangles_cycle() -> PatternGraph {
    build(
        8,
        &[
            (0, 1),
            (1, 2),
            (0, 2),
            (3, 4),
            (4, 5),
            (3, 5),
            (0, 3),
            (2, 6),
            (4, 7),
            (6, 7),
        ],
    )
}

/// Four triangles linked in a cycle by single edges.
pub fn necklace() -> PatternGraph {
    let mut edges = Vec::new();
    for t in 0..4 {
        let b = 3 * t;
        edges.extend([(b, b + 1), (b + 1, b + 2), (b, b + 2)]);
    }
    edges.extend([(0, 3), (10, 8), (1, 9), (4, 6)]);
    build(12, &edges)
}

/// Triangle 0,1,2 and a path 2-3-4-1 closing a 4-cycle around edge 1-2.
pub fn counterexample() -> PatternGraph {
    build(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (4, 1), (4, 3)])
}

/// Two vertices joined by a double edge.
pub fn double_edge() -> PatternGraph {
    build(2, &[(0, 1), (0, 1)])
}

pub fn entries() -> Vec<CorpusEntry> {
    vec![
        CorpusEntry {
            name: "k2",
            graph: PatternGraph::complete(2),
            provenance: "single edge (perfect matchings)",
            digest: "d=1 m=1 class=strictly_balanced s=1 local=[1,1]",
        },
        CorpusEntry {
            name: "k3",
            graph: PatternGraph::complete(3),
            provenance: "triangle, smallest strictly balanced non-edge pattern",
            digest: "d=3/2 m=3/2 class=strictly_balanced s=3 local=[3/2,3/2,3/2]",
        },
        CorpusEntry {
            name: "k4",
            graph: PatternGraph::complete(4),
            provenance: "complete graph K4",
            digest: "d=2 m=2 class=strictly_balanced s=6 local=[2,2,2,2]",
        },
        CorpusEntry {
            name: "k5",
            graph: PatternGraph::complete(5),
            provenance: "complete graph K5, density 5/2",
            digest: "d=5/2 m=5/2 class=strictly_balanced s=10 local=[5/2,5/2,5/2,5/2,5/2]",
        },
        CorpusEntry {
            name: "path",
            graph: path(),
            provenance: "path on four vertices",
            digest: "d=1 m=1 class=balanced_not_strict s=1 local=[1,1,1,1]",
        },
        CorpusEntry {
            name: "tree",
            graph: tree(),
            provenance: "five-vertex spider tree",
            digest: "d=1 m=1 class=balanced_not_strict s=1 local=[1,1,1,1,1]",
        },
        CorpusEntry {
            name: "k4-link",
            graph: k4_link(),
            provenance: "introductory non-vertex-balanced example: K4 with a linked edge",
            digest: "d=9/5 m=2 class=non_vertex_balanced s=- local=[2,2,2,2,9/5,9/5]",
        },
        CorpusEntry {
            name: "triangle-plus-isolated",
            graph: triangle_plus_isolated(),
            provenance: "triangle and a single isolated vertex",
            digest: "d=1 m=3/2 class=non_vertex_balanced s=- local=[3/2,3/2,3/2,1]",
        },
        CorpusEntry {
            name: "k5-figure",
            graph: k5_figure(),
            provenance: "K5 example whose collapse leaves a multigraph",
            digest: "d=9/4 m=5/2 class=non_vertex_balanced s=- local=[5/2,5/2,5/2,5/2,5/2,12/5,9/4,9/4,9/4]",
        },
        CorpusEntry {
            name: "two-triangles-cycle",
            graph: two_triangles_cycle(),
            provenance: "two triangles collapsing to a 4-cycle",
            digest: "d=10/7 m=3/2 class=non_vertex_balanced s=- local=[3/2,3/2,3/2,3/2,3/2,3/2,10/7,10/7]",
        },
        CorpusEntry {
            name: "figure1",
            graph: triangle_two_pendants(),
            provenance: "triangle with two pendant vertices, with its collapsed and dense-part graphs",
            digest: "d=5/4 m=3/2 class=non_vertex_balanced s=- local=[3/2,3/2,3/2,4/3,4/3]",
        },
        CorpusEntry {
            name: "necklace",
            graph: necklace(),
            provenance: "triangle necklace: four triangles linked in a cycle",
            digest: "d=16/11 m=3/2 class=vertex_balanced_not_strict s=3 local=[3/2,3/2,3/2,3/2,3/2,3/2,3/2,3/2,3/2,3/2,3/2,3/2]",
        },
        CorpusEntry {
            name: "counterexample",
            graph: counterexample(),
            provenance: "vertex-balanced graph whose collapse leaves another triangle",
            digest: "d=3/2 m=3/2 class=balanced_not_strict s=6 local=[3/2,3/2,3/2,3/2,3/2]",
        },
        CorpusEntry {
            name: "double-edge",
            graph: double_edge(),
            provenance: "two roles joined by two parallel edges",
            digest: "d=2 m=2 class=strictly_balanced s=2 local=[2,2]",
        },
    ]
}

pub fn lookup(name: &str) -> Option<CorpusEntry> {
    entries().into_iter().find(|e| e.name == name)
}
