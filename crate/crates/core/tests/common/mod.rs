//! Independent brute-force oracles. Nothing here calls the library's own
//! density, search or counting code.
#![allow(dead_code)]

use hfactor::graph::{HostGraph, PatternGraph};
use hfactor::Rational64;

/// Every subset of `0..n` with at least `min` elements, as sorted lists.
pub fn subsets(n: usize, min: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        go(i + 1, n, cur, out);
        cur.push(i);
        go(i + 1, n, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out.retain(|s| s.len() >= min);
    out
}

/// Edges (with multiplicity) of `h` with both ends in `s`.
pub fn edges_within(h: &PatternGraph, s: &[usize]) -> i64 {
    h.edges()
        .filter(|((a, b), _)| s.contains(a) && s.contains(b))
        .map(|(_, m)| m as i64)
        .sum()
}

pub fn density_of(h: &PatternGraph, s: &[usize]) -> Rational64 {
    Rational64::new(edges_within(h, s), s.len() as i64 - 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NaiveDensity {
    pub d: Rational64,
    pub m: Rational64,
    pub local: Vec<Rational64>,
    pub class: &'static str,
    pub s: Option<i64>,
}

pub fn naive_density(h: &PatternGraph) -> NaiveDensity {
    let n = h.vertex_count();
    let all: Vec<usize> = (0..n).collect();
    let subs = subsets(n, 2);
    let d = density_of(h, &all);
    let m = subs.iter().map(|s| density_of(h, s)).max().unwrap();
    let local: Vec<Rational64> = (0..n)
        .map(|v| {
            subs.iter()
                .filter(|s| s.contains(&v))
                .map(|s| density_of(h, s))
                .max()
                .unwrap()
        })
        .collect();
    let vertex_balanced = local.iter().all(|&l| l == m);
    let strict = subs
        .iter()
        .filter(|s| s.len() < n)
        .all(|s| density_of(h, s) < d);
    let class = if !vertex_balanced {
        "non_vertex_balanced"
    } else if d == m && strict {
        "strictly_balanced"
    } else if d == m {
        "balanced_not_strict"
    } else {
        "vertex_balanced_not_strict"
    };
    let s = vertex_balanced.then(|| {
        (0..n)
            .map(|v| {
                subs.iter()
                    .filter(|s| s.contains(&v) && density_of(h, s) == m)
                    .map(|s| edges_within(h, s))
                    .min()
                    .unwrap()
            })
            .max()
            .unwrap()
    });
    NaiveDensity { d, m, local, class, s }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let first = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for mut c in combinations(&items[1..], k - 1) {
        c.insert(0, items[0]);
        out.push(c);
    }
    out.extend(combinations(&items[1..], k));
    out
}

/// Whether some role -> vertex bijection onto `block` is a copy of `h`.
pub fn block_hosts_copy(g: &HostGraph, h: &PatternGraph, block: &[usize]) -> bool {
    permutations(block).into_iter().any(|f| {
        if let Some(part) = g.partition() {
            if (0..f.len()).any(|i| part.class_of(f[i]) != i) {
                return false;
            }
        }
        h.edges().all(|((a, b), m)| g.multiplicity(f[a], f[b]) >= m)
    })
}

/// Vertex sets of all copies of `h` in `g`.
pub fn copy_sets(g: &HostGraph, h: &PatternGraph) -> Vec<Vec<usize>> {
    let all: Vec<usize> = (0..g.vertex_count()).collect();
    combinations(&all, h.vertex_count())
        .into_iter()
        .filter(|b| block_hosts_copy(g, h, b))
        .collect()
}

/// Number of partitions of V(g) into blocks that each host a copy of `h`.
pub fn naive_factor_count(g: &HostGraph, h: &PatternGraph) -> u128 {
    fn go(g: &HostGraph, h: &PatternGraph, remaining: &[usize]) -> u128 {
        let Some((&first, rest)) = remaining.split_first() else {
            return 1;
        };
        let k = h.vertex_count();
        let mut total = 0;
        for others in combinations(rest, k - 1) {
            let mut block = vec![first];
            block.extend(&others);
            if block_hosts_copy(g, h, &block) {
                let left: Vec<usize> = rest.iter().copied().filter(|v| !others.contains(v)).collect();
                total += go(g, h, &left);
            }
        }
        total
    }
    let all: Vec<usize> = (0..g.vertex_count()).collect();
    if !all.len().is_multiple_of(h.vertex_count()) {
        return 0;
    }
    go(g, h, &all)
}

/// `g` without the vertices in `z`, relabelled in order, partition kept.
pub fn remove_vertices(g: &HostGraph, z: &[usize]) -> HostGraph {
    let keep: Vec<usize> = (0..g.vertex_count()).filter(|v| !z.contains(v)).collect();
    let index = |v: usize| keep.iter().position(|&x| x == v);
    let mut b = HostGraph::builder(keep.len(), g.kind());
    for ((u, v), m) in g.edges() {
        if let (Some(a), Some(c)) = (index(u), index(v)) {
            b.add_edge_with_multiplicity(a, c, m).unwrap();
        }
    }
    if let Some(part) = g.partition() {
        if !keep.is_empty() {
            let classes = part
                .classes()
                .iter()
                .map(|cl| cl.iter().filter_map(|&v| index(v)).collect())
                .collect();
            b.partition(classes);
        }
    }
    b.build().unwrap()
}

/// w(Z) by brute force.
pub fn naive_w(g: &HostGraph, h: &PatternGraph, z: &[usize]) -> u128 {
    if z.len() == g.vertex_count() {
        return 1;
    }
    naive_factor_count(&remove_vertices(g, z), h)
}

/// Whether a simple graph on `n` vertices, given as an edge predicate, has
/// a perfect matching.
pub fn has_perfect_matching(n: usize, adj: &dyn Fn(usize, usize) -> bool) -> bool {
    fn go(free: &mut Vec<bool>, adj: &dyn Fn(usize, usize) -> bool) -> bool {
        let Some(u) = free.iter().position(|&f| f) else {
            return true;
        };
        free[u] = false;
        for v in u + 1..free.len() {
            if free[v] && adj(u, v) {
                free[v] = false;
                if go(free, adj) {
                    return true;
                }
                free[v] = true;
            }
        }
        free[u] = true;
        false
    }
    go(&mut vec![true; n], adj)
}

/// Number of graphs on `n` labelled vertices with exactly `e` edges that
/// have a perfect matching, for each `e`, by enumerating all of them.
pub fn matching_counts_by_edges(n: usize) -> Vec<u64> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut counts = vec![0u64; pairs.len() + 1];
    for mask in 0u64..(1 << pairs.len()) {
        let adj = |u: usize, v: usize| {
            let i = pairs.iter().position(|&p| p == (u.min(v), u.max(v))).unwrap();
            mask >> i & 1 == 1
        };
        if has_perfect_matching(n, &adj) {
            counts[mask.count_ones() as usize] += 1;
        }
    }
    counts
}

/// Exact Pr[G(n, p) has a perfect matching] from the enumeration counts.
pub fn matching_probability(counts: &[u64], p: f64) -> f64 {
    let total = counts.len() - 1;
    counts
        .iter()
        .enumerate()
        .map(|(e, &c)| c as f64 * p.powi(e as i32) * (1.0 - p).powi((total - e) as i32))
        .sum()
}

/// Brute-force recomputation of the property report fields.
#[derive(Debug, Clone)]
pub struct NaiveProperties {
    pub phi: u128,
    pub a_reference: f64,
    pub d_p: f64,
    pub copy_degrees: Vec<usize>,
    pub maxr_w: Option<f64>,
    pub c_sets: usize,
    pub c_violations: Vec<Vec<usize>>,
}

pub fn naive_properties(g: &HostGraph, h: &PatternGraph, p: f64) -> NaiveProperties {
    let part = g.partition().expect("partitioned host");
    let n = g.vertex_count();
    let k = h.vertex_count();
    let r = n / k;
    let e = h.edge_count() as i32;
    let phi = naive_factor_count(g, h);
    let copies = copy_sets(g, h);
    let copy_degrees = (0..n).map(|x| copies.iter().filter(|c| c.contains(&x)).count()).collect();
    let maxr_w = (phi > 0).then(|| {
        let ws: Vec<u128> = copies.iter().map(|c| naive_w(g, h, c)).collect();
        let max = *ws.iter().max().unwrap() as f64;
        let mean = ws.iter().sum::<u128>() as f64 / ws.len() as f64;
        max / mean
    });
    let mut c_sets = 0;
    let mut c_violations = Vec::new();
    let scale = (n as u128).pow(2 * (k as u32 - 1));
    for skip in 0..k {
        let mut ys: Vec<Vec<usize>> = vec![Vec::new()];
        for c in (0..k).filter(|&c| c != skip) {
            ys = ys
                .into_iter()
                .flat_map(|y| {
                    part.class(c).iter().map(move |&v| {
                        let mut y = y.clone();
                        y.push(v);
                        y
                    })
                })
                .collect();
        }
        for y in ys {
            c_sets += 1;
            let mut ws: Vec<u128> = part
                .class(skip)
                .iter()
                .map(|&v| {
                    let mut z = y.clone();
                    z.push(v);
                    naive_w(g, h, &z)
                })
                .collect();
            ws.sort();
            let max = *ws.last().unwrap();
            let median = ws[(ws.len() - 1) / 2];
            if max * scale > phi && max > 2 * median {
                c_violations.push(y);
            }
        }
    }
    NaiveProperties {
        phi,
        a_reference: (k as f64 - 1.0) * r as f64 * (n as f64).ln() + e as f64 * r as f64 * p.ln(),
        d_p: (r as f64).powi(k as i32 - 1) * p.powi(e),
        copy_degrees,
        maxr_w,
        c_sets,
        c_violations,
    }
}

/// Relative closeness for floats from different evaluation orders.
pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

pub mod batteries;
