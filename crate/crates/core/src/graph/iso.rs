use super::{GraphError, PatternGraph};

/// Largest vertex count accepted by [`are_isomorphic`].
pub const ISO_VERTEX_CAP: usize = 12;

fn signature(g: &PatternGraph, v: usize) -> (u64, u64, Vec<u32>) {
    let n = g.vertex_count();
    let out: u64 = (0..n).map(|u| u64::from(g.multiplicity(v, u))).sum();
    let inc: u64 = (0..n).map(|u| u64::from(g.multiplicity(u, v))).sum();
    let mut mults: Vec<u32> = (0..n)
        .map(|u| g.multiplicity(v, u).max(g.multiplicity(u, v)))
        .filter(|&m| m > 0)
        .collect();
    mults.sort_unstable();
    (out, inc, mults)
}

/// Brute-force isomorphism test on multigraphs (and digraphs): searches
/// vertex bijections that preserve every multiplicity, pruning candidates
/// whose degree signatures differ.
pub fn are_isomorphic(a: &PatternGraph, b: &PatternGraph) -> Result<bool, GraphError> {
    let n = a.vertex_count();
    for g in [a, b] {
        if g.vertex_count() > ISO_VERTEX_CAP {
            return Err(GraphError::TooLarge {
                count: g.vertex_count(),
                cap: ISO_VERTEX_CAP,
            });
        }
    }
    if n != b.vertex_count()
        || a.is_directed() != b.is_directed()
        || a.edge_count() != b.edge_count()
        || a.pair_count() != b.pair_count()
    {
        return Ok(false);
    }
    let sig_a: Vec<_> = (0..n).map(|v| signature(a, v)).collect();
    let sig_b: Vec<_> = (0..n).map(|v| signature(b, v)).collect();
    let mut sorted_a = sig_a.clone();
    let mut sorted_b = sig_b.clone();
    sorted_a.sort();
    sorted_b.sort();
    if sorted_a != sorted_b {
        return Ok(false);
    }

    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    Ok(extend(a, b, &sig_a, &sig_b, 0, &mut image, &mut used))
}

fn extend(
    a: &PatternGraph,
    b: &PatternGraph,
    sig_a: &[(u64, u64, Vec<u32>)],
    sig_b: &[(u64, u64, Vec<u32>)],
    v: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    let n = image.len();
    if v == n {
        return true;
    }
    for w in 0..n {
        if used[w] || sig_a[v] != sig_b[w] {
            continue;
        }
        let consistent = (0..v).all(|u| {
            a.multiplicity(v, u) == b.multiplicity(w, image[u])
                && a.multiplicity(u, v) == b.multiplicity(image[u], w)
        });
        if !consistent {
            continue;
        }
        image[v] = w;
        used[w] = true;
        if extend(a, b, sig_a, sig_b, v + 1, image, used) {
            return true;
        }
        used[w] = false;
    }
    image[v] = usize::MAX;
    false
}
