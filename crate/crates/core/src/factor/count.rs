use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::copies::{check_compat, collect_copies, identity_classes, PatternCopy, DEFAULT_COPY_LIMIT};
use super::FactorError;
use crate::graph::{HostGraph, PatternGraph};

/// Largest host accepted by exhaustive counting.
pub const COUNT_VERTEX_CAP: usize = 24;

/// Memoized factor counter over covered-vertex bitmasks.
///
/// `count_avoiding(Z)` is the number of factors of `G - Z`; all queries
/// share one memo, so weights w(Z) over many Z cost little more than Φ.
pub struct FactorCounter {
    n: usize,
    copies: Vec<PatternCopy>,
    masks: Vec<u32>,
    by_vertex: Vec<Vec<usize>>,
    memo: HashMap<u32, BigUint>,
}

impl FactorCounter {
    pub fn new(g: &HostGraph, h: &PatternGraph) -> Result<Self, FactorError> {
        check_compat(g, h)?;
        let n = g.vertex_count();
        if n > COUNT_VERTEX_CAP {
            return Err(FactorError::TooLarge {
                count: n,
                cap: COUNT_VERTEX_CAP,
            });
        }
        let copies = collect_copies(
            g,
            h,
            identity_classes(g, h.vertex_count()),
            None,
            DEFAULT_COPY_LIMIT,
        )?;
        let mut by_vertex = vec![Vec::new(); n];
        let masks = copies
            .iter()
            .enumerate()
            .map(|(i, c)| {
                for &v in &c.vertices {
                    by_vertex[v].push(i);
                }
                c.vertices.iter().fold(0u32, |m, &v| m | (1 << v))
            })
            .collect();
        Ok(Self {
            n,
            copies,
            masks,
            by_vertex,
            memo: HashMap::new(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn copies(&self) -> &[PatternCopy] {
        &self.copies
    }

    pub fn copy_mask(&self, i: usize) -> u32 {
        self.masks[i]
    }

    /// Indices of copies containing `x`.
    pub fn through(&self, x: usize) -> &[usize] {
        &self.by_vertex[x]
    }

    fn full(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    /// Φ(G).
    pub fn count(&mut self) -> BigUint {
        self.count_avoiding(0)
    }

    /// Φ(G - Z) for the vertex set `z` given as a bitmask.
    pub fn count_avoiding(&mut self, z: u32) -> BigUint {
        let full = self.full();
        self.solve(z & full, full)
    }

    fn solve(&mut self, covered: u32, full: u32) -> BigUint {
        if covered == full {
            return BigUint::one();
        }
        if let Some(v) = self.memo.get(&covered) {
            return v.clone();
        }
        let v = (!covered).trailing_zeros() as usize;
        let mut total = BigUint::zero();
        for i in 0..self.by_vertex[v].len() {
            let mask = self.masks[self.by_vertex[v][i]];
            if mask & covered == 0 {
                total += self.solve(covered | mask, full);
            }
        }
        self.memo.insert(covered, total.clone());
        total
    }
}

/// Φ: the number of factors of `g`, as unordered sets of copies.
pub fn count_factors(g: &HostGraph, h: &PatternGraph) -> Result<BigUint, FactorError> {
    let (n, k) = (g.vertex_count(), h.vertex_count());
    if k == 0 || n % k != 0 {
        return Err(FactorError::Divisibility { host: n, pattern: k });
    }
    Ok(FactorCounter::new(g, h)?.count())
}
