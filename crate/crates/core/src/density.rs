//! Exact density analysis of small patterns.
//!
//! The density of a graph on at least two vertices is `e / (v - 1)`, with
//! parallel edges counted by multiplicity. All maxima are found by
//! enumerating vertex subsets as bitmasks; induced subgraphs suffice since
//! dropping edges never raises density.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::graph::PatternGraph;
use crate::scalar::{format_ratio, ratio, serialize_ratio, ExactInt};

/// Largest pattern accepted by subset enumeration.
pub const DENSITY_VERTEX_CAP: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DensityError {
    #[error("density needs at least two vertices, got {0}")]
    TooFewVertices(usize),
    #[error("{count} vertices exceeds the subset-enumeration cap of {cap}")]
    TooLarge { count: usize, cap: usize },
    #[error("pattern has no edges; no threshold exponent is defined")]
    Edgeless,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BalanceClass {
    StrictlyBalanced,
    BalancedNotStrict,
    VertexBalancedNotStrict,
    NonVertexBalanced,
}

impl BalanceClass {
    pub fn as_str(self) -> &'static str {
        match self {
            BalanceClass::StrictlyBalanced => "strictly_balanced",
            BalanceClass::BalancedNotStrict => "balanced_not_strict",
            BalanceClass::VertexBalancedNotStrict => "vertex_balanced_not_strict",
            BalanceClass::NonVertexBalanced => "non_vertex_balanced",
        }
    }

    pub fn is_vertex_balanced(self) -> bool {
        self != BalanceClass::NonVertexBalanced
    }
}

impl fmt::Display for BalanceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Edge count and `|S| - 1` of a vertex subset; compared as the fraction
/// `edges / span` by cross-multiplication.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Frac {
    pub edges: u64,
    pub span: u64,
}

impl Frac {
    pub fn cmp_density(&self, other: &Frac) -> Ordering {
        (self.edges * other.span).cmp(&(other.edges * self.span))
    }

    pub fn to_ratio<T: ExactInt>(self) -> Ratio<T> {
        ratio(self.edges as i64, self.span as i64)
    }
}

/// Edge totals for every vertex subset, indexed by bitmask.
pub(crate) struct SubsetTable {
    pub n: usize,
    pub edges: Vec<u64>,
}

impl SubsetTable {
    pub fn new(g: &PatternGraph) -> Result<Self, DensityError> {
        let n = g.vertex_count();
        if n > DENSITY_VERTEX_CAP {
            return Err(DensityError::TooLarge {
                count: n,
                cap: DENSITY_VERTEX_CAP,
            });
        }
        // row[v] = multiplicity-weighted adjacency of v, both directions
        let mut row = vec![vec![0u64; n]; n];
        for ((a, b), m) in g.edges() {
            row[a][b] += u64::from(m);
            row[b][a] += u64::from(m);
        }
        let mut edges = vec![0u64; 1 << n];
        for mask in 1usize..(1 << n) {
            let v = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let mut add = 0;
            let mut bits = rest;
            while bits != 0 {
                let u = bits.trailing_zeros() as usize;
                add += row[v][u];
                bits &= bits - 1;
            }
            edges[mask] = edges[rest] + add;
        }
        Ok(Self { n, edges })
    }

    pub fn full(&self) -> usize {
        (1 << self.n) - 1
    }

    pub fn frac(&self, mask: usize) -> Frac {
        Frac {
            edges: self.edges[mask],
            span: u64::from(mask.count_ones()) - 1,
        }
    }

    /// Best subset (size >= 2) accepted by `filter` under the tie rule:
    /// highest density, then most edges, then smallest bitmask.
    pub fn best(&self, filter: impl Fn(usize) -> bool) -> Option<usize> {
        let mut best: Option<usize> = None;
        for mask in 1..=self.full() {
            if mask.count_ones() < 2 || !filter(mask) {
                continue;
            }
            best = match best {
                None => Some(mask),
                Some(b) => {
                    let order = self
                        .frac(mask)
                        .cmp_density(&self.frac(b))
                        .then(self.edges[mask].cmp(&self.edges[b]));
                    if order == Ordering::Greater {
                        Some(mask)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        best
    }
}

pub(crate) fn mask_to_vertices(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize)
        .filter(|&v| mask & (1 << v) != 0)
        .collect()
}

fn check_size(g: &PatternGraph) -> Result<(), DensityError> {
    if g.vertex_count() < 2 {
        return Err(DensityError::TooFewVertices(g.vertex_count()));
    }
    if g.vertex_count() > DENSITY_VERTEX_CAP {
        return Err(DensityError::TooLarge {
            count: g.vertex_count(),
            cap: DENSITY_VERTEX_CAP,
        });
    }
    Ok(())
}

/// d(H) = e / (v - 1), exact.
pub fn density_d<T: ExactInt>(g: &PatternGraph) -> Result<Ratio<T>, DensityError> {
    if g.vertex_count() < 2 {
        return Err(DensityError::TooFewVertices(g.vertex_count()));
    }
    Ok(ratio(g.edge_count() as i64, g.vertex_count() as i64 - 1))
}

/// A subset attaining some density maximum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct DensityWitness<T: ExactInt> {
    #[serde(serialize_with = "serialize_ratio")]
    pub density: Ratio<T>,
    pub vertices: Vec<usize>,
    pub edges: u64,
}

fn witness<T: ExactInt>(table: &SubsetTable, mask: usize) -> DensityWitness<T> {
    DensityWitness {
        density: table.frac(mask).to_ratio(),
        vertices: mask_to_vertices(mask),
        edges: table.edges[mask],
    }
}

/// m(H) with its tie-broken witness subset.
pub fn max_density<T: ExactInt>(g: &PatternGraph) -> Result<DensityWitness<T>, DensityError> {
    check_size(g)?;
    let table = SubsetTable::new(g)?;
    let mask = table.best(|_| true).expect("at least one pair exists");
    Ok(witness(&table, mask))
}

/// Full density analysis of a pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct DensityReport<T: ExactInt> {
    #[serde(serialize_with = "serialize_ratio")]
    pub d: Ratio<T>,
    #[serde(serialize_with = "serialize_ratio")]
    pub m: Ratio<T>,
    pub m_witness: Vec<usize>,
    /// m(v, H) with witness, per vertex.
    pub per_vertex: Vec<DensityWitness<T>>,
    pub balance_class: BalanceClass,
    pub edge_count: u64,
    pub s: Option<u64>,
    pub s_per_vertex: Option<Vec<u64>>,
}

impl<T: ExactInt> DensityReport<T> {
    pub fn is_balanced(&self) -> bool {
        self.d == self.m
    }

    /// One-line canonical summary used for golden comparisons.
    pub fn digest(&self) -> String {
        let local: Vec<String> = self
            .per_vertex
            .iter()
            .map(|w| format_ratio(&w.density))
            .collect();
        format!(
            "d={} m={} class={} s={} local=[{}]",
            format_ratio(&self.d),
            format_ratio(&self.m),
            self.balance_class,
            self.s.map_or("-".to_string(), |s| s.to_string()),
            local.join(",")
        )
    }
}

/// Computes d, m, every m(v,H), the balance class and, for vertex-balanced
/// patterns, s_v and s.
pub fn density_report<T: ExactInt>(g: &PatternGraph) -> Result<DensityReport<T>, DensityError> {
    check_size(g)?;
    let table = SubsetTable::new(g)?;
    let n = table.n;
    let full = table.full();
    let whole = table.frac(full);
    let m_mask = table.best(|_| true).expect("at least one pair exists");
    let m_frac = table.frac(m_mask);

    let per_vertex_masks: Vec<usize> = (0..n)
        .map(|v| {
            table
                .best(|mask| mask & (1 << v) != 0)
                .expect("v lies in some pair")
        })
        .collect();
    let vertex_balanced = per_vertex_masks
        .iter()
        .all(|&mask| table.frac(mask).cmp_density(&m_frac) == Ordering::Equal);
    let balanced = whole.cmp_density(&m_frac) == Ordering::Equal;
    let strict = (1..full)
        .filter(|mask: &usize| mask.count_ones() >= 2)
        .all(|mask| table.frac(mask).cmp_density(&whole) == Ordering::Less);

    let balance_class = if !vertex_balanced {
        BalanceClass::NonVertexBalanced
    } else if balanced && strict {
        BalanceClass::StrictlyBalanced
    } else if balanced {
        BalanceClass::BalancedNotStrict
    } else {
        BalanceClass::VertexBalancedNotStrict
    };

    let (s, s_per_vertex) = if vertex_balanced && m_frac.edges > 0 {
        let per: Vec<u64> = (0..n)
            .map(|v| {
                (1..=full)
                    .filter(|&mask| {
                        mask & (1 << v) != 0
                            && mask.count_ones() >= 2
                            && table.frac(mask).cmp_density(&m_frac) == Ordering::Equal
                    })
                    .map(|mask| table.edges[mask])
                    .min()
                    .expect("the local maximum is attained")
            })
            .collect();
        (per.iter().copied().max(), Some(per))
    } else {
        (None, None)
    };

    Ok(DensityReport {
        d: whole.to_ratio(),
        m: m_frac.to_ratio(),
        m_witness: mask_to_vertices(m_mask),
        per_vertex: per_vertex_masks
            .into_iter()
            .map(|mask| witness(&table, mask))
            .collect(),
        balance_class,
        edge_count: g.edge_count(),
        s,
        s_per_vertex,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdStatus {
    /// Proved: the pattern is non-vertex-balanced.
    ProvedNonVertexBalanced,
    /// Proved: the pattern is strictly balanced.
    ProvedStrictlyBalanced,
    /// Vertex balanced but not strictly balanced; the formula is conjectural.
    Conjectured,
}

impl ThresholdStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ThresholdStatus::ProvedNonVertexBalanced => "proved_non_vertex_balanced",
            ThresholdStatus::ProvedStrictlyBalanced => "proved_strictly_balanced",
            ThresholdStatus::Conjectured => "conjectured",
        }
    }
}

/// Threshold of the form `n^density_exponent * (log n)^log_exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct ThresholdDescriptor<T: ExactInt> {
    #[serde(serialize_with = "serialize_ratio")]
    pub density_exponent: Ratio<T>,
    #[serde(serialize_with = "serialize_ratio")]
    pub log_exponent: Ratio<T>,
    pub status: ThresholdStatus,
}

impl<T: ExactInt> ThresholdDescriptor<T> {
    /// Evaluates the threshold formula at `n` (constants omitted).
    pub fn evaluate(&self, n: f64) -> f64 {
        let a = crate::scalar::ratio_to_f64(&self.density_exponent);
        let b = crate::scalar::ratio_to_f64(&self.log_exponent);
        n.powf(a) * n.ln().powf(b)
    }

    pub fn formula(&self) -> String {
        format!(
            "n^({}) * (log n)^({})",
            format_ratio(&self.density_exponent),
            format_ratio(&self.log_exponent)
        )
    }
}

pub fn threshold_descriptor<T: ExactInt>(
    report: &DensityReport<T>,
) -> Result<ThresholdDescriptor<T>, DensityError> {
    use num_traits::{One, Zero};
    if report.m.is_zero() {
        return Err(DensityError::Edgeless);
    }
    let inv = |r: &Ratio<T>| -(Ratio::<T>::one() / r.clone());
    Ok(match report.balance_class {
        BalanceClass::NonVertexBalanced => ThresholdDescriptor {
            density_exponent: inv(&report.m),
            log_exponent: Ratio::zero(),
            status: ThresholdStatus::ProvedNonVertexBalanced,
        },
        BalanceClass::StrictlyBalanced => ThresholdDescriptor {
            density_exponent: inv(&report.d),
            log_exponent: ratio(1, report.edge_count as i64),
            status: ThresholdStatus::ProvedStrictlyBalanced,
        },
        BalanceClass::BalancedNotStrict | BalanceClass::VertexBalancedNotStrict => {
            let s = report.s.expect("vertex-balanced patterns with edges carry s");
            ThresholdDescriptor {
                density_exponent: inv(&report.m),
                log_exponent: ratio(1, s as i64),
                status: ThresholdStatus::Conjectured,
            }
        }
    })
}

/// Machine-readable `key=value` record of a report and its threshold.
pub fn report_record<T: ExactInt>(
    report: &DensityReport<T>,
    threshold: Option<&ThresholdDescriptor<T>>,
) -> String {
    let join = |v: &[usize]| {
        v.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut out = String::new();
    out.push_str(&format!("d={}\n", format_ratio(&report.d)));
    out.push_str(&format!("m={}\n", format_ratio(&report.m)));
    out.push_str(&format!("m_witness={}\n", join(&report.m_witness)));
    out.push_str(&format!("class={}\n", report.balance_class));
    out.push_str(&format!(
        "s={}\n",
        report.s.map_or("-".to_string(), |s| s.to_string())
    ));
    for (v, w) in report.per_vertex.iter().enumerate() {
        out.push_str(&format!(
            "m_v.{v}={} witness={}\n",
            format_ratio(&w.density),
            join(&w.vertices)
        ));
    }
    if let Some(per) = &report.s_per_vertex {
        for (v, s) in per.iter().enumerate() {
            out.push_str(&format!("s_v.{v}={s}\n"));
        }
    }
    if let Some(t) = threshold {
        out.push_str(&format!(
            "threshold.density_exponent={}\n",
            format_ratio(&t.density_exponent)
        ));
        out.push_str(&format!(
            "threshold.log_exponent={}\n",
            format_ratio(&t.log_exponent)
        ));
        out.push_str(&format!("threshold.status={}\n", t.status.as_str()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::Rational;
    use num_bigint::BigInt;
    use num_traits::Zero;

    fn r(a: i64, b: i64) -> Rational {
        ratio(a, b)
    }

    /// Naive oracle: materialize every induced subgraph and take d of it.
    fn naive_max(g: &PatternGraph, must_contain: Option<usize>) -> Rational {
        let n = g.vertex_count();
        let mut best: Option<Rational> = None;
        for mask in 0u32..(1 << n) {
            let subset: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
            if subset.len() < 2 || must_contain.is_some_and(|v| !subset.contains(&v)) {
                continue;
            }
            let d = density_d::<BigInt>(&g.induced_subgraph(&subset)).unwrap();
            if best.as_ref().is_none_or(|b| d > *b) {
                best = Some(d);
            }
        }
        best.unwrap()
    }

    #[test]
    fn density_values() {
        assert_eq!(density_d::<BigInt>(&PatternGraph::complete(5)).unwrap(), r(5, 2));
        assert_eq!(density_d::<i64>(&PatternGraph::complete(2)).unwrap(), ratio(1, 1));
        let dbl = PatternGraph::from_edges(2, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(density_d::<i128>(&dbl).unwrap(), ratio(2, 1));
        assert_eq!(
            density_d::<i64>(&PatternGraph::new(1)),
            Err(DensityError::TooFewVertices(1))
        );
    }

    #[test]
    fn max_density_examples() {
        let g = corpus::triangle_plus_isolated();
        let w = max_density::<BigInt>(&g).unwrap();
        assert_eq!(w.density, r(3, 2));
        assert_eq!(w.vertices, vec![0, 1, 2]);

        let k5f = corpus::k5_figure();
        let w = max_density::<BigInt>(&k5f).unwrap();
        assert_eq!(w.density, r(5, 2));
        assert_eq!(w.vertices, vec![0, 1, 2, 3, 4]);

        let tree = corpus::tree();
        let w = max_density::<BigInt>(&tree).unwrap();
        assert_eq!(w.density, r(1, 1));
        assert_eq!(w.vertices, (0..tree.vertex_count()).collect::<Vec<_>>());
    }

    #[test]
    fn enumeration_cap() {
        assert!(matches!(
            max_density::<i64>(&PatternGraph::new(17)),
            Err(DensityError::TooLarge { .. })
        ));
    }

    #[test]
    fn triangle_plus_isolated_report() {
        let rep = density_report::<BigInt>(&corpus::triangle_plus_isolated()).unwrap();
        assert_eq!(rep.m, r(3, 2));
        assert_eq!(rep.d, r(1, 1));
        assert_eq!(rep.per_vertex[3].density, r(1, 1));
        assert_eq!(rep.balance_class, BalanceClass::NonVertexBalanced);
        assert_eq!(rep.s, None);
    }

    #[test]
    fn triangle_report() {
        let rep = density_report::<i64>(&PatternGraph::complete(3)).unwrap();
        assert_eq!(rep.balance_class, BalanceClass::StrictlyBalanced);
        assert_eq!(rep.s, Some(3));
    }

    #[test]
    fn conclusion_graph_report() {
        let rep = density_report::<BigInt>(&corpus::counterexample()).unwrap();
        assert_eq!(rep.m, r(3, 2));
        assert_eq!(rep.d, r(3, 2));
        assert!(rep.per_vertex.iter().all(|w| w.density == r(3, 2)));
        assert_eq!(rep.balance_class, BalanceClass::BalancedNotStrict);
        // the two outer vertices only reach 3/2 through the whole graph
        assert_eq!(rep.s_per_vertex, Some(vec![3, 3, 3, 6, 6]));
        assert_eq!(rep.s, Some(6));
    }

    #[test]
    fn descriptors() {
        let k3 = density_report::<BigInt>(&PatternGraph::complete(3)).unwrap();
        let t = threshold_descriptor(&k3).unwrap();
        assert_eq!(t.density_exponent, r(-2, 3));
        assert_eq!(t.log_exponent, r(1, 3));
        assert_eq!(t.status, ThresholdStatus::ProvedStrictlyBalanced);

        let tpi = density_report::<BigInt>(&corpus::triangle_plus_isolated()).unwrap();
        let t = threshold_descriptor(&tpi).unwrap();
        assert_eq!(t.density_exponent, r(-2, 3));
        assert!(t.log_exponent.is_zero());
        assert_eq!(t.status, ThresholdStatus::ProvedNonVertexBalanced);

        let ce = density_report::<BigInt>(&corpus::counterexample()).unwrap();
        let t = threshold_descriptor(&ce).unwrap();
        assert_eq!(t.density_exponent, r(-2, 3));
        assert_eq!(t.status, ThresholdStatus::Conjectured);

        let edgeless = density_report::<i64>(&PatternGraph::new(3)).unwrap();
        assert_eq!(threshold_descriptor(&edgeless), Err(DensityError::Edgeless));
    }

    #[test]
    fn oracle_agreement_on_corpus() {
        for entry in corpus::entries() {
            let g = &entry.graph;
            let rep = density_report::<BigInt>(g).unwrap();
            assert_eq!(rep.m, naive_max(g, None), "{}", entry.name);
            for v in 0..g.vertex_count() {
                assert_eq!(rep.per_vertex[v].density, naive_max(g, Some(v)), "{}", entry.name);
            }
            assert!(rep.d <= rep.m);
            assert_eq!(rep.is_balanced(), rep.m_witness.len() == g.vertex_count());
        }
    }

    #[test]
    fn record_lists_threshold() {
        let rep = density_report::<BigInt>(&corpus::k5_figure()).unwrap();
        let t = threshold_descriptor(&rep).unwrap();
        let rec = report_record(&rep, Some(&t));
        assert!(rec.contains("m=5/2\n"));
        assert!(rec.contains("class=non_vertex_balanced\n"));
        assert!(rec.contains("threshold.density_exponent=-2/5\n"));
    }
}
