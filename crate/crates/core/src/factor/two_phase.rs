use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::search::find_factor;
use super::validate::validate_factor;
use super::{FactorAssignment, FactorError, Search};
use crate::collapse::collapse_full;
use crate::density::{density_report, BalanceClass};
use crate::graph::{GraphKind, HostGraph, Partition, PatternGraph};
use crate::random::{split_edges, split_overlapping};

/// How the host's edges are divided between the two phases.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitMode {
    /// Each edge goes to exactly one share.
    Disjoint,
    /// Each share is an independent sample with `q = 1 - sqrt(1 - p)` and
    /// their union is the host; `None` estimates `p` by the edge density.
    Overlapping(Option<f64>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoPhaseOptions {
    pub seed: u64,
    pub budget: u64,
    pub split: SplitMode,
}

impl TwoPhaseOptions {
    pub fn new(seed: u64, budget: u64) -> Self {
        Self {
            seed,
            budget,
            split: SplitMode::Overlapping(None),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    /// Packing the dense clusters into the first share.
    Dense,
    /// Factor of the collapsed multigraph over the quotient.
    Quotient,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoPhaseOutcome {
    Found(FactorAssignment),
    Absent { phase: Phase },
    Budget { phase: Phase },
}

impl TwoPhaseOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, TwoPhaseOutcome::Found(_))
    }

    pub fn label(&self) -> String {
        match self {
            TwoPhaseOutcome::Found(_) => "found".into(),
            TwoPhaseOutcome::Absent { phase } => format!("absent ({})", phase_name(*phase)),
            TwoPhaseOutcome::Budget { phase } => format!("budget ({})", phase_name(*phase)),
        }
    }
}

fn phase_name(p: Phase) -> &'static str {
    match p {
        Phase::Dense => "dense phase",
        Phase::Quotient => "quotient phase",
    }
}

/// Builds an H-factor in two rounds for a non-vertex-balanced H.
///
/// The first share of the edges hosts `n / v_H` disjoint copies of the
/// collapsed (dense) part H′; every other host vertex is dealt at random to
/// one of the singleton clusters. Each embedded cluster then acts as one
/// vertex of a partitioned quotient host, where the multiplicity between
/// two quotient vertices counts the second-share edges realizing the
/// pattern edges between their clusters. A factor of the collapsed
/// multigraph in the quotient expands back into an H-factor.
pub fn two_phase_factor(
    g: &HostGraph,
    h: &PatternGraph,
    opts: &TwoPhaseOptions,
) -> Result<TwoPhaseOutcome, FactorError> {
    if g.partition().is_some() || g.kind() != GraphKind::Simple || h.is_directed() {
        return Err(FactorError::UnsupportedHost);
    }
    let n = g.vertex_count();
    let k = h.vertex_count();
    if k == 0 || !n.is_multiple_of(k) {
        return Err(FactorError::Divisibility { host: n, pattern: k });
    }
    let report = density_report::<i64>(h)?;
    if report.balance_class != BalanceClass::NonVertexBalanced {
        return Err(FactorError::VertexBalanced);
    }
    let trace = collapse_full::<i64>(h)?;
    let t = n / k;

    let [first, second] = match opts.split {
        SplitMode::Disjoint => {
            let mut shares = split_edges(g, 2, opts.seed)?.into_iter();
            [shares.next().unwrap(), shares.next().unwrap()]
        }
        SplitMode::Overlapping(p) => {
            let pairs = n * n.saturating_sub(1) / 2;
            let p = p.unwrap_or(if pairs == 0 { 0.0 } else { g.edge_count() as f64 / pairs as f64 });
            split_overlapping(g, p.clamp(0.0, 1.0), opts.seed)?
        }
    };

    // dense phase: the H′-factor search packs the clusters' edges and leaves
    // the singleton roles to fillers
    let dense = match find_factor(&first, &trace.h_prime, opts.budget)? {
        Search::Found(f) => f,
        Search::Absent => return Ok(TwoPhaseOutcome::Absent { phase: Phase::Dense }),
        Search::Budget => return Ok(TwoPhaseOutcome::Budget { phase: Phase::Dense }),
    };
    let clusters = trace.clusters();
    let singles: Vec<usize> = (0..clusters.len()).filter(|&c| clusters[c].len() == 1).collect();
    let mut in_dense = vec![false; n];
    for map in &dense.copies {
        for (x, &v) in map.iter().enumerate() {
            if clusters[trace.cluster_map[x]].len() > 1 {
                in_dense[v] = true;
            }
        }
    }
    let mut leftovers: Vec<usize> = (0..n).filter(|&v| !in_dense[v]).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(1);
    leftovers.shuffle(&mut rng);
    debug_assert_eq!(leftovers.len(), t * singles.len());

    // image of original vertex x when its cluster takes quotient slot j
    let image = |x: usize, j: usize| -> usize {
        let c = trace.cluster_map[x];
        if clusters[c].len() > 1 {
            dense.copies[j][x]
        } else {
            let s = singles.iter().position(|&s| s == c).expect("singleton cluster");
            leftovers[s * t + j]
        }
    };

    let kq = trace.terminal.vertex_count();
    let mut mult: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    for ((c1, c2), _) in trace.terminal.edges() {
        let between: Vec<(usize, usize)> = h
            .edges()
            .filter_map(|((a, b), _)| {
                let (ca, cb) = (trace.cluster_map[a], trace.cluster_map[b]);
                if (ca, cb) == (c1, c2) {
                    Some((a, b))
                } else if (cb, ca) == (c1, c2) {
                    Some((b, a))
                } else {
                    None
                }
            })
            .collect();
        for j1 in 0..t {
            for j2 in 0..t {
                let realized = between
                    .iter()
                    .filter(|&&(x, y)| second.adjacent(image(x, j1), image(y, j2)))
                    .count() as u32;
                if realized > 0 {
                    let (u, v) = (c1 * t + j1, c2 * t + j2);
                    mult.insert((u.min(v), u.max(v)), realized);
                }
            }
        }
    }
    let quotient = HostGraph::assemble(kq * t, GraphKind::Multi, mult, Some(Partition::blocks(kq, t)));
    let hfac = match find_factor(&quotient, &trace.terminal, opts.budget)? {
        Search::Found(f) => f,
        Search::Absent => return Ok(TwoPhaseOutcome::Absent { phase: Phase::Quotient }),
        Search::Budget => return Ok(TwoPhaseOutcome::Budget { phase: Phase::Quotient }),
    };

    let copies: Vec<Vec<usize>> = hfac
        .copies
        .iter()
        .map(|qmap| {
            (0..k)
                .map(|x| {
                    let c = trace.cluster_map[x];
                    image(x, qmap[c] - c * t)
                })
                .collect()
        })
        .collect();
    let stitched = FactorAssignment {
        copies,
        uncovered: Vec::new(),
    };
    validate_factor(g, h, &stitched, true).expect("stitched copies realize every pattern edge");
    Ok(TwoPhaseOutcome::Found(stitched))
}
