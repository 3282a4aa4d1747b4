//! Frequency batteries for the random models: each check compares a pooled
//! empirical frequency with its Bernoulli parameter inside a 3σ band, and
//! every individual slot inside a 4σ band (a union bound over slots).

use hfactor::graph::{Partition, PatternGraph};
use hfactor::random::{orient_restrict, sample_dnp, sample_gnp, sample_partitioned};

pub const SAMPLES: u64 = 1000;

#[derive(Debug)]
pub struct Band {
    pub name: &'static str,
    pub expected: f64,
    pub pooled: f64,
    pub sigma: f64,
    pub worst_slot_z: f64,
}

impl Band {
    /// `slots` holds (hits, trials) per slot.
    fn new(name: &'static str, expected: f64, slots: &[(u64, u64)]) -> Self {
        let hits: u64 = slots.iter().map(|s| s.0).sum();
        let trials: u64 = slots.iter().map(|s| s.1).sum();
        let var = expected * (1.0 - expected);
        let worst_slot_z = slots
            .iter()
            .map(|&(h, t)| (h as f64 / t as f64 - expected).abs() / (var / t as f64).sqrt())
            .fold(0.0, f64::max);
        Self {
            name,
            expected,
            pooled: hits as f64 / trials as f64,
            sigma: (var / trials as f64).sqrt(),
            worst_slot_z,
        }
    }

    fn uniform(name: &'static str, expected: f64, hits: &[u64]) -> Self {
        let slots: Vec<(u64, u64)> = hits.iter().map(|&h| (h, SAMPLES)).collect();
        Self::new(name, expected, &slots)
    }

    pub fn passes(&self) -> bool {
        (self.pooled - self.expected).abs() <= 3.0 * self.sigma && self.worst_slot_z <= 4.0
    }
}

pub fn gnp_edges() -> Band {
    let (n, p) = (8, 0.3);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut hits = vec![0u64; pairs.len()];
    for seed in 0..SAMPLES {
        let g = sample_gnp(n, p, seed).unwrap();
        for (i, &(u, v)) in pairs.iter().enumerate() {
            hits[i] += u64::from(g.adjacent(u, v));
        }
    }
    Band::uniform("gnp edge", p, &hits)
}

/// Slot frequencies of the partitioned model on a double-edge pattern, so
/// both parallel slots of each pair are exercised; also checks that no
/// edge ever appears outside the blowup.
pub fn partitioned_slots() -> (Band, bool) {
    let (r, p) = (3, 0.4);
    let h = PatternGraph::from_edges(3, &[(0, 1), (0, 1), (1, 2)]).unwrap();
    let part = Partition::blocks(3, r);
    let mut hits = Vec::new();
    let mut slots = Vec::new();
    for ((a, b), m) in h.edges() {
        for &u in part.class(a) {
            for &v in part.class(b) {
                slots.push((u, v, m));
                hits.push(0u64);
            }
        }
    }
    let mut contained = true;
    for seed in 0..SAMPLES {
        let g = sample_partitioned(&h, r, p, seed).unwrap();
        for ((u, v), m) in g.edges() {
            let (a, b) = (part.class_of(u), part.class_of(v));
            contained &= m <= h.multiplicity(a, b);
        }
        for (i, &(u, v, _)) in slots.iter().enumerate() {
            hits[i] += u64::from(g.multiplicity(u, v));
        }
    }
    // each parallel slot is its own Bernoulli trial
    let per_slot: Vec<(u64, u64)> = slots
        .iter()
        .zip(&hits)
        .map(|(&(_, _, m), &h)| (h, SAMPLES * u64::from(m)))
        .collect();
    let band = Band::new("partitioned slot", p, &per_slot);
    (band, contained)
}

/// Arc presence and, given presence, orientation of D(n, p).
pub fn digraph_arcs() -> (Band, Band) {
    let (n, p) = (7, 0.6);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut present = vec![0u64; pairs.len()];
    let mut forward = vec![0u64; pairs.len()];
    for seed in 0..SAMPLES {
        let d = sample_dnp(n, p, seed).unwrap();
        for (i, &(u, v)) in pairs.iter().enumerate() {
            let (f, b) = (d.multiplicity(u, v) > 0, d.multiplicity(v, u) > 0);
            assert!(!(f && b), "both orientations of one pair");
            present[i] += u64::from(f || b);
            forward[i] += u64::from(f);
        }
    }
    let presence = Band::uniform("digraph arc", p, &present);
    // orientation is tested unconditionally: Pr[u -> v] = p / 2
    let direction = Band::uniform("digraph direction", p / 2.0, &forward);
    (presence, direction)
}

/// Slots of the oriented restriction of D(n, p) onto a transitive triangle.
pub fn orient_restrict_slots() -> Band {
    let (r, p) = (3, 0.5);
    let h = PatternGraph::from_arcs(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
    let part = Partition::blocks(3, r);
    let slots: Vec<(usize, usize)> = h
        .edges()
        .flat_map(|((a, b), _)| {
            let part = &part;
            part.class(a).iter().flat_map(move |&u| part.class(b).iter().map(move |&v| (u, v)))
        })
        .collect();
    let mut hits = vec![0u64; slots.len()];
    for seed in 0..SAMPLES {
        let d = sample_dnp(3 * r, p, seed).unwrap();
        let g = orient_restrict(&d, &h, &part).unwrap();
        for (i, &(u, v)) in slots.iter().enumerate() {
            hits[i] += u64::from(g.multiplicity(u, v) > 0);
        }
    }
    Band::uniform("orient_restrict slot", p / 2.0, &hits)
}
