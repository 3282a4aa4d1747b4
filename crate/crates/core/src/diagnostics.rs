//! Exact factor weights and the numeric side of the counting argument:
//! w(Z) = Φ(G - Z), per-vertex factor entropies with the Shearer-type
//! bound, copy degrees against their expectation, and the max/median
//! weight condition over role-deficient sets.
//!
//! Throughout, `k` is the pattern's role count, `n` the host's vertex
//! count and `r = n / k` the class size of the partitioned host.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::factor::{FactorCounter, FactorError};
use crate::graph::{HostGraph, Partition, PatternGraph};

/// Slack allowed in the entropy inequality.
pub const SHEARER_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagError {
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error("diagnostics need a partitioned host")]
    NotPartitioned,
    #[error("the set must take one vertex from each of {expected} distinct classes")]
    BadSet { expected: usize },
    #[error("class {0} does not exist")]
    BadClass(usize),
    #[error("the host has no factor")]
    NoFactor,
    #[error("p must lie in (0, 1], got {0}")]
    BadProbability(f64),
}

fn serialize_big<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn to_f64(v: &BigUint) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY)
}

/// Factor weights of a partitioned host, memoized across queries.
pub struct WeightTable {
    counter: FactorCounter,
    partition: Partition,
    phi: BigUint,
}

impl WeightTable {
    pub fn new(g: &HostGraph, h: &PatternGraph) -> Result<Self, DiagError> {
        let partition = g.partition().ok_or(DiagError::NotPartitioned)?.clone();
        let mut counter = FactorCounter::new(g, h)?;
        let phi = counter.count();
        Ok(Self {
            counter,
            partition,
            phi,
        })
    }

    pub fn phi(&self) -> &BigUint {
        &self.phi
    }

    pub fn role_count(&self) -> usize {
        self.partition.class_count()
    }

    pub fn vertex_count(&self) -> usize {
        self.counter.vertex_count()
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn counter(&self) -> &FactorCounter {
        &self.counter
    }

    /// Classes hit by `z`, if it has at most one vertex per class.
    fn classes_of(&self, z: &[usize]) -> Option<Vec<usize>> {
        let mut hit = vec![false; self.role_count()];
        let mut out = Vec::with_capacity(z.len());
        for &v in z {
            if v >= self.vertex_count() {
                return None;
            }
            let c = self.partition.class_of(v);
            if hit[c] {
                return None;
            }
            hit[c] = true;
            out.push(c);
        }
        Some(out)
    }

    fn mask(z: &[usize]) -> u32 {
        z.iter().fold(0, |m, &v| m | (1 << v))
    }

    /// w(Z) for a transversal Z; for Y missing one class, the sum of
    /// w(Y + v) over v in that class.
    pub fn w(&mut self, z: &[usize]) -> Result<BigUint, DiagError> {
        let k = self.role_count();
        let bad = DiagError::BadSet { expected: k };
        self.classes_of(z).ok_or(bad.clone())?;
        if z.len() == k {
            return Ok(self.counter.count_avoiding(Self::mask(z)));
        }
        if z.len() + 1 != k {
            return Err(bad);
        }
        Ok(self.completions(z)?.into_iter().sum())
    }

    /// w(Y + v) for each v of the class Y misses, in class order.
    pub fn completions(&mut self, y: &[usize]) -> Result<Vec<BigUint>, DiagError> {
        let k = self.role_count();
        let classes = self
            .classes_of(y)
            .filter(|c| c.len() + 1 == k)
            .ok_or(DiagError::BadSet { expected: k - 1 })?;
        let missing = (0..k).find(|c| !classes.contains(c)).expect("one class is missing");
        let base = Self::mask(y);
        let members = self.partition.class(missing).to_vec();
        Ok(members
            .into_iter()
            .map(|v| self.counter.count_avoiding(base | (1 << v)))
            .collect())
    }

    /// w(V(K)) for every copy K, in copy order.
    pub fn copy_weights(&mut self) -> Vec<BigUint> {
        (0..self.counter.copies().len())
            .map(|i| {
                let m = self.counter.copy_mask(i);
                self.counter.count_avoiding(m)
            })
            .collect()
    }

    /// Entropy (natural log) of the copy covering `y` in a uniformly random
    /// factor.
    pub fn entropy(&mut self, y: usize) -> Result<f64, DiagError> {
        if self.phi.is_zero() {
            return Err(DiagError::NoFactor);
        }
        if y >= self.vertex_count() {
            return Err(DiagError::BadSet { expected: 1 });
        }
        let phi = to_f64(&self.phi);
        let through = self.counter.through(y).to_vec();
        let mut h = 0.0;
        for i in through {
            let m = self.counter.copy_mask(i);
            let w = to_f64(&self.counter.count_avoiding(m));
            if w > 0.0 {
                let q = w / phi;
                h -= q * q.ln();
            }
        }
        Ok(h.max(0.0))
    }
}

pub fn weight_w(g: &HostGraph, h: &PatternGraph, z: &[usize]) -> Result<BigUint, DiagError> {
    WeightTable::new(g, h)?.w(z)
}

pub fn factor_entropy(g: &HostGraph, h: &PatternGraph, y: usize) -> Result<f64, DiagError> {
    WeightTable::new(g, h)?.entropy(y)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShearerCheck {
    pub class: usize,
    /// ln Φ.
    pub lhs: f64,
    /// Sum of the entropies over the class.
    pub rhs: f64,
    pub holds: bool,
}

/// ln Φ(G) against the sum of factor entropies over one class.
pub fn shearer_check(g: &HostGraph, h: &PatternGraph, class: usize) -> Result<ShearerCheck, DiagError> {
    let mut table = WeightTable::new(g, h)?;
    shearer_with(&mut table, class)
}

pub fn shearer_with(table: &mut WeightTable, class: usize) -> Result<ShearerCheck, DiagError> {
    if class >= table.role_count() {
        return Err(DiagError::BadClass(class));
    }
    if table.phi().is_zero() {
        return Err(DiagError::NoFactor);
    }
    let lhs = to_f64(table.phi()).ln();
    let members = table.partition().class(class).to_vec();
    let mut rhs = 0.0;
    for y in members {
        rhs += table.entropy(y)?;
    }
    Ok(ShearerCheck {
        class,
        lhs,
        rhs,
        holds: lhs <= rhs + SHEARER_SLACK,
    })
}

/// A role-deficient set whose largest completion weight beats both
/// `n^{-2(k-1)} Φ` and twice the lower median.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CViolation {
    pub y: Vec<usize>,
    #[serde(serialize_with = "serialize_big")]
    pub max: BigUint,
    #[serde(serialize_with = "serialize_big")]
    pub median: BigUint,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyReport {
    #[serde(serialize_with = "serialize_big")]
    pub phi: BigUint,
    /// ln Φ, absent when Φ = 0.
    pub log_phi: Option<f64>,
    /// (k-1) r ln n + h r ln p.
    pub a_reference: f64,
    /// ln Φ minus the reference; the unspecified O(n) slack is left to the
    /// reader.
    pub a_gap: Option<f64>,
    /// r^{k-1} p^h.
    pub d_p: f64,
    /// D(x, G) per host vertex.
    pub copy_degrees: Vec<usize>,
    pub d_deviation_max: f64,
    /// Max over copies of w(V(K)) divided by the mean; absent when Φ = 0.
    pub maxr_w: Option<f64>,
    pub c_sets_checked: usize,
    pub c_violations: Vec<CViolation>,
}

/// Lower median of a multiset.
pub fn lower_median(values: &[BigUint]) -> BigUint {
    let mut v = values.to_vec();
    v.sort();
    if v.is_empty() {
        return BigUint::zero();
    }
    v[(v.len() - 1) / 2].clone()
}

/// All sets with one vertex from each class except `skip`.
fn deficient_sets(part: &Partition, skip: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for c in 0..part.class_count() {
        if c == skip {
            continue;
        }
        out = out
            .into_iter()
            .flat_map(|prefix| {
                part.class(c).iter().map(move |&v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    out
}

pub fn property_report(g: &HostGraph, h: &PatternGraph, p: f64) -> Result<PropertyReport, DiagError> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(DiagError::BadProbability(p));
    }
    let mut table = WeightTable::new(g, h)?;
    let n = table.vertex_count();
    let k = table.role_count();
    let r = table.partition().class_size();
    let e = h.edge_count();
    let phi = table.phi().clone();
    let nf = n as f64;

    let log_phi = (!phi.is_zero()).then(|| to_f64(&phi).ln());
    let a_reference = (k as f64 - 1.0) * r as f64 * nf.ln() + (e as f64) * r as f64 * p.ln();
    let d_p = (r as f64).powi(k as i32 - 1) * p.powi(e as i32);
    let copy_degrees: Vec<usize> = (0..n).map(|x| table.counter().through(x).len()).collect();
    let d_deviation_max = copy_degrees
        .iter()
        .map(|&d| (d as f64 - d_p).abs() / d_p)
        .fold(0.0, f64::max);

    let maxr_w = if phi.is_zero() {
        None
    } else {
        let weights = table.copy_weights();
        let total: BigUint = weights.iter().sum();
        let max = weights.iter().max().cloned().unwrap_or_default();
        // max / (total / count)
        Some(to_f64(&(max * weights.len())) / to_f64(&total))
    };

    let scale = BigUint::from(n).pow(2 * (k as u32 - 1));
    let mut c_violations = Vec::new();
    let mut c_sets_checked = 0;
    for skip in 0..k {
        for y in deficient_sets(table.partition(), skip) {
            let ws = table.completions(&y)?;
            c_sets_checked += 1;
            let max = ws.iter().max().cloned().unwrap_or_default();
            let median = lower_median(&ws);
            if &max * &scale > phi && max > &median * 2u32 {
                c_violations.push(CViolation { y, max, median });
            }
        }
    }

    Ok(PropertyReport {
        a_gap: log_phi.map(|l| l - a_reference),
        phi,
        log_phi,
        a_reference,
        d_p,
        copy_degrees,
        d_deviation_max,
        maxr_w,
        c_sets_checked,
        c_violations,
    })
}
