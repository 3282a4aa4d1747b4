//! Monte Carlo estimates of factor probabilities, half-point bisection
//! and scaling studies.
//!
//! Trial `i` always uses the seed derived from (master seed, i), whatever
//! `n` or `p` is, so success indicators are coupled across `p` and the
//! estimated curve is non-decreasing in `p`. Trials run in parallel and
//! are aggregated in index order.

use num_traits::Float;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

use crate::density::{density_report, threshold_descriptor};
use crate::factor::{find_factor, two_phase_factor, FactorError, Search, TwoPhaseOptions, TwoPhaseOutcome};
use crate::graph::{write_pattern, PatternGraph};
use crate::random::{sample_dnp, sample_gnp, sample_partitioned, trial_seed, Model, SampleError};
use crate::scalar::ratio_to_f64;

pub const CSV_HEADER: &str = "n,p,trials,successes,budget,phat,lo,hi";
pub const DEFAULT_DEPTH: u32 = 8;
pub const CONFIDENCE: f64 = 0.99;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error("every one of the {trials} trials at n = {n}, p = {p} exhausted the search budget")]
    AllBudget { n: usize, p: f64, trials: u64 },
    #[error("need at least one trial")]
    NoTrials,
    #[error("the {0} model does not fit this pattern")]
    ModelMismatch(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    TwoPhase,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::TwoPhase => "two_phase",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub pattern: PatternGraph,
    pub model: Model,
    pub method: Method,
    pub trials: u64,
    pub budget: u64,
    pub master_seed: u64,
}

impl SimConfig {
    pub fn new(pattern: &PatternGraph, trials: u64, master_seed: u64) -> Self {
        Self {
            pattern: pattern.clone(),
            model: Model::Gnp,
            method: Method::Exact,
            trials,
            budget: crate::factor::DEFAULT_BUDGET,
            master_seed,
        }
    }
}

/// One row of a threshold curve.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveRow {
    pub n: usize,
    pub p: f64,
    pub trials: u64,
    pub successes: u64,
    pub budget_exhausted: u64,
    pub p_hat: f64,
    pub lo: f64,
    pub hi: f64,
}

impl CurveRow {
    pub fn failures(&self) -> u64 {
        self.trials - self.successes - self.budget_exhausted
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{:.6},{:.6},{:.6}",
            self.n, self.p, self.trials, self.successes, self.budget_exhausted, self.p_hat, self.lo, self.hi
        )
    }
}

/// Two-sided normal quantile for the given confidence.
pub fn z_score(confidence: f64) -> f64 {
    Normal::standard().inverse_cdf(0.5 + confidence / 2.0)
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval<F: Float>(successes: u64, trials: u64, z: F) -> (F, F) {
    if trials == 0 {
        return (F::zero(), F::one());
    }
    let n = F::from(trials).unwrap();
    let phat = F::from(successes).unwrap() / n;
    let two = F::from(2.0).unwrap();
    let four = F::from(4.0).unwrap();
    let z2 = z * z;
    let denom = F::one() + z2 / n;
    let centre = (phat + z2 / (two * n)) / denom;
    let half = z * ((phat * (F::one() - phat) / n) + z2 / (four * n * n)).sqrt() / denom;
    let lo = if successes == 0 { F::zero() } else { (centre - half).max(F::zero()) };
    let hi = if successes == trials { F::one() } else { (centre + half).min(F::one()) };
    (lo, hi)
}

enum Trial {
    Success,
    Failure,
    Budget,
}

fn run_trial(cfg: &SimConfig, n: usize, p: f64, seed: u64) -> Result<Trial, SimError> {
    let h = &cfg.pattern;
    let host = match cfg.model {
        Model::Gnp => sample_gnp(n, p, seed)?,
        Model::Digraph => sample_dnp(n, p, seed)?,
        Model::Partitioned => {
            let k = h.vertex_count();
            if k == 0 || !n.is_multiple_of(k) {
                return Err(FactorError::Divisibility { host: n, pattern: k }.into());
            }
            sample_partitioned(h, n / k, p, seed)?
        }
    };
    Ok(match cfg.method {
        Method::Exact => match find_factor(&host, h, cfg.budget)? {
            Search::Found(_) => Trial::Success,
            Search::Absent => Trial::Failure,
            Search::Budget => Trial::Budget,
        },
        Method::TwoPhase => {
            if cfg.model != Model::Gnp {
                return Err(SimError::ModelMismatch(cfg.model.as_str()));
            }
            let opts = TwoPhaseOptions {
                split: crate::factor::SplitMode::Overlapping(Some(p)),
                ..TwoPhaseOptions::new(seed ^ 0x7477_6f70_6861_7365, cfg.budget)
            };
            match two_phase_factor(&host, h, &opts)? {
                TwoPhaseOutcome::Found(_) => Trial::Success,
                TwoPhaseOutcome::Absent { .. } => Trial::Failure,
                TwoPhaseOutcome::Budget { .. } => Trial::Budget,
            }
        }
    })
}

/// Success probability of the configured search at (n, p). Trials whose
/// search ran out of budget are left out of `p_hat` and counted apart.
pub fn estimate_success_prob(cfg: &SimConfig, n: usize, p: f64) -> Result<CurveRow, SimError> {
    if cfg.trials == 0 {
        return Err(SimError::NoTrials);
    }
    let k = cfg.pattern.vertex_count();
    if k == 0 || !n.is_multiple_of(k) {
        return Err(FactorError::Divisibility { host: n, pattern: k }.into());
    }
    let outcomes: Vec<Trial> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(cfg, n, p, trial_seed(cfg.master_seed, i)))
        .collect::<Result<_, _>>()?;
    let successes = outcomes.iter().filter(|t| matches!(t, Trial::Success)).count() as u64;
    let budget_exhausted = outcomes.iter().filter(|t| matches!(t, Trial::Budget)).count() as u64;
    let decided = cfg.trials - budget_exhausted;
    if decided == 0 {
        return Err(SimError::AllBudget {
            n,
            p,
            trials: cfg.trials,
        });
    }
    let (lo, hi) = wilson_interval(successes, decided, z_score(CONFIDENCE));
    Ok(CurveRow {
        n,
        p,
        trials: cfg.trials,
        successes,
        budget_exhausted,
        p_hat: successes as f64 / decided as f64,
        lo,
        hi,
    })
}

/// Bracket around the p at which the estimated success probability
/// crosses one half.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HalfPoint {
    pub n: usize,
    pub lo: f64,
    pub hi: f64,
    pub p50: f64,
    /// The estimate was already at least one half at the smallest probe,
    /// so `hi` is only an upper bound and the half point may be lower.
    pub lower_bound: bool,
    /// Even p = 1 stayed below one half.
    pub non_bracketing: bool,
    pub rows: Vec<CurveRow>,
}

pub fn bisect_half_point(cfg: &SimConfig, n: usize, depth: u32) -> Result<HalfPoint, SimError> {
    let mut rows = Vec::new();
    let top = estimate_success_prob(cfg, n, 1.0)?;
    let non_bracketing = top.p_hat < 0.5;
    rows.push(top);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    if !non_bracketing {
        for _ in 0..depth {
            let mid = (lo + hi) / 2.0;
            let row = estimate_success_prob(cfg, n, mid)?;
            if row.p_hat >= 0.5 {
                hi = mid;
            } else {
                lo = mid;
            }
            rows.push(row);
        }
    }
    Ok(HalfPoint {
        n,
        lo,
        hi,
        p50: (lo + hi) / 2.0,
        lower_bound: !non_bracketing && lo == 0.0,
        non_bracketing,
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingFit {
    /// Least-squares slope of ln p50 against ln n.
    pub slope: f64,
    pub intercept: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingStudy {
    pub points: Vec<HalfPoint>,
    pub fit: Option<ScalingFit>,
    /// Threshold formula of the pattern, when it has one.
    pub formula: Option<String>,
    /// p50 / (n^a (log n)^b) per n.
    pub ratio_with_log: Vec<f64>,
    /// p50 / n^a per n.
    pub ratio_without_log: Vec<f64>,
}

impl ScalingStudy {
    pub fn rows(&self) -> impl Iterator<Item = &CurveRow> {
        self.points.iter().flat_map(|p| p.rows.iter())
    }
}

/// Ordinary least squares of y on x.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> Option<ScalingFit> {
    let k = xs.len();
    if k < 2 || ys.len() != k {
        return None;
    }
    let kf = k as f64;
    let mx = xs.iter().sum::<f64>() / kf;
    let my = ys.iter().sum::<f64>() / kf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Some(ScalingFit {
        slope,
        intercept: my - slope * mx,
    })
}

pub fn scaling_study(cfg: &SimConfig, n_list: &[usize], depth: u32) -> Result<ScalingStudy, SimError> {
    let points = n_list
        .iter()
        .map(|&n| bisect_half_point(cfg, n, depth))
        .collect::<Result<Vec<_>, _>>()?;
    let xs: Vec<f64> = points.iter().map(|p| (p.n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.p50.ln()).collect();
    let fit = least_squares(&xs, &ys);

    let descriptor = if cfg.pattern.is_directed() {
        None
    } else {
        density_report::<i64>(&cfg.pattern)
            .ok()
            .and_then(|r| threshold_descriptor(&r).ok())
    };
    let (formula, ratio_with_log, ratio_without_log) = match &descriptor {
        Some(t) => {
            let a = ratio_to_f64(&t.density_exponent);
            (
                Some(t.formula()),
                points.iter().map(|p| p.p50 / t.evaluate(p.n as f64)).collect(),
                points.iter().map(|p| p.p50 / (p.n as f64).powf(a)).collect(),
            )
        }
        None => (None, Vec::new(), Vec::new()),
    };
    Ok(ScalingStudy {
        points,
        fit,
        formula,
        ratio_with_log,
        ratio_without_log,
    })
}

pub fn curve_csv<'a>(rows: impl IntoIterator<Item = &'a CurveRow>) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_line());
        out.push('\n');
    }
    out
}

/// SHA-256 of the pattern's canonical text form.
pub fn pattern_hash(h: &PatternGraph) -> String {
    hex::encode(Sha256::digest(write_pattern(h).as_bytes()))
}

/// Metadata sidecar for a curve.
pub fn metadata(cfg: &SimConfig) -> serde_json::Value {
    serde_json::json!({
        "pattern_hash": pattern_hash(&cfg.pattern),
        "seed": cfg.master_seed,
        "version": env!("CARGO_PKG_VERSION"),
        "model": cfg.model.as_str(),
        "method": cfg.method.as_str(),
        "trials": cfg.trials,
        "budget": cfg.budget,
        "confidence": CONFIDENCE,
    })
}
