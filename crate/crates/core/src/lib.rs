//! H-factors in random graphs: density analysis, the vertex-collapsing
//! process, seeded random models, exact factor search and counting, proof
//! diagnostics, and Monte Carlo threshold estimation.
//!
//! Exact quantities are `Ratio<T>` over any [`ExactInt`]; the crate root
//! fixes [`Rational`] (arbitrary precision) and [`Rational64`] for callers
//! that do not care.

pub mod collapse;
pub mod corpus;
pub mod density;
pub mod diagnostics;
pub mod factor;
pub mod graph;
pub mod random;
pub mod scalar;
pub mod sim;

pub use collapse::{collapse_full, collapse_full_with, collapse_step, CollapseError, CollapseStep, CollapseTrace, WitnessOrder};
pub use density::{
    density_d, density_report, max_density, threshold_descriptor, BalanceClass, DensityError,
    DensityReport, DensityWitness, ThresholdDescriptor, ThresholdStatus,
};
pub use factor::{
    check_th2, count_factors, enumerate_copies, find_factor, partial_factor, two_phase_factor,
    validate_factor, CopyIndex, FactorAssignment, FactorError, Search,
};
pub use graph::{
    are_isomorphic, blowup_pattern, induced_subgraph, parse_graph, parse_host, parse_pattern,
    Blowup, EdgeSlot, GraphError, GraphKind, HostGraph, Partition, PatternGraph,
};
pub use scalar::ExactInt;

pub type Rational = num_rational::Ratio<num_bigint::BigInt>;
pub type Rational64 = num_rational::Ratio<i64>;
pub use sim::{
    bisect_half_point, curve_csv, estimate_success_prob, scaling_study, wilson_interval, CurveRow, HalfPoint,
    Method, ScalingStudy, SimConfig, SimError,
};
