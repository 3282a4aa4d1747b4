mod common;

use common::batteries::*;
use hfactor::random::{sample, trial_seed, Model, SampleSpec};

#[test]
fn gnp_edge_frequency() {
    let b = gnp_edges();
    assert!(b.passes(), "{b:?}");
}

#[test]
fn partitioned_slot_frequency() {
    let (b, contained) = partitioned_slots();
    assert!(contained, "edge outside the blowup");
    assert!(b.passes(), "{b:?}");
}

#[test]
fn digraph_presence_and_direction() {
    let (presence, direction) = digraph_arcs();
    assert!(presence.passes(), "{presence:?}");
    assert!(direction.passes(), "{direction:?}");
}

#[test]
fn orient_restrict_is_half_density() {
    let b = orient_restrict_slots();
    assert!(b.passes(), "{b:?}");
}

#[test]
fn trial_seeds_are_distinct_and_stable() {
    let seeds: std::collections::BTreeSet<u64> = (0..10_000).map(|i| trial_seed(42, i)).collect();
    assert_eq!(seeds.len(), 10_000);
    assert_eq!(trial_seed(42, 7), trial_seed(42, 7));
    assert_ne!(trial_seed(42, 7), trial_seed(43, 7));
}

#[test]
fn spec_dispatch_matches_direct_samplers() {
    let a = sample(&SampleSpec::gnp(12, 0.4, 9)).unwrap();
    let b = hfactor::random::sample_gnp(12, 0.4, 9).unwrap();
    assert_eq!(a.edges().collect::<Vec<_>>(), b.edges().collect::<Vec<_>>());
    let d = sample(&SampleSpec::digraph(12, 0.4, 9)).unwrap();
    assert!(d.is_directed());
    assert_eq!("digraph".parse::<Model>().unwrap(), Model::Digraph);
}
