use hfactor::collapse::{collapse_full, collapse_full_with, WitnessOrder};
use hfactor::density::{density_report, max_density, threshold_descriptor, BalanceClass};
use hfactor::factor::{count_factors, find_factor, Search};
use hfactor::graph::{are_isomorphic, parse_host, parse_pattern, write_host, write_pattern, HostGraph, PatternGraph};
use hfactor::random::{sample_gnp, sample_partitioned, split_edges, split_overlapping};
use hfactor::sim::wilson_interval;
use hfactor::Rational64;
use proptest::prelude::*;

fn pattern(max_n: usize) -> impl Strategy<Value = PatternGraph> {
    (2usize..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        proptest::sample::subsequence(pairs.clone(), 1..=pairs.len())
            .prop_map(move |edges| PatternGraph::from_edges(n, &edges).unwrap())
    })
}

fn edges_of(g: &HostGraph) -> Vec<((usize, usize), u32)> {
    g.edges().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn text_round_trip(h in pattern(8), n in 2usize..12, p in 0.0f64..1.0, seed: u64) {
        prop_assert_eq!(parse_pattern(&write_pattern(&h)).unwrap(), h);
        let g = sample_gnp(n, p, seed).unwrap();
        let back = parse_host(&write_host(&g)).unwrap();
        prop_assert_eq!(edges_of(&back), edges_of(&g));
    }

    #[test]
    fn density_invariants(h in pattern(8)) {
        let r = density_report::<i64>(&h).unwrap();
        prop_assert!(r.d <= r.m);
        let whole = Rational64::new(h.edge_count() as i64, h.vertex_count() as i64 - 1);
        prop_assert_eq!(r.d == r.m, whole == r.m);
        if r.is_balanced() {
            prop_assert!(r.balance_class.is_vertex_balanced());
        }
        let t = threshold_descriptor(&r).unwrap();
        prop_assert_eq!(
            *t.log_exponent.numer() == 0,
            r.balance_class == BalanceClass::NonVertexBalanced
        );
        prop_assert_eq!(t.density_exponent, -r.m.recip());
    }

    #[test]
    fn collapse_lowers_density(h in pattern(8), seed: u64) {
        let r = density_report::<i64>(&h).unwrap();
        prop_assume!(r.balance_class == BalanceClass::NonVertexBalanced);
        let trace = collapse_full::<i64>(&h).unwrap();
        prop_assert!(!trace.steps.is_empty());
        prop_assert_eq!(trace.terminal.edge_count() + trace.h_prime.edge_count(), h.edge_count());
        if trace.terminal.vertex_count() >= 2 {
            prop_assert!(max_density::<i64>(&trace.terminal).unwrap().density < r.m);
        }
        let other = collapse_full_with::<i64>(&h, WitnessOrder::Random(seed)).unwrap();
        prop_assert!(are_isomorphic(&trace.terminal, &other.terminal).unwrap());
    }

    #[test]
    fn search_agrees_with_count(n in 1usize..=4, p in 0.2f64..0.9, seed: u64, which in 0usize..3) {
        let h = match which {
            0 => PatternGraph::complete(2),
            1 => PatternGraph::complete(3),
            _ => hfactor::corpus::triangle_plus_isolated(),
        };
        let g = sample_gnp(n * h.vertex_count(), p, seed).unwrap();
        let phi = count_factors(&g, &h).unwrap();
        match find_factor(&g, &h, 10_000_000).unwrap() {
            Search::Found(f) => {
                prop_assert!(phi > 0u32.into());
                prop_assert!(f.is_full());
            }
            Search::Absent => prop_assert_eq!(phi, 0u32.into()),
            Search::Budget => prop_assert!(false, "budget exhausted on a tiny host"),
        }
    }

    #[test]
    fn samplers_are_monotone_and_reproducible(n in 2usize..20, a in 0.0f64..1.0, b in 0.0f64..1.0, seed: u64) {
        let (lo, hi) = (a.min(b), a.max(b));
        let sparse = sample_gnp(n, lo, seed).unwrap();
        let dense = sample_gnp(n, hi, seed).unwrap();
        prop_assert!(sparse.edges().all(|((u, v), _)| dense.adjacent(u, v)));
        prop_assert_eq!(edges_of(&sample_gnp(n, lo, seed).unwrap()), edges_of(&sparse));

        let k3 = PatternGraph::complete(3);
        let sparse = sample_partitioned(&k3, 3, lo, seed).unwrap();
        let dense = sample_partitioned(&k3, 3, hi, seed).unwrap();
        prop_assert!(sparse.edges().all(|((u, v), _)| dense.adjacent(u, v)));
    }

    #[test]
    fn splits_cover_the_host(n in 2usize..20, p in 0.0f64..1.0, seed: u64, ways in 2usize..5) {
        let g = sample_gnp(n, p, seed).unwrap();
        let shares = split_edges(&g, ways, seed).unwrap();
        let total: u64 = shares.iter().map(|s| s.edge_count()).sum();
        prop_assert_eq!(total, g.edge_count());
        for ((u, v), _) in g.edges() {
            prop_assert_eq!(shares.iter().filter(|s| s.adjacent(u, v)).count(), 1);
        }
        let [x, y] = split_overlapping(&g, p, seed).unwrap();
        for ((u, v), _) in g.edges() {
            prop_assert!(x.adjacent(u, v) || y.adjacent(u, v));
        }
        prop_assert!(x.edges().chain(y.edges()).all(|((u, v), _)| g.adjacent(u, v)));
    }

    #[test]
    fn wilson_contains_estimate(trials in 1u64..5000, frac in 0.0f64..=1.0) {
        let s = (frac * trials as f64).floor() as u64;
        let (lo, hi) = wilson_interval(s, trials, 2.5758f64);
        let phat = s as f64 / trials as f64;
        prop_assert!(0.0 <= lo && lo <= phat + 1e-12 && phat <= hi + 1e-12 && hi <= 1.0);
    }
}
