mod common;

use std::collections::HashSet;

use indratio::graph::{self, named, Girth, Multigraph, Pairing, Point};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn double_factorial(m: u64) -> u64 {
    (1..=m).rev().step_by(2).product()
}

#[test]
fn enumeration_has_double_factorial_size_and_no_repeats() {
    for n in [2usize, 4] {
        let all = graph::all_pairings(n).unwrap();
        assert_eq!(all.len() as u64, double_factorial(3 * n as u64 - 1));
        let distinct: HashSet<_> = all.iter().map(Pairing::canonical).collect();
        assert_eq!(distinct.len(), all.len());
    }
}

#[test]
fn sampler_is_roughly_uniform_at_n2() {
    let all = graph::all_pairings(2).unwrap();
    let index: std::collections::HashMap<_, _> = all
        .iter()
        .enumerate()
        .map(|(i, p)| (p.canonical(), i))
        .collect();
    let trials = 30_000u64;
    let mut counts = vec![0u64; all.len()];
    for t in 0..trials {
        let mut rng = graph::trial_rng(5, t);
        let f = graph::sample_pairing_with(2, &mut rng).unwrap();
        counts[index[&f.canonical()]] += 1;
    }
    let expected = trials as f64 / all.len() as f64;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // 14 degrees of freedom; the 0.999 quantile is about 36.1.
    assert!(chi2 < 36.1, "chi-square {chi2} with counts {counts:?}");
}

#[test]
fn girth_matches_edge_removal_oracle_on_corpus() {
    for (name, g) in common::corpus() {
        let report = graph::girth(&g);
        let expected = common::brute_girth(&g).map_or(Girth::Infinite, Girth::Finite);
        assert_eq!(report.girth, expected, "{name}");
        if let Girth::Finite(len) = report.girth {
            assert_eq!(report.shortest_cycle.len() as u32, len, "{name}");
            assert!(graph::is_cycle_in(&g, &report.shortest_cycle), "{name}");
        }
        for k in 1..8 {
            assert_eq!(graph::girth_at_least(&g, k), expected.at_least(k), "{name} k={k}");
        }
    }
}

#[test]
fn named_graph_girths() {
    assert_eq!(graph::girth(&named::petersen()).girth, Girth::Finite(5));
    assert_eq!(graph::girth(&named::heawood()).girth, Girth::Finite(6));
    assert_eq!(graph::girth(&named::complete(4)).girth, Girth::Finite(3));
    assert_eq!(graph::girth(&named::path(6)).girth, Girth::Infinite);
}

#[test]
fn loops_and_parallel_edges_are_short_cycles() {
    let looped = Multigraph::from_edges(2, vec![(0, 0), (0, 1)]).unwrap();
    assert_eq!(graph::girth(&looped).girth, Girth::Finite(1));
    let doubled = Multigraph::from_edges(2, vec![(0, 1), (1, 0)]).unwrap();
    assert_eq!(graph::girth(&doubled).girth, Girth::Finite(2));
}

#[test]
fn survival_exponents_are_exact() {
    let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    assert_eq!(graph::girth_survival_exponent(3).unwrap(), r(2, 1));
    assert_eq!(graph::girth_survival_exponent(4).unwrap(), r(10, 3));
    assert_eq!(graph::girth_survival_exponent(5).unwrap(), r(16, 3));
    assert!((graph::girth_survival(3).unwrap() - (-2f64).exp()).abs() < 1e-15);
    assert!((graph::girth_survival(4).unwrap() - (-10f64 / 3.0).exp()).abs() < 1e-15);
    assert!(graph::girth_survival(2).is_err());
}

#[test]
fn survival_estimates_are_reproducible_and_order_free() {
    let a = graph::estimate_survival(40, 3, 300, 11).unwrap();
    let b = graph::estimate_survival(40, 3, 300, 11).unwrap();
    assert_eq!(a, b);
    let serial: u64 = (0..300)
        .map(|t| {
            let f = graph::sample_pairing_with(40, &mut graph::trial_rng(11, t)).unwrap();
            u64::from(graph::girth_at_least(&graph::project(&f), 3))
        })
        .sum();
    assert_eq!(a.hits, serial);
}

#[test]
fn rejection_sampler_respects_girth_and_cap() {
    let (f, attempts) = graph::sample_with_girth(20, 4, 3, 100_000).unwrap();
    assert!(attempts >= 1);
    assert!(graph::girth_at_least(&graph::project(&f), 4));
    match graph::sample_with_girth(4, 5, 3, 50) {
        Err(indratio::Error::RejectionCap { attempts, .. }) => assert_eq!(attempts, 50),
        other => panic!("expected a rejection cap, got {other:?}"),
    }
}

#[test]
fn invalid_orders_and_pairings_are_rejected() {
    assert!(graph::sample_pairing(3, 1).is_err());
    assert!(graph::sample_pairing(0, 1).is_err());
    let dup = vec![
        (Point::new(0, 0), Point::new(0, 1)),
        (Point::new(0, 0), Point::new(1, 0)),
        (Point::new(1, 1), Point::new(1, 2)),
    ];
    assert!(Pairing::new(2, dup).is_err());
    assert!(Multigraph::parse_edge_list("3 1\n1 4\n").is_err());
    assert!(Pairing::parse("2\n1 1 2 4\n").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_is_cubic_and_counts_edges(half in 1usize..40, seed in any::<u64>()) {
        let n = 2 * half;
        let f = graph::sample_pairing(n, seed).unwrap();
        let g = graph::project(&f);
        prop_assert_eq!(g.edges().len(), 3 * n / 2);
        prop_assert!(g.is_cubic());
        let mut used = vec![false; 3 * n];
        for &(p, q) in f.pairs() {
            for pt in [p, q] {
                let idx = 3 * pt.vertex + pt.slot as usize;
                prop_assert!(!used[idx]);
                used[idx] = true;
            }
        }
        prop_assert!(used.iter().all(|&u| u));
    }

    #[test]
    fn text_formats_round_trip(half in 1usize..30, seed in any::<u64>()) {
        let f = graph::sample_pairing(2 * half, seed).unwrap();
        prop_assert_eq!(Pairing::parse(&f.to_text()).unwrap(), f.clone());
        let g = graph::project(&f);
        prop_assert_eq!(Multigraph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn girth_agrees_with_oracle_on_small_pairings(half in 1usize..8, seed in any::<u64>()) {
        let g = graph::project(&graph::sample_pairing(2 * half, seed).unwrap());
        let expected = common::brute_girth(&g).map_or(Girth::Infinite, Girth::Finite);
        prop_assert_eq!(graph::girth(&g).girth, expected);
    }
}

#[test]
fn bundled_petersen_file_is_the_petersen_graph() {
    let text = include_str!("../data/petersen.txt");
    let g = Multigraph::parse_edge_list(text).unwrap();
    let mut a: Vec<_> = g.edges().iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    let mut b: Vec<_> = named::petersen().edges().iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    a.sort();
    b.sort();
    assert_eq!(a, b);
}
