mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use spnet::density::{monotone_invariance_report, EdgeRanking};
use spnet::generators::{random_graph, rewire, ring_lattice};
use spnet::modularity::canonical_assignment;
use spnet::{
    density_integrated_metric, density_threshold, global_efficiency, greedy_modularity, newman_q,
    BinaryGraph, Error, Metric, SquareMatrix, WeightedGraph,
};

fn arb_weighted() -> impl Strategy<Value = WeightedGraph> {
    (3usize..12).prop_flat_map(|n| {
        // few distinct levels so that ties are common
        prop::collection::vec(
            prop_oneof![
                Just(0.0),
                (1u8..6).prop_map(|l| l as f64 / 5.0),
                0.01f64..1.0
            ],
            n * (n - 1) / 2,
        )
        .prop_map(move |u| {
            WeightedGraph::new(SquareMatrix::from_upper_triangle(n, &u).unwrap()).unwrap()
        })
    })
}

#[test]
fn ties_break_on_node_pairs() {
    let g = WeightedGraph::new(SquareMatrix::constant_hollow(4, 0.5)).unwrap();
    assert_eq!(
        density_threshold(&g, 3).unwrap().edges(),
        vec![(0, 1), (0, 2), (0, 3)]
    );
    let profile = density_integrated_metric(&g, global_efficiency, None).unwrap();
    let again = density_integrated_metric(&g, global_efficiency, None).unwrap();
    assert_eq!(profile.integrated.to_bits(), again.integrated.to_bits());
    assert_eq!(profile.densities, (1..=6).collect::<Vec<_>>());
}

#[test]
fn density_grid_validation() {
    let g = WeightedGraph::new(SquareMatrix::from_upper_triangle(3, &[0.3, 0.0, 0.2]).unwrap())
        .unwrap();
    assert!(density_threshold(&g, 3).is_err());
    let r = EdgeRanking::of(&g);
    assert!(r
        .profile(global_efficiency, Some(&[1, 2]), Some(&[0.5, 0.6]))
        .is_err());
    let p = r
        .profile(global_efficiency, Some(&[1, 2]), Some(&[0.25, 0.75]))
        .unwrap();
    // k=1: one edge, 1/3; k=2: path, (2 + 2 + 1) / 6
    assert!((p.integrated - (0.25 / 3.0 + 0.75 * 5.0 / 6.0)).abs() < 1e-15);
}

#[test]
fn non_monotone_transform_is_rejected() {
    let g = WeightedGraph::new(SquareMatrix::from_upper_triangle(3, &[0.2, 0.5, 0.9]).unwrap())
        .unwrap();
    let r = monotone_invariance_report(&g, |w| (w - 0.5).powi(2), global_efficiency);
    assert!(matches!(r, Err(Error::Precondition(_))));
}

#[test]
fn two_triangles_and_cliques() {
    let g = BinaryGraph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
    let p = greedy_modularity(&g).unwrap();
    assert_eq!(p.module_count, 2);
    assert!((p.q - 0.5).abs() < 1e-12);
    assert!((oracle_max_q(&g) - 0.5).abs() < 1e-12);

    for (c, size) in [(2, 3), (3, 3), (2, 4), (3, 4)] {
        let edges = (0..c).flat_map(|k| {
            (0..size).flat_map(move |a| (a + 1..size).map(move |b| (k * size + a, k * size + b)))
        });
        let g = BinaryGraph::from_edges(c * size, edges).unwrap();
        let p = greedy_modularity(&g).unwrap();
        assert_eq!(p.module_count, c);
        // no clique is split
        for k in 0..c {
            let id = p.assignment[k * size];
            assert!((0..size).all(|a| p.assignment[k * size + a] == id));
        }
    }
    assert!(matches!(
        greedy_modularity(&BinaryGraph::empty(4)),
        Err(Error::Domain(_))
    ));
}

#[test]
fn greedy_is_bounded_by_exhaustive_optimum() {
    let mut r = rng(20);
    for _ in 0..60 {
        let n = r.random_range(2..=8);
        let p = r.random_range(0.2..0.8);
        let g = random_binary(&mut r, n, p);
        if g.edge_count() == 0 {
            continue;
        }
        let p = greedy_modularity(&g).unwrap();
        assert!((p.q - oracle_q(&g, &p.assignment)).abs() < 1e-12);
        assert!(p.q <= oracle_max_q(&g) + 1e-12);
    }
}

#[test]
fn generator_contracts() {
    assert_eq!(ring_lattice(112, 2100).unwrap().edge_count(), 2100);
    assert!(random_graph(10, 45, 3).unwrap().is_complete());
    assert!(matches!(random_graph(10, 46, 3), Err(Error::Domain(_))));
    assert!(rewire(&BinaryGraph::complete(5), 1, 0).is_err());
    let c6 = ring_lattice(6, 6).unwrap();
    assert_eq!(rewire(&c6, 0, 9).unwrap(), c6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn thresholds_are_nested(g in arb_weighted()) {
        let k_max = g.positive_edge_count();
        for k in 0..k_max {
            let small = density_threshold(&g, k).unwrap();
            let large = density_threshold(&g, k + 1).unwrap();
            prop_assert_eq!(small.edge_count(), k);
            for (i, j) in small.edges() {
                prop_assert!(large.has_edge(i, j));
            }
        }
    }

    #[test]
    fn selected_edges_dominate_the_rest(g in arb_weighted(), k in 0usize..20) {
        let k = k.min(g.positive_edge_count());
        let chosen = density_threshold(&g, k).unwrap();
        let min_in = chosen.edges().iter().map(|&(i, j)| g.weight(i, j)).fold(f64::INFINITY, f64::min);
        for (i, j) in g.positive_edges() {
            if !chosen.has_edge(i, j) {
                prop_assert!(g.weight(i, j) <= min_in);
            }
        }
    }

    #[test]
    fn monotone_maps_preserve_profiles(g in arb_weighted(), which in 0usize..4) {
        prop_assume!(g.positive_edge_count() > 0);
        let h: fn(f64) -> f64 = [|w: f64| 2.0 * w, |w: f64| w.powi(3), f64::exp, |w: f64| -w][which];
        let r = monotone_invariance_report(&g, h, |b| Metric::GlobalEfficiency.evaluate(b)).unwrap();
        prop_assert!(r.edge_sets_match());
        prop_assert!(r.holds());
    }

    #[test]
    fn greedy_q_is_recomputable(seed in any::<u64>(), n in 2usize..16) {
        let mut r = rng(seed);
        let g = random_binary(&mut r, n, 0.4);
        prop_assume!(g.edge_count() > 0);
        let p = greedy_modularity(&g).unwrap();
        prop_assert!((p.q - newman_q(&g, &p.assignment).unwrap()).abs() < 1e-12);
        prop_assert_eq!(canonical_assignment(&p.assignment), p.assignment.clone());
        prop_assert_eq!(p.module_count, p.assignment.iter().max().unwrap() + 1);
        prop_assert!((-1.0..=1.0).contains(&p.q));
    }

    #[test]
    fn modularity_ignores_relabeling(seed in any::<u64>(), n in 2usize..14) {
        let mut r = rng(seed);
        let g = random_binary(&mut r, n, 0.4);
        prop_assume!(g.edge_count() > 0);
        let p = greedy_modularity(&g).unwrap();
        let perm: Vec<usize> = (0..n).rev().collect();
        let relabeled: Vec<usize> = (0..n).map(|v| p.assignment[perm[v]]).collect();
        let gp = g.permuted(&perm);
        prop_assert!((newman_q(&gp, &relabeled).unwrap() - p.q).abs() < 1e-12);
    }

    #[test]
    fn rewiring_keeps_edge_count(n in 4usize..30, frac in 0.05f64..0.95, steps in 0usize..200, seed in any::<u64>()) {
        let max = n * (n - 1) / 2;
        let e = ((max as f64 * frac) as usize).clamp(1, max - 1);
        let g = ring_lattice(n, e).unwrap();
        let h = rewire(&g, steps, seed).unwrap();
        prop_assert_eq!(h.edge_count(), e);
        prop_assert!((0..n).all(|v| !h.has_edge(v, v)));
        prop_assert_eq!(h.clone(), rewire(&g, steps, seed).unwrap());
    }
}
