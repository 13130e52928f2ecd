//! Property tests for the structural invariants: deletion monotonicity,
//! boundary partitions, walk-count bounds, and metric symmetries.

use proptest::prelude::*;

use katz_core::graph::{gen_erdos_renyi, remove_elements, split_boundary, Graph, RemovalSet};
use katz_core::katz::{choose_alpha, katz_unit_seed, Solver};
use katz_core::linalg::spmv;
use katz_core::metrics::intersection_similarity;
use katz_core::walks::{lost_walks_series, total_walks};

fn arb_graph() -> impl Strategy<Value = Graph> {
    (4usize..24, 0u64..500).prop_map(|(n, seed)| {
        let max_m = n * (n - 1) / 2;
        let m = (2 * n).min(max_m);
        gen_erdos_renyi(n, m, seed).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spmv_bilinear_form_is_symmetric(g in arb_graph(), seed in 0u64..1000) {
        use rand::{Rng, SeedableRng};
        let n = g.node_count();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let w: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let av = spmv(&g, &v).unwrap();
        let aw = spmv(&g, &w).unwrap();
        let left: f64 = v.iter().zip(&aw).map(|(a, b)| a * b).sum();
        let right: f64 = av.iter().zip(&w).map(|(a, b)| a * b).sum();
        prop_assert!((left - right).abs() < 1e-10);
    }

    #[test]
    fn node_removal_is_monotone_and_idempotent(g in arb_graph(), picks in proptest::collection::vec(0usize..24, 1..4)) {
        let n = g.node_count();
        let ids: Vec<usize> = picks.into_iter().map(|p| p % n).collect();
        let s = RemovalSet::nodes(ids).unwrap();
        let once = remove_elements(&g, &s).unwrap();
        let twice = remove_elements(&once, &s).unwrap();
        prop_assert_eq!(&once, &twice);
        for (u, v) in once.edges() {
            prop_assert!(g.has_edge(u, v));
        }
        prop_assert_eq!(once.node_count(), g.node_count());
    }

    #[test]
    fn boundary_partition_is_exact(g in arb_graph(), picks in proptest::collection::vec(0usize..24, 1..4)) {
        let n = g.node_count();
        let ids: Vec<usize> = picks.into_iter().map(|p| p % n).collect();
        let s = RemovalSet::nodes(ids).unwrap();
        let b = split_boundary(&g, &s).unwrap();
        let rest = remove_elements(&g, &s).unwrap();
        let mut union = b.internal.clone();
        union.extend(&b.crossing);
        union.extend(rest.edges());
        union.sort_unstable();
        let mut dedup = union.clone();
        dedup.dedup();
        prop_assert_eq!(&union, &dedup, "partition overlaps");
        prop_assert_eq!(union, g.edges());
    }

    #[test]
    fn lost_walks_never_exceed_totals(g in arb_graph(), picks in proptest::collection::vec(0usize..24, 1..4), as_edges in any::<bool>()) {
        let n = g.node_count();
        let set = if as_edges && g.edge_count() > 0 {
            let edges = g.edges();
            RemovalSet::edges(picks.into_iter().map(|p| edges[p % edges.len()]).collect()).unwrap()
        } else {
            RemovalSet::nodes(picks.into_iter().map(|p| p % n).collect()).unwrap()
        };
        let totals = total_walks(&g, 6).unwrap();
        let lost = lost_walks_series(&g, &set, 6).unwrap();
        for r in 0..=6 {
            for i in 0..n {
                prop_assert!(lost.vector(r)[i] <= totals.vector(r)[i]);
            }
        }
    }

    #[test]
    fn katz_shrinks_under_deletion(seed in 0u64..200, pick in 0usize..1000) {
        let g = gen_erdos_renyi(20, 40, seed).unwrap();
        if g.edge_count() == 0 {
            return Ok(());
        }
        let alpha = choose_alpha(&g, 0.85).unwrap();
        let base = katz_unit_seed(&g, alpha, Solver::ConjugateGradient, 1e-12).unwrap();
        let edges = g.edges();
        let e = edges[pick % edges.len()];
        let gs = remove_elements(&g, &RemovalSet::single_edge(e.0, e.1)).unwrap();
        let after = katz_unit_seed(&gs, alpha, Solver::ConjugateGradient, 1e-12).unwrap();
        for i in 0..20 {
            prop_assert!(after.x[i] <= base.x[i] + 1e-9);
        }
    }

    #[test]
    fn isim_is_symmetric_and_bounded(perm_seed in 0u64..1000, p in 1usize..10) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(perm_seed);
        let n = 10;
        let mut beta: Vec<usize> = (0..n).collect();
        let mut gamma: Vec<usize> = (0..n).collect();
        beta.shuffle(&mut rng);
        gamma.shuffle(&mut rng);
        let ab = intersection_similarity(&beta, &gamma, p).unwrap();
        let ba = intersection_similarity(&gamma, &beta, p).unwrap();
        prop_assert!((ab - ba).abs() < 1e-15);
        prop_assert!((0.0..=1.0).contains(&ab));
        let same = intersection_similarity(&beta, &beta, p).unwrap();
        prop_assert_eq!(same, 0.0);
    }
}
