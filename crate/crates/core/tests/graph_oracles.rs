//! BFS distances checked against the matrix-power definition, and the
//! statistical behaviour of the two graph generators.

use katz_core::graph::{
    bfs_distance, gen_erdos_renyi, gen_preferential_attachment, graph_stats, Graph,
};
use katz_core::linalg::spmv;

/// dist(i, j) is the smallest r with `(A^r)_{ij} > 0`.
fn walk_distance(g: &Graph, i: usize, j: usize, cap: usize) -> Option<usize> {
    let n = g.node_count();
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    if i == j {
        return Some(0);
    }
    for r in 1..=cap {
        v = spmv(g, &v).unwrap();
        // Counts overflow f64 eventually; only positivity matters.
        let total: f64 = v.iter().sum();
        if total > 0.0 {
            v.iter_mut().for_each(|x| *x /= total);
        }
        if v[j] > 0.0 {
            return Some(r);
        }
        if v.iter().all(|&x| x == 0.0) {
            return None;
        }
    }
    None
}

#[test]
fn bfs_agrees_with_walk_distance() {
    for seed in 0..10 {
        let n = 8 + (seed as usize % 3) * 6;
        let g = gen_erdos_renyi(n, n + seed as usize % 7, seed).unwrap();
        for i in 0..n {
            let dist = bfs_distance(&g, i);
            for j in 0..n {
                assert_eq!(
                    dist[j],
                    walk_distance(&g, i, j, n),
                    "seed {seed}, pair ({i},{j})"
                );
            }
        }
    }
}

#[test]
fn erdos_renyi_diameter_statistics() {
    // Uniform graphs with n = 3200, m = 16000 have diameter about 6.
    let mut diam_sum = 0usize;
    let mut used = 0usize;
    for seed in 0..30 {
        let g = gen_erdos_renyi(3200, 16000, 1000 + seed).unwrap();
        if !g.is_connected() {
            continue;
        }
        let stats = graph_stats(&g);
        diam_sum += stats.diameter;
        used += 1;
        assert!((stats.mean_degree - 10.0).abs() < 1e-9);
    }
    assert!(used >= 25, "too many disconnected samples: {used}/30");
    let mean = diam_sum as f64 / used as f64;
    assert!((5.1..=7.1).contains(&mean), "mean diameter {mean}");
}

#[test]
fn preferential_attachment_statistics() {
    for seed in 0..30 {
        let g = gen_preferential_attachment(3200, 5, 2000 + seed).unwrap();
        assert!(g.is_connected());
        // 15 clique edges + 5 per added node; within 2% of 15800.
        let m = g.edge_count();
        assert_eq!(m, 15 + 3194 * 5);
        assert!((m as f64 - 15800.0).abs() / 15800.0 < 0.02);
        // Heavy tail: some node far exceeds the attachment degree.
        let max_deg = (0..3200).map(|u| g.degree(u)).max().unwrap();
        assert!(max_deg > 20, "seed {seed}: max degree {max_deg}");
    }
}
