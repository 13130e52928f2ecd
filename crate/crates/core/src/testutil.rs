//! Shared fixtures for unit tests.

use crate::graph::Graph;

/// Five-node toy graph: cycle 1-2-3-4 plus hub 5 joined to every cycle node
/// (1-based labels; stored 0-based). Degrees (3,3,3,3,4), spectral radius
/// 1 + sqrt(5).
pub(crate) fn toy5() -> Graph {
    Graph::from_edges(
        5,
        &[
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 0),
            (0, 4),
            (1, 4),
            (2, 4),
            (3, 4),
        ],
    )
    .unwrap()
}

/// Two nodes joined by a single edge.
pub(crate) fn p2() -> Graph {
    Graph::from_edges(2, &[(0, 1)]).unwrap()
}

/// Path on `n` nodes.
pub(crate) fn path(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// Star with `k` leaves attached to node 0.
pub(crate) fn star(k: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (1..=k).map(|i| (0, i)).collect();
    Graph::from_edges(k + 1, &edges).unwrap()
}
