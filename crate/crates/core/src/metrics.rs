//! Total-communicability bounds, the edge downdate heuristic, and the
//! evaluation metrics used by the experiment harness: relative 2-norm error
//! and intersection similarity of rankings.

use thiserror::Error;

use crate::graph::Graph;
use crate::katz::KatzState;
use crate::linalg::norm2;

/// Floating-point slack permitted before a bound counts as violated.
pub const BOUND_SLACK_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("dimension mismatch: got {got}, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("invalid ranking depth {p} for {n} nodes")]
    InvalidDepth { p: usize, n: usize },
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("reference vector is zero")]
    ZeroReference,
}

/// A total-communicability bound next to the drop it limits.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub actual_drop: f64,
    pub bound: f64,
    pub slack: f64,
    pub violated: bool,
}

/// Pairs a bound value with an observed drop.
pub fn bound_report(bound: f64, actual_drop: f64) -> BoundReport {
    let slack = bound - actual_drop;
    BoundReport {
        actual_drop,
        bound,
        slack,
        violated: slack < -BOUND_SLACK_TOL,
    }
}

/// Upper bound on the total-communicability drop when node `w` is removed:
/// `(x_w^2 (1 - alpha^2 deg(w)) - 1) / n`, from the current state only.
pub fn tc_bound_node(state: &KatzState, g: &Graph, w: usize) -> f64 {
    let n = state.x.len() as f64;
    let xw = state.x[w];
    let deg = g.degree(w) as f64;
    (xw * xw * (1.0 - state.alpha * state.alpha * deg) - 1.0) / n
}

/// Upper bound on the total-communicability drop when edge `{u, v}` is
/// removed: `(2 alpha x_u x_v - alpha^2 x_u^2 - alpha^2 x_v^2) / n`.
pub fn tc_bound_edge(state: &KatzState, e: (usize, usize)) -> f64 {
    let n = state.x.len() as f64;
    let (xu, xv) = (state.x[e.0], state.x[e.1]);
    let a = state.alpha;
    (2.0 * a * xu * xv - a * a * xu * xu - a * a * xv * xv) / n
}

/// Outcome of the downdate heuristic.
#[derive(Debug, Clone, PartialEq)]
pub struct DowndatePick {
    pub edge: (usize, usize),
    pub product: f64,
    /// Whether `max x < ((2 - alpha)/alpha) * min x`, the regime in which
    /// minimizing the product provably minimizes the edge bound.
    pub regime_holds: bool,
}

/// Picks the edge minimizing `x_u * x_v`, the removal expected to disturb
/// total communicability least; ties go to the lexicographically smallest
/// edge.
pub fn downdate_edge_pick(state: &KatzState, g: &Graph) -> Result<DowndatePick, MetricError> {
    let mut best: Option<((usize, usize), f64)> = None;
    for (u, v) in g.edges() {
        let p = state.x[u] * state.x[v];
        match best {
            Some((_, bp)) if p >= bp => {}
            _ => best = Some(((u, v), p)),
        }
    }
    let ((u, v), product) = best.ok_or(MetricError::EmptyGraph)?;
    let max = state.x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = state.x.iter().cloned().fold(f64::INFINITY, f64::min);
    let regime_holds = max < (2.0 - state.alpha) / state.alpha * min;
    Ok(DowndatePick {
        edge: (u, v),
        product,
        regime_holds,
    })
}

/// Relative 2-norm error `||exact - approx|| / ||exact||`.
pub fn relative_error(exact: &[f64], approx: &[f64]) -> Result<f64, MetricError> {
    if exact.len() != approx.len() {
        return Err(MetricError::DimensionMismatch {
            got: approx.len(),
            expected: exact.len(),
        });
    }
    let denom = norm2(exact);
    if denom == 0.0 {
        return Err(MetricError::ZeroReference);
    }
    let num: f64 = exact
        .iter()
        .zip(approx)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    Ok(num / denom)
}

/// Node ids ordered by descending score, ties broken by ascending id.
pub fn ranking(scores: &[f64]) -> Vec<usize> {
    let mut ids: Vec<usize> = (0..scores.len()).collect();
    ids.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    ids
}

/// Intersection similarity at depth `p`: the average over `i <= p` of the
/// symmetric-difference size of the two top-`i` prefixes, normalized by
/// `2i`. Zero means the prefixes agree as sets at every depth, one means
/// they are disjoint throughout.
pub fn intersection_similarity(
    beta: &[usize],
    gamma: &[usize],
    p: usize,
) -> Result<f64, MetricError> {
    if beta.len() != gamma.len() {
        return Err(MetricError::DimensionMismatch {
            got: gamma.len(),
            expected: beta.len(),
        });
    }
    let n = beta.len();
    if p == 0 || p > n {
        return Err(MetricError::InvalidDepth { p, n });
    }
    let max_id = beta.iter().chain(gamma).max().copied().unwrap_or(0);
    let mut mark = vec![0u8; max_id + 1];
    let mut sym_diff = 0usize;
    let mut total = 0.0;
    for i in 0..p {
        for (id, bit) in [(beta[i], 1u8), (gamma[i], 2u8)] {
            let m = &mut mark[id];
            if *m == 0 {
                sym_diff += 1;
            } else if *m == 3 - bit {
                sym_diff -= 1;
            }
            *m |= bit;
        }
        total += sym_diff as f64 / (2.0 * (i + 1) as f64);
    }
    Ok(total / p as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_erdos_renyi, remove_elements, Graph, RemovalSet};
    use crate::katz::{choose_alpha, katz_unit_seed, total_communicability, Solver};
    use crate::testutil::{p2, path, star};

    fn exact_state(g: &Graph, alpha: f64) -> KatzState {
        katz_unit_seed(g, alpha, Solver::ConjugateGradient, 1e-12).unwrap()
    }

    #[test]
    fn pair_graph_bounds_are_tight() {
        let g = p2();
        let state = exact_state(&g, 0.5);
        // Node removal: TC drops from 2 to 1; bound (4*(1-1/4)-1)/2 = 1.
        let nb = tc_bound_node(&state, &g, 0);
        assert!((nb - 1.0).abs() < 1e-14);
        let after = exact_state(
            &remove_elements(&g, &RemovalSet::single_node(0)).unwrap(),
            0.5,
        );
        let drop = total_communicability(&state) - total_communicability(&after);
        let report = bound_report(nb, drop);
        assert!(report.slack.abs() < 1e-14);
        assert!(!report.violated);

        // Edge removal: same drop, bound (2*0.5*4 - 0.25*4 - 0.25*4)/2 = 1.
        let eb = tc_bound_edge(&state, (0, 1));
        assert!((eb - 1.0).abs() < 1e-14);
        let report = bound_report(eb, drop);
        assert!(report.slack.abs() < 1e-14);
    }

    #[test]
    fn star_leaf_bound_holds() {
        let g = star(3);
        let alpha = choose_alpha(&g, 0.85).unwrap();
        let state = exact_state(&g, alpha);
        let before = total_communicability(&state);
        let w = 1;
        let after = exact_state(
            &remove_elements(&g, &RemovalSet::single_node(w)).unwrap(),
            alpha,
        );
        let drop = before - total_communicability(&after);
        let report = bound_report(tc_bound_node(&state, &g, w), drop);
        assert!(!report.violated, "slack = {}", report.slack);
        assert!(report.slack >= 0.0);
    }

    #[test]
    fn bounds_hold_on_random_removals() {
        for seed in 0..5 {
            let g = gen_erdos_renyi(40, 100, seed).unwrap();
            let alpha = choose_alpha(&g, 0.85).unwrap();
            let state = exact_state(&g, alpha);
            let before = total_communicability(&state);

            let w = (11 * seed as usize + 3) % 40;
            let after = exact_state(
                &remove_elements(&g, &RemovalSet::single_node(w)).unwrap(),
                alpha,
            );
            let report = bound_report(
                tc_bound_node(&state, &g, w),
                before - total_communicability(&after),
            );
            assert!(
                !report.violated,
                "node bound violated, slack = {}",
                report.slack
            );

            let e = g.edges()[(13 * seed as usize) % g.edge_count()];
            let after = exact_state(
                &remove_elements(&g, &RemovalSet::single_edge(e.0, e.1)).unwrap(),
                alpha,
            );
            let report = bound_report(
                tc_bound_edge(&state, e),
                before - total_communicability(&after),
            );
            assert!(
                !report.violated,
                "edge bound violated, slack = {}",
                report.slack
            );
        }
    }

    #[test]
    fn downdate_pick_examples() {
        let g = p2();
        let state = exact_state(&g, 0.5);
        assert_eq!(downdate_edge_pick(&state, &g).unwrap().edge, (0, 1));

        // Star: all leaf edges tie, lexicographically smallest wins.
        let g = star(3);
        let alpha = choose_alpha(&g, 0.85).unwrap();
        let state = exact_state(&g, alpha);
        assert_eq!(downdate_edge_pick(&state, &g).unwrap().edge, (0, 1));

        // Path: pendant edges have the smallest endpoint product.
        let g = path(4);
        let state = exact_state(&g, 0.3);
        let pick = downdate_edge_pick(&state, &g).unwrap();
        assert_eq!(pick.edge, (0, 1));
        let explicit_min = g
            .edges()
            .iter()
            .map(|&(u, v)| state.x[u] * state.x[v])
            .fold(f64::INFINITY, f64::min);
        assert!((pick.product - explicit_min).abs() < 1e-15);

        let empty = Graph::from_edges(2, &[]).unwrap();
        assert_eq!(
            downdate_edge_pick(&state, &empty).unwrap_err(),
            MetricError::EmptyGraph
        );
    }

    #[test]
    fn downdate_pick_is_scale_invariant() {
        let g = gen_erdos_renyi(30, 80, 2).unwrap();
        let alpha = choose_alpha(&g, 0.85).unwrap();
        let state = exact_state(&g, alpha);
        let scaled = KatzState {
            x: state.x.iter().map(|v| 3.7 * v).collect(),
            ..state.clone()
        };
        assert_eq!(
            downdate_edge_pick(&state, &g).unwrap().edge,
            downdate_edge_pick(&scaled, &g).unwrap().edge
        );
    }

    #[test]
    fn relative_error_examples() {
        assert_eq!(relative_error(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        let e = relative_error(&[2.0, 2.0], &[2.0, 1.0]).unwrap();
        assert!((e - 1.0 / 8.0_f64.sqrt()).abs() < 1e-15);
        let x = [3.0, 4.0, 5.0];
        let scaled: Vec<f64> = x.iter().map(|v| 1.01 * v).collect();
        assert!((relative_error(&x, &scaled).unwrap() - 0.01).abs() < 1e-12);
        assert!(matches!(
            relative_error(&[1.0], &[1.0, 2.0]),
            Err(MetricError::DimensionMismatch { .. })
        ));
        assert_eq!(
            relative_error(&[0.0, 0.0], &[1.0, 0.0]).unwrap_err(),
            MetricError::ZeroReference
        );
    }

    #[test]
    fn ranking_orders_and_breaks_ties_by_id() {
        assert_eq!(ranking(&[0.5, 2.0, 1.0]), vec![1, 2, 0]);
        assert_eq!(ranking(&[1.0, 1.0, 2.0]), vec![2, 0, 1]);
    }

    #[test]
    fn intersection_similarity_examples() {
        let id = [0usize, 1, 2, 3];
        assert_eq!(intersection_similarity(&id, &id, 4).unwrap(), 0.0);

        let beta = [0usize, 1, 2];
        let gamma = [3usize, 4, 5];
        assert_eq!(intersection_similarity(&beta, &gamma, 3).unwrap(), 1.0);

        let beta = [0usize, 1];
        let gamma = [1usize, 0];
        assert!((intersection_similarity(&beta, &gamma, 2).unwrap() - 0.5).abs() < 1e-15);

        assert!(matches!(
            intersection_similarity(&beta, &gamma, 3),
            Err(MetricError::InvalidDepth { .. })
        ));
        assert!(matches!(
            intersection_similarity(&beta, &gamma, 0),
            Err(MetricError::InvalidDepth { .. })
        ));
    }

    #[test]
    fn intersection_similarity_is_symmetric_and_relabel_invariant() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let n = 12;
        for _ in 0..20 {
            let mut beta: Vec<usize> = (0..n).collect();
            let mut gamma: Vec<usize> = (0..n).collect();
            beta.shuffle(&mut rng);
            gamma.shuffle(&mut rng);
            let mut relabel: Vec<usize> = (0..n).collect();
            relabel.shuffle(&mut rng);
            for p in [1, 3, n] {
                let ab = intersection_similarity(&beta, &gamma, p).unwrap();
                let ba = intersection_similarity(&gamma, &beta, p).unwrap();
                assert!((ab - ba).abs() < 1e-15);
                let beta_r: Vec<usize> = beta.iter().map(|&i| relabel[i]).collect();
                let gamma_r: Vec<usize> = gamma.iter().map(|&i| relabel[i]).collect();
                let relabeled = intersection_similarity(&beta_r, &gamma_r, p).unwrap();
                assert!((ab - relabeled).abs() < 1e-15);
                assert!((0.0..=1.0).contains(&ab));
            }
        }
    }
}
