//! Katz centrality: damping selection, the centrality state, and total
//! network communicability.

use thiserror::Error;

use crate::graph::Graph;
use crate::linalg::{self, SolveError};

#[derive(Debug, Error, PartialEq)]
pub enum KatzError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("damping factor must lie in (0,1), got {0}")]
    BadFactor(f64),
    #[error("seed vector must be nonnegative and nonzero")]
    BadSeed,
    #[error("alpha must be positive, got {0}")]
    BadAlpha(f64),
}

/// How the centrality vector was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Solved against the current graph within solver tolerance.
    Exact,
    /// Produced by one or more truncated-series updates.
    Approximate { updates: u32 },
}

/// Which baseline solver backs an exact computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    ConjugateGradient,
    Neumann,
}

/// Katz centrality vector together with the damping and seed that define it.
///
/// Admissibility `0 < alpha * rho(A) < 1` is established by the construction
/// path ([`choose_alpha`] plus the remark that removals only shrink the
/// spectral radius); the solvers detect violations at run time.
#[derive(Debug, Clone)]
pub struct KatzState {
    pub alpha: f64,
    pub seed: Vec<f64>,
    pub x: Vec<f64>,
    pub provenance: Provenance,
}

impl KatzState {
    pub fn node_count(&self) -> usize {
        self.x.len()
    }

    pub fn is_exact(&self) -> bool {
        self.provenance == Provenance::Exact
    }

    /// Successor state carrying an approximately updated vector.
    pub fn with_updated_x(&self, x: Vec<f64>) -> KatzState {
        let updates = match self.provenance {
            Provenance::Exact => 1,
            Provenance::Approximate { updates } => updates + 1,
        };
        KatzState {
            alpha: self.alpha,
            seed: self.seed.clone(),
            x,
            provenance: Provenance::Approximate { updates },
        }
    }
}

/// `factor / rho(A)`, the damping used throughout the experiments
/// (`factor = 0.85` unless stated otherwise).
pub fn choose_alpha(g: &Graph, factor: f64) -> Result<f64, KatzError> {
    if !(factor > 0.0 && factor < 1.0) {
        return Err(KatzError::BadFactor(factor));
    }
    let rho = linalg::spectral_radius(g, 1e-6, 1000)?;
    Ok(factor / rho)
}

/// Solves `(I - alpha*A) x = seed` and wraps the result. Isolated nodes get
/// `x_i = seed_i` exactly, their value by definition.
pub fn katz(
    g: &Graph,
    alpha: f64,
    seed: &[f64],
    solver: Solver,
    tol: f64,
) -> Result<KatzState, KatzError> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(KatzError::BadAlpha(alpha));
    }
    if seed.iter().any(|&s| s < 0.0) || seed.iter().all(|&s| s == 0.0) {
        return Err(KatzError::BadSeed);
    }
    let n = g.node_count();
    let report = match solver {
        Solver::ConjugateGradient => {
            linalg::solve_resolvent_cg(g, alpha, seed, &vec![0.0; n], tol, n.max(200))?
        }
        Solver::Neumann => {
            let r = linalg::solve_resolvent_neumann(g, alpha, seed, tol, 100_000)?;
            if !r.converged {
                return Err(KatzError::Solve(SolveError::NoConvergence(r.iterations)));
            }
            r
        }
    };
    let mut x = report.solution;
    for i in 0..n {
        if g.degree(i) == 0 {
            x[i] = seed[i];
        }
    }
    Ok(KatzState {
        alpha,
        seed: seed.to_vec(),
        x,
        provenance: Provenance::Exact,
    })
}

/// Convenience: standard Katz with the all-ones seed.
pub fn katz_unit_seed(
    g: &Graph,
    alpha: f64,
    solver: Solver,
    tol: f64,
) -> Result<KatzState, KatzError> {
    katz(g, alpha, &vec![1.0; g.node_count()], solver, tol)
}

/// Total network communicability, the mean of the Katz vector.
pub fn total_communicability(state: &KatzState) -> f64 {
    state.x.iter().sum::<f64>() / state.x.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_erdos_renyi, remove_elements, Graph, RemovalSet};
    use crate::testutil::{p2, toy5};

    #[test]
    fn choose_alpha_known_radii() {
        let k4 = gen_erdos_renyi(4, 6, 0).unwrap();
        assert!((choose_alpha(&k4, 0.85).unwrap() - 0.85 / 3.0).abs() < 1e-6);
        assert!((choose_alpha(&p2(), 0.5).unwrap() - 0.5).abs() < 1e-6);
        let expected = 0.85 / (1.0 + 5.0_f64.sqrt());
        assert!((choose_alpha(&toy5(), 0.85).unwrap() - expected).abs() < 1e-5);
        assert!(matches!(
            choose_alpha(&p2(), 1.5),
            Err(KatzError::BadFactor(_))
        ));
    }

    #[test]
    fn katz_pair_graph_both_solvers() {
        let g = p2();
        for solver in [Solver::ConjugateGradient, Solver::Neumann] {
            let st = katz_unit_seed(&g, 0.5, solver, 1e-12).unwrap();
            assert!((st.x[0] - 2.0).abs() < 1e-10);
            assert!((st.x[1] - 2.0).abs() < 1e-10);
            assert!(st.is_exact());
        }
    }

    #[test]
    fn katz_edgeless_graph_is_seed() {
        let g = Graph::from_edges(4, &[]).unwrap();
        let st = katz_unit_seed(&g, 0.3, Solver::ConjugateGradient, 1e-12).unwrap();
        assert_eq!(st.x, vec![1.0; 4]);
        assert_eq!(total_communicability(&st), 1.0);
    }

    #[test]
    fn katz_regular_cycle_closed_form() {
        // Removing the hub from the toy graph leaves the 4-cycle plus one
        // isolated node; on a 2-regular graph x_i = 1/(1 - 2*alpha).
        let g = remove_elements(&toy5(), &RemovalSet::single_node(4)).unwrap();
        let st = katz_unit_seed(&g, 0.4, Solver::ConjugateGradient, 1e-12).unwrap();
        for i in 0..4 {
            assert!((st.x[i] - 5.0).abs() < 1e-9, "x[{i}] = {}", st.x[i]);
        }
        assert_eq!(st.x[4], 1.0);
        let tc = total_communicability(&st);
        assert!((tc - 21.0 / 5.0).abs() < 1e-9);

        // The bare 4-cycle has every score equal to 5, so TC = 5.
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let st = katz_unit_seed(&c4, 0.4, Solver::ConjugateGradient, 1e-12).unwrap();
        assert!((total_communicability(&st) - 5.0).abs() < 1e-9);
    }

    #[test]
    fn katz_unit_seed_is_at_least_one() {
        for seed in 0..5 {
            let g = gen_erdos_renyi(50, 120, seed).unwrap();
            let alpha = choose_alpha(&g, 0.85).unwrap();
            let st = katz_unit_seed(&g, alpha, Solver::ConjugateGradient, 1e-10).unwrap();
            assert!(st.x.iter().all(|&v| v >= 1.0 - 1e-8));
        }
    }

    #[test]
    fn katz_personalized_seed() {
        let g = p2();
        let st = katz(&g, 0.5, &[1.0, 0.0], Solver::ConjugateGradient, 1e-12).unwrap();
        // x = (I - alpha A)^{-1} e_1 = (4/3, 2/3).
        assert!((st.x[0] - 4.0 / 3.0).abs() < 1e-10);
        assert!((st.x[1] - 2.0 / 3.0).abs() < 1e-10);
        assert!(matches!(
            katz(&g, 0.5, &[0.0, 0.0], Solver::ConjugateGradient, 1e-12),
            Err(KatzError::BadSeed)
        ));
    }

    #[test]
    fn deletion_shrinks_katz_entrywise() {
        for seed in 0..4 {
            let g = gen_erdos_renyi(40, 100, seed).unwrap();
            let alpha = choose_alpha(&g, 0.85).unwrap();
            let base = katz_unit_seed(&g, alpha, Solver::ConjugateGradient, 1e-12).unwrap();
            let sets = [
                RemovalSet::single_node((seed as usize * 7) % 40),
                RemovalSet::single_edge(g.edges()[0].0, g.edges()[0].1),
            ];
            for s in sets {
                let gs = remove_elements(&g, &s).unwrap();
                let after = katz_unit_seed(&gs, alpha, Solver::ConjugateGradient, 1e-12).unwrap();
                for i in 0..40 {
                    assert!(after.x[i] <= base.x[i] + 1e-9);
                }
            }
        }
    }
}
