//! Katz centrality on simple undirected graphs, with efficient updates of the
//! centrality vector after node and edge removals.
//!
//! The crate is organized around a small set of modules:
//!
//! - [`graph`] — CSR graphs, loaders, generators, removal sets, BFS.
//! - [`linalg`] — sparse matrix-vector kernels, spectral radius, and the two
//!   baseline resolvent solvers (conjugate gradient, truncated series).
//! - [`katz`] — Katz centrality states and total communicability.
//! - [`walks`] — walk counting: totals, lost walks for node/edge sets,
//!   first-passage walks and their avoiding variant, plus brute-force
//!   enumeration oracles.
//! - [`update`] — closed-form and truncated-series updates of the Katz vector
//!   after removals, and a sequential-removal driver.
//! - [`metrics`] — total-communicability bounds, the edge downdate heuristic,
//!   relative error and intersection similarity.
//!
//! Removing a node never shrinks a graph: it keeps its index and loses its
//! edges, so centrality vectors stay aligned across a removal sequence.
//!
//! ```
//! use katz_core::graph::{gen_erdos_renyi, remove_elements, RemovalSet};
//! use katz_core::katz::{choose_alpha, katz_unit_seed, Solver};
//! use katz_core::metrics::relative_error;
//! use katz_core::update::update_node_removal;
//!
//! let g = gen_erdos_renyi(200, 600, 7).unwrap();
//! let alpha = choose_alpha(&g, 0.85).unwrap();
//! let state = katz_unit_seed(&g, alpha, Solver::ConjugateGradient, 1e-10).unwrap();
//!
//! // Update after removing node 17 without re-solving the system.
//! let updated = update_node_removal(&g, &state, 17, 30, 1e-4).unwrap();
//! assert_eq!(updated.x_new[17], 1.0);
//!
//! // The truncated series lands close to a full recomputation.
//! let after = remove_elements(&g, &RemovalSet::single_node(17)).unwrap();
//! let truth = katz_unit_seed(&after, alpha, Solver::ConjugateGradient, 1e-10).unwrap();
//! assert!(relative_error(&truth.x, &updated.x_new).unwrap() < 1e-3);
//! ```

pub mod graph;
pub mod katz;
pub mod linalg;
pub mod metrics;
#[cfg(test)]
pub(crate) mod testutil;
pub mod update;
pub mod walks;

pub use graph::{Graph, RemovalSet};
pub use katz::KatzState;
