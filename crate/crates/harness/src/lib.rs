//! Experiment harness for Katz centrality updates under sequential node and
//! edge removal: graph acquisition, method comparison against recompute
//! baselines, sequential-removal accuracy runs, total-communicability bound
//! sweeps, and deterministic CSV output.

pub mod commands;
pub mod config;
pub mod records;
pub mod source;

pub use commands::HarnessError;
pub use config::ExperimentConfig;
