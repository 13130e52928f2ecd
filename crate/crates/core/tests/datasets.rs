//! Checks against the two real-world networks, when their files are
//! available under `data/` at the workspace root (SuiteSparse `minnesota`
//! and `as-735`). The tests skip quietly otherwise.

use std::path::PathBuf;

use katz_core::graph::{graph_stats, load_matrix_market, Graph};
use katz_core::linalg::{condition_estimate, spectral_radius};

fn data_file(name: &str) -> Option<Graph> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let path = root.join(name);
    let text = std::fs::read_to_string(&path).ok()?;
    match load_matrix_market(&text) {
        Ok(loaded) => Some(loaded.graph),
        Err(e) => panic!("{} is present but unreadable: {e}", path.display()),
    }
}

#[test]
fn minnesota_reference_statistics() {
    let Some(g) = data_file("minnesota.mtx") else {
        eprintln!("minnesota.mtx not present; skipping");
        return;
    };
    assert_eq!(g.node_count(), 2640);
    assert_eq!(g.edge_count(), 3302);
    let stats = graph_stats(&g);
    assert_eq!(stats.diameter, 99);
    assert!((stats.mean_eccentricity - 71.7).abs() < 1.0);
    let rho = spectral_radius(&g, 1e-10, 100_000).unwrap();
    let kappa = condition_estimate(&g, 0.85 / rho).unwrap();
    assert!((kappa - 12.2).abs() < 0.5, "kappa = {kappa}");
}

#[test]
fn as_735_reference_statistics() {
    let Some(g) = data_file("as-735.mtx") else {
        eprintln!("as-735.mtx not present; skipping");
        return;
    };
    assert_eq!(g.node_count(), 6474);
    assert_eq!(g.edge_count(), 13895);
    let stats = graph_stats(&g);
    assert_eq!(stats.diameter, 9);
    assert!((stats.mean_eccentricity - 6.7).abs() < 0.5);
}
