//! The experiment commands behind the CLI: single-graph computation,
//! method comparison, sequential removals, total-communicability bounds,
//! and graph generation.

use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use katz_core::graph::{remove_elements, Graph, RemovalSet};
use katz_core::katz::{total_communicability, KatzState, Provenance};
use katz_core::linalg::{self, SolveError};
use katz_core::metrics::{
    bound_report, downdate_edge_pick, intersection_similarity, ranking, relative_error,
    tc_bound_edge, tc_bound_node,
};
use katz_core::update::{
    update_edge_removal, update_node_removal, ConvergedBy, UpdateError, UpdateResult,
};

use crate::config::{ExperimentConfig, SelectionPolicy, TargetKind};
use crate::records::Record;
use crate::source::acquire;

/// Solver tolerance used wherever a ground-truth vector is needed.
pub const EXACT_TOL: f64 = 1e-10;
const CG_CAP: usize = 100_000;
const NEUMANN_CAP: usize = 100;
const SAMPLE_SALT: u64 = 0x7361_6d70_6c65;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("numerical error: {0}")]
    Numerical(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Data(_) => 3,
            HarnessError::Numerical(_) => 4,
        }
    }
}

impl From<SolveError> for HarnessError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::NoEdges | SolveError::DimensionMismatch { .. } => {
                HarnessError::Data(e.to_string())
            }
            _ => HarnessError::Numerical(e.to_string()),
        }
    }
}

impl From<UpdateError> for HarnessError {
    fn from(e: UpdateError) -> Self {
        match e {
            UpdateError::Solve(s) => s.into(),
            other => HarnessError::Data(other.to_string()),
        }
    }
}

fn node_label(w: usize) -> String {
    (w + 1).to_string()
}

fn edge_label(e: (usize, usize)) -> String {
    format!("{}-{}", e.0 + 1, e.1 + 1)
}

/// Solves for the exact Katz vector with a configurable initial guess,
/// pinning isolated nodes to 1.
fn solve_exact(
    g: &Graph,
    alpha: f64,
    x0: Option<&[f64]>,
    tol: f64,
) -> Result<(KatzState, usize), HarnessError> {
    let n = g.node_count();
    let seed = vec![1.0; n];
    let zeros = vec![0.0; n];
    let x0 = x0.unwrap_or(&zeros);
    let report = linalg::solve_resolvent_cg(g, alpha, &seed, x0, tol, CG_CAP)?;
    let mut x = report.solution;
    for i in 0..n {
        if g.degree(i) == 0 {
            x[i] = 1.0;
        }
    }
    Ok((
        KatzState {
            alpha,
            seed,
            x,
            provenance: Provenance::Exact,
        },
        report.iterations,
    ))
}

fn damping(g: &Graph, factor: f64) -> Result<f64, HarnessError> {
    let rho = linalg::spectral_radius(g, 1e-8, 10_000)?;
    Ok(factor / rho)
}

/// Hands out the per-trial graph: regenerated for generator sources, fixed
/// (loaded once) for files.
struct GraphProvider {
    cached: Option<Graph>,
}

impl GraphProvider {
    fn new(cfg: &ExperimentConfig) -> Result<GraphProvider, HarnessError> {
        let cached = if cfg.source.is_generator() {
            None
        } else {
            Some(acquire(&cfg.source, cfg.seed, cfg.zero_based)?.graph)
        };
        Ok(GraphProvider { cached })
    }

    fn for_trial(&self, cfg: &ExperimentConfig, trial: usize) -> Result<Graph, HarnessError> {
        match &self.cached {
            Some(g) => Ok(g.clone()),
            None => Ok(acquire(&cfg.source, cfg.trial_seed(trial), cfg.zero_based)?.graph),
        }
    }
}

fn sample_node(rng: &mut ChaCha8Rng, g: &Graph) -> usize {
    loop {
        let w = rng.random_range(0..g.node_count());
        if g.degree(w) > 0 {
            return w;
        }
    }
}

fn sample_distinct_nodes(
    rng: &mut ChaCha8Rng,
    g: &Graph,
    count: usize,
) -> Result<Vec<usize>, HarnessError> {
    let available = (0..g.node_count()).filter(|&u| g.degree(u) > 0).count();
    if count > available {
        return Err(HarnessError::Data(format!(
            "cannot sample {count} removable nodes, only {available} have edges"
        )));
    }
    let mut chosen = Vec::with_capacity(count);
    while chosen.len() < count {
        let w = sample_node(rng, g);
        if !chosen.contains(&w) {
            chosen.push(w);
        }
    }
    Ok(chosen)
}

fn sample_distinct_edges(rng: &mut ChaCha8Rng, g: &Graph, count: usize) -> Vec<(usize, usize)> {
    let edges = g.edges();
    let mut chosen = Vec::with_capacity(count);
    while chosen.len() < count {
        let e = edges[rng.random_range(0..edges.len())];
        if !chosen.contains(&e) {
            chosen.push(e);
        }
    }
    chosen
}

pub struct ComputeSummary {
    pub n: usize,
    pub m: usize,
    pub duplicates_merged: usize,
    pub rho: f64,
    pub alpha: f64,
    pub iterations: usize,
    pub kappa: f64,
    pub tc: f64,
    pub scores: Vec<f64>,
}

/// Computes Katz centrality and total communicability for the configured
/// graph; optionally writes a per-node score file.
pub fn run_compute(cfg: &ExperimentConfig) -> Result<ComputeSummary, HarnessError> {
    let acq = acquire(&cfg.source, cfg.seed, cfg.zero_based)?;
    let g = acq.graph;
    if g.node_count() == 0 {
        return Err(HarnessError::Data("graph has no nodes".into()));
    }
    // Without edges the series is just the seed, for any damping.
    let (rho, alpha, state, iterations, kappa) = if g.edge_count() == 0 {
        let n = g.node_count();
        let state = KatzState {
            alpha: 0.0,
            seed: vec![1.0; n],
            x: vec![1.0; n],
            provenance: Provenance::Exact,
        };
        (0.0, 0.0, state, 0, 1.0)
    } else {
        let rho = linalg::spectral_radius(&g, 1e-8, 10_000)?;
        let alpha = cfg.alpha_factor / rho;
        let (state, iterations) = solve_exact(&g, alpha, None, EXACT_TOL)?;
        let kappa = linalg::condition_estimate(&g, alpha)?;
        (rho, alpha, state, iterations, kappa)
    };
    let tc = total_communicability(&state);
    let summary = ComputeSummary {
        n: g.node_count(),
        m: g.edge_count(),
        duplicates_merged: acq.duplicates_merged,
        rho,
        alpha,
        iterations,
        kappa,
        tc,
        scores: state.x.clone(),
    };
    if let Some(path) = &cfg.out {
        let mut text = String::from("# katz scores v1\n");
        text.push_str(&format!(
            "# source={} n={} m={} rho={rho} alpha={alpha} iterations={iterations} kappa={kappa} tc={tc}\n",
            cfg.source.describe(),
            summary.n,
            summary.m
        ));
        for (i, score) in summary.scores.iter().enumerate() {
            text.push_str(&format!("{} {score}\n", i + 1));
        }
        std::fs::write(path, text).map_err(|e| HarnessError::Data(e.to_string()))?;
    }
    Ok(summary)
}

/// Generates the configured graph and writes it as an edge list.
pub fn run_gen(cfg: &ExperimentConfig) -> Result<PathBuf, HarnessError> {
    if !cfg.source.is_generator() {
        return Err(HarnessError::Config(
            "gen requires a generator spec via --gen".into(),
        ));
    }
    let out = cfg
        .out
        .clone()
        .ok_or_else(|| HarnessError::Config("gen requires --out <path>".into()))?;
    let g = acquire(&cfg.source, cfg.seed, cfg.zero_based)?.graph;
    let base = if cfg.zero_based { 0 } else { 1 };
    let mut text = format!(
        "# {} seed={} n={} m={}\n",
        cfg.source.describe(),
        cfg.seed,
        g.node_count(),
        g.edge_count()
    );
    for (u, v) in g.edges() {
        text.push_str(&format!("{} {}\n", u + base, v + base));
    }
    std::fs::write(&out, text).map_err(|e| HarnessError::Data(e.to_string()))?;
    Ok(out)
}

struct MethodOutcome {
    x: Vec<f64>,
    iterations: usize,
    spmv: usize,
    converged_by: ConvergedBy,
    time_ns: u128,
}

fn timed_cg(
    g_after: &Graph,
    alpha: f64,
    x0: Option<&[f64]>,
    tol: f64,
) -> Result<MethodOutcome, HarnessError> {
    let start = Instant::now();
    let (state, iterations) = solve_exact(g_after, alpha, x0, tol)?;
    let time_ns = start.elapsed().as_nanos();
    Ok(MethodOutcome {
        x: state.x,
        iterations,
        spmv: iterations + 1,
        converged_by: ConvergedBy::Tolerance,
        time_ns,
    })
}

fn timed_neumann(g_after: &Graph, alpha: f64, tol: f64) -> Result<MethodOutcome, HarnessError> {
    let n = g_after.node_count();
    let seed = vec![1.0; n];
    let start = Instant::now();
    let report = linalg::solve_resolvent_neumann(g_after, alpha, &seed, tol, NEUMANN_CAP)?;
    let time_ns = start.elapsed().as_nanos();
    Ok(MethodOutcome {
        x: report.solution,
        iterations: report.iterations,
        spmv: report.iterations,
        converged_by: if report.converged {
            ConvergedBy::Tolerance
        } else {
            ConvergedBy::MaxLength
        },
        time_ns,
    })
}

fn timed_update(
    g: &Graph,
    state: &KatzState,
    target_kind: TargetKind,
    node: usize,
    edge: (usize, usize),
    cfg: &ExperimentConfig,
) -> Result<MethodOutcome, HarnessError> {
    let start = Instant::now();
    let result: UpdateResult = match target_kind {
        TargetKind::Node => update_node_removal(g, state, node, cfg.lmax_node, cfg.tol)?,
        TargetKind::Edge => update_edge_removal(g, state, edge, cfg.lmax_edge, cfg.tol)?,
    };
    let time_ns = start.elapsed().as_nanos();
    Ok(MethodOutcome {
        x: result.x_new,
        iterations: result.l_used,
        spmv: result.work_spmv,
        converged_by: result.converged_by,
        time_ns,
    })
}

fn converged_label(c: ConvergedBy) -> &'static str {
    match c {
        ConvergedBy::Tolerance => "tol",
        ConvergedBy::MaxLength => "maxlen",
    }
}

const COMPARE_METHODS: [&str; 4] = ["pcg_cold", "pcg_warm", "neumann", "walk_update"];

/// Removes one random node and one random edge per trial and compares the
/// walk-loss update against cold/warm conjugate gradient and series
/// truncation, at matched tolerances. Emits per-trial rows plus mean rows
/// (`trial = -1`).
pub fn run_compare(cfg: &ExperimentConfig) -> Result<Vec<Record>, HarnessError> {
    let provider = GraphProvider::new(cfg)?;
    let mut records = Vec::new();
    // (kind, method) -> (l sum, spmv sum, err sum, time sum)
    let mut agg = std::collections::BTreeMap::new();
    for trial in 0..cfg.trials {
        let tseed = cfg.trial_seed(trial);
        let g = provider.for_trial(cfg, trial)?;
        let alpha = damping(&g, cfg.alpha_factor)?;
        let (state, _) = solve_exact(&g, alpha, None, EXACT_TOL)?;
        let kappa = linalg::condition_estimate(&g, alpha)?;
        let accuracy_budget = 10.0 * cfg.tol * kappa.max(1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(tseed ^ SAMPLE_SALT);
        let node = sample_node(&mut rng, &g);
        let edges = g.edges();
        let edge = edges[rng.random_range(0..edges.len())];

        for kind in [TargetKind::Node, TargetKind::Edge] {
            let removal = match kind {
                TargetKind::Node => RemovalSet::single_node(node),
                TargetKind::Edge => RemovalSet::single_edge(edge.0, edge.1),
            };
            let target_id = match kind {
                TargetKind::Node => node_label(node),
                TargetKind::Edge => edge_label(edge),
            };
            let g_after =
                remove_elements(&g, &removal).map_err(|e| HarnessError::Data(e.to_string()))?;
            let (truth, _) = solve_exact(&g_after, alpha, None, EXACT_TOL)?;

            for method in COMPARE_METHODS {
                let outcome = match method {
                    "pcg_cold" => timed_cg(&g_after, alpha, None, cfg.tol_pcg)?,
                    "pcg_warm" => timed_cg(&g_after, alpha, Some(&state.x), cfg.tol_pcg)?,
                    "neumann" => timed_neumann(&g_after, alpha, cfg.tol)?,
                    "walk_update" => timed_update(&g, &state, kind, node, edge, cfg)?,
                    _ => unreachable!(),
                };
                let err = relative_error(&truth.x, &outcome.x)
                    .map_err(|e| HarnessError::Numerical(e.to_string()))?;
                if err > accuracy_budget {
                    return Err(HarnessError::Numerical(format!(
                        "method {method} error {err:e} exceeds budget {accuracy_budget:e} \
                         (trial {trial}, {} {target_id})",
                        kind.label()
                    )));
                }
                let mut rec = Record::new(trial as i64, 0, method);
                rec.target_kind = kind.label().into();
                rec.target_id = target_id.clone();
                rec.l = outcome.iterations as f64;
                rec.spmv = outcome.spmv as f64;
                rec.rel_err = Some(err);
                rec.converged_by = converged_label(outcome.converged_by).into();
                rec.time_ns = outcome.time_ns;
                records.push(rec);

                let entry = agg
                    .entry((kind.label(), method))
                    .or_insert((0.0f64, 0.0f64, 0.0f64, 0u128));
                entry.0 += outcome.iterations as f64;
                entry.1 += outcome.spmv as f64;
                entry.2 += err;
                entry.3 += outcome.time_ns;
            }
        }
    }
    let trials = cfg.trials as f64;
    for kind in ["node", "edge"] {
        for method in COMPARE_METHODS {
            if let Some((l, spmv, err, time)) = agg.get(&(kind, method)) {
                let mut rec = Record::new(-1, 0, method);
                rec.target_kind = kind.into();
                rec.l = l / trials;
                rec.spmv = spmv / trials;
                rec.rel_err = Some(err / trials);
                rec.time_ns = time / cfg.trials as u128;
                records.push(rec);
            }
        }
    }
    Ok(records)
}

/// Sequentially removes a fraction of nodes (edges), updating the Katz
/// vector with the walk-loss algorithms while tracking the exact vector by
/// warm-started recomputation; emits per-step relative error and
/// intersection similarity against the exact ranking.
pub fn run_sequential(cfg: &ExperimentConfig) -> Result<Vec<Record>, HarnessError> {
    match (cfg.kind, cfg.policy) {
        (TargetKind::Node, SelectionPolicy::MinProductEdge) => {
            return Err(HarnessError::Config(
                "policy min-product applies to edge removal".into(),
            ))
        }
        (TargetKind::Edge, SelectionPolicy::TopKatz) => {
            return Err(HarnessError::Config(
                "policy top-katz applies to node removal".into(),
            ))
        }
        _ => {}
    }
    let provider = GraphProvider::new(cfg)?;
    let mut records = Vec::new();
    for trial in 0..cfg.trials {
        let tseed = cfg.trial_seed(trial);
        let g0 = provider.for_trial(cfg, trial)?;
        let n = g0.node_count();
        let alpha = damping(&g0, cfg.alpha_factor)?;
        let (exact0, _) = solve_exact(&g0, alpha, None, EXACT_TOL)?;
        let count = match cfg.kind {
            TargetKind::Node => ((n as f64) * cfg.fraction).ceil() as usize,
            TargetKind::Edge => ((g0.edge_count() as f64) * cfg.fraction).ceil() as usize,
        }
        .max(1);
        let depth = count.min(n).max(1);
        let mut rng = ChaCha8Rng::seed_from_u64(tseed ^ SAMPLE_SALT);
        let static_nodes = match (cfg.kind, cfg.policy) {
            (TargetKind::Node, SelectionPolicy::UniformRandom) => {
                sample_distinct_nodes(&mut rng, &g0, count.min(n))?
            }
            _ => Vec::new(),
        };
        let static_edges = match (cfg.kind, cfg.policy) {
            (TargetKind::Edge, SelectionPolicy::UniformRandom) => {
                sample_distinct_edges(&mut rng, &g0, count.min(g0.edge_count()))
            }
            _ => Vec::new(),
        };

        let mut g_cur = g0;
        let mut exact_cur = exact0;
        let mut approx_cur = exact_cur.clone();
        let steps = match cfg.kind {
            TargetKind::Node => static_nodes.len().max(count.min(n)),
            TargetKind::Edge => static_edges.len().max(count.min(g_cur.edge_count())),
        };
        for step in 0..steps {
            let (removal, target_id, is_node, node, edge) = match cfg.kind {
                TargetKind::Node => {
                    let w = match cfg.policy {
                        SelectionPolicy::UniformRandom => static_nodes[step],
                        SelectionPolicy::TopKatz => *ranking(&exact_cur.x)
                            .iter()
                            .find(|&&i| g_cur.degree(i) > 0)
                            .ok_or_else(|| {
                                HarnessError::Data("graph ran out of non-isolated nodes".into())
                            })?,
                        SelectionPolicy::MinProductEdge => unreachable!(),
                    };
                    (RemovalSet::single_node(w), node_label(w), true, w, (0, 0))
                }
                TargetKind::Edge => {
                    let e = match cfg.policy {
                        SelectionPolicy::UniformRandom => static_edges[step],
                        SelectionPolicy::MinProductEdge => {
                            downdate_edge_pick(&exact_cur, &g_cur)
                                .map_err(|e| HarnessError::Data(e.to_string()))?
                                .edge
                        }
                        SelectionPolicy::TopKatz => unreachable!(),
                    };
                    (
                        RemovalSet::single_edge(e.0, e.1),
                        edge_label(e),
                        false,
                        0,
                        e,
                    )
                }
            };

            let g_next =
                remove_elements(&g_cur, &removal).map_err(|e| HarnessError::Data(e.to_string()))?;

            let start = Instant::now();
            let result = if is_node {
                update_node_removal(&g_cur, &approx_cur, node, cfg.lmax_node, cfg.tol)?
            } else {
                update_edge_removal(&g_cur, &approx_cur, edge, cfg.lmax_edge, cfg.tol)?
            };
            let mut time_ns = start.elapsed().as_nanos();
            let mut approx_next = approx_cur.with_updated_x(result.x_new.clone());
            if result.converged_by == ConvergedBy::MaxLength && cfg.recompute_on_maxlen {
                let start = Instant::now();
                let (st, _) = solve_exact(&g_next, alpha, Some(&approx_next.x), cfg.tol_pcg)?;
                time_ns += start.elapsed().as_nanos();
                approx_next.x = st.x;
            }

            let (exact_next, _) = solve_exact(&g_next, alpha, Some(&exact_cur.x), EXACT_TOL)?;
            let err = relative_error(&exact_next.x, &approx_next.x)
                .map_err(|e| HarnessError::Numerical(e.to_string()))?;
            let isim =
                intersection_similarity(&ranking(&exact_next.x), &ranking(&approx_next.x), depth)
                    .map_err(|e| HarnessError::Numerical(e.to_string()))?;

            let mut rec = Record::new(trial as i64, step as i64, "walk_update");
            rec.target_kind = cfg.kind.label().into();
            rec.target_id = target_id;
            rec.l = result.l_used as f64;
            rec.spmv = result.work_spmv as f64;
            rec.rel_err = Some(err);
            rec.isim = Some(isim);
            rec.converged_by = converged_label(result.converged_by).into();
            rec.time_ns = time_ns;
            records.push(rec);

            g_cur = g_next;
            exact_cur = exact_next;
            approx_cur = approx_next;
        }
    }
    Ok(records)
}

/// Sequentially removes a random fraction of nodes (edges) and records the
/// total-communicability drop next to its theoretical bound, both relative
/// to the initial total communicability. Bounds come from the pre-removal
/// exact state, or from the initial state under `stale_bounds`.
pub fn run_tc_bounds(cfg: &ExperimentConfig) -> Result<Vec<Record>, HarnessError> {
    let provider = GraphProvider::new(cfg)?;
    let mut records = Vec::new();
    for trial in 0..cfg.trials {
        let tseed = cfg.trial_seed(trial);
        let g0 = provider.for_trial(cfg, trial)?;
        let alpha = damping(&g0, cfg.alpha_factor)?;
        let (exact0, _) = solve_exact(&g0, alpha, None, EXACT_TOL)?;
        let tc0 = total_communicability(&exact0);
        let count = match cfg.kind {
            TargetKind::Node => ((g0.node_count() as f64) * cfg.fraction).ceil() as usize,
            TargetKind::Edge => ((g0.edge_count() as f64) * cfg.fraction).ceil() as usize,
        }
        .max(1);
        let mut rng = ChaCha8Rng::seed_from_u64(tseed ^ SAMPLE_SALT);
        let node_targets = match cfg.kind {
            TargetKind::Node => sample_distinct_nodes(&mut rng, &g0, count.min(g0.node_count()))?,
            TargetKind::Edge => Vec::new(),
        };
        let edge_targets = match cfg.kind {
            TargetKind::Edge => sample_distinct_edges(&mut rng, &g0, count.min(g0.edge_count())),
            TargetKind::Node => Vec::new(),
        };
        let steps = node_targets.len().max(edge_targets.len());

        let mut g_cur = g0;
        let mut exact_cur = exact0.clone();
        for step in 0..steps {
            let bound_state = if cfg.stale_bounds {
                &exact0
            } else {
                &exact_cur
            };
            let (removal, target_id, bound) = match cfg.kind {
                TargetKind::Node => {
                    let w = node_targets[step];
                    (
                        RemovalSet::single_node(w),
                        node_label(w),
                        tc_bound_node(bound_state, &g_cur, w),
                    )
                }
                TargetKind::Edge => {
                    let e = edge_targets[step];
                    (
                        RemovalSet::single_edge(e.0, e.1),
                        edge_label(e),
                        tc_bound_edge(bound_state, e),
                    )
                }
            };
            let tc_before = total_communicability(&exact_cur);
            let g_next =
                remove_elements(&g_cur, &removal).map_err(|e| HarnessError::Data(e.to_string()))?;
            let (exact_next, _) = solve_exact(&g_next, alpha, Some(&exact_cur.x), EXACT_TOL)?;
            let drop = tc_before - total_communicability(&exact_next);
            let report = bound_report(bound, drop);
            if report.violated && !cfg.stale_bounds {
                return Err(HarnessError::Numerical(format!(
                    "bound violated at trial {trial} step {step} ({} {target_id}): \
                     bound {bound:e} < drop {drop:e}",
                    cfg.kind.label()
                )));
            }
            let mut rec = Record::new(trial as i64, step as i64, "bound");
            rec.target_kind = cfg.kind.label().into();
            rec.target_id = target_id;
            rec.tc_drop = Some(drop / tc0);
            rec.tc_bound = Some(bound / tc0);
            records.push(rec);

            g_cur = g_next;
            exact_cur = exact_next;
        }
    }
    Ok(records)
}
