//! Updates of the Katz vector after removals, without re-solving from
//! scratch: a closed-form resolvent update for edge sets, truncated
//! walk-loss series for single nodes and edges, their generalization to
//! simultaneous sets, and a driver for sequential removal experiments.

use thiserror::Error;

use crate::graph::{remove_elements, Graph, GraphError, RemovalSet};
use crate::katz::{KatzState, Provenance};
use crate::linalg::{self, norm2, spmv_into, SolveError};

#[derive(Debug, Error, PartialEq)]
pub enum UpdateError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("node {0} is already isolated")]
    IsolatedNode(usize),
    #[error("state has {got} entries but the graph has {expected} nodes")]
    DimensionMismatch { got: usize, expected: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergedBy {
    Tolerance,
    MaxLength,
}

/// Outcome of a truncated-series update.
#[derive(Debug, Clone)]
pub struct UpdateResult {
    pub x_new: Vec<f64>,
    pub l_used: usize,
    pub converged_by: ConvergedBy,
    /// Adjacency matrix-vector products performed.
    pub work_spmv: usize,
}

fn check_state(g: &Graph, state: &KatzState) -> Result<(), UpdateError> {
    if state.x.len() != g.node_count() {
        return Err(UpdateError::DimensionMismatch {
            got: state.x.len(),
            expected: g.node_count(),
        });
    }
    Ok(())
}

/// Accumulates `x_hat -= x_w * sum_r alpha^r q_r` for the first-passage
/// series toward `w`, zeroing `zero_set` after every multiply. The damping
/// is absorbed into the running vector, so the loop guard compares
/// `x_w * ||q||` directly against `tol * ||x||`.
#[allow(clippy::too_many_arguments)]
fn node_series_subtract(
    g: &Graph,
    alpha: f64,
    x_w: f64,
    w: usize,
    zero_set: &[usize],
    l_max: usize,
    tol: f64,
    x_norm: f64,
    x_hat: &mut [f64],
) -> (usize, usize, ConvergedBy) {
    let n = g.node_count();
    let mut q = vec![0.0; n];
    for &j in g.neighbors(w) {
        q[j] = alpha;
    }
    for &z in zero_set {
        q[z] = 0.0;
    }
    for i in 0..n {
        x_hat[i] -= x_w * q[i];
    }
    let mut scratch = vec![0.0; n];
    let mut l = 1usize;
    let mut work = 1usize;
    loop {
        if x_w * norm2(&q) / x_norm <= tol {
            return (l, work, ConvergedBy::Tolerance);
        }
        if l >= l_max {
            return (l, work, ConvergedBy::MaxLength);
        }
        spmv_into(g, &q, &mut scratch);
        for i in 0..n {
            q[i] = alpha * scratch[i];
        }
        work += 1;
        for &z in zero_set {
            q[z] = 0.0;
        }
        for i in 0..n {
            x_hat[i] -= x_w * q[i];
        }
        l += 1;
    }
}

/// Applies the removed-edge corrections in place: for every removed edge
/// `(a, b)`, subtracts `src_b` from entry `a` and `src_a` from entry `b`.
/// Combined with a plain adjacency product this evaluates the removed-set
/// adjacency matrix-free.
fn subtract_edge_corrections(pairs: &[(usize, usize)], src: &[f64], out: &mut [f64]) {
    for &(a, b) in pairs {
        out[a] -= src[b];
        out[b] -= src[a];
    }
}

/// Truncated series for one removed edge `(u, v)` evaluated against the
/// adjacency with all of `set_pairs` removed; subtracts the walk-loss terms
/// from `x_hat` in place.
#[allow(clippy::too_many_arguments)]
fn edge_series_subtract(
    g: &Graph,
    alpha: f64,
    x_u: f64,
    x_v: f64,
    (u, v): (usize, usize),
    set_pairs: &[(usize, usize)],
    l_max: usize,
    tol: f64,
    x_norm: f64,
    x_hat: &mut [f64],
) -> (usize, usize, ConvergedBy) {
    let n = g.node_count();
    x_hat[u] -= alpha * x_v;
    x_hat[v] -= alpha * x_u;

    let apply_removed_to_basis = |basis: usize, out: &mut Vec<f64>| {
        out.iter_mut().for_each(|x| *x = 0.0);
        for &j in g.neighbors(basis) {
            out[j] = 1.0;
        }
        for &(a, b) in set_pairs {
            if b == basis {
                out[a] -= 1.0;
            }
            if a == basis {
                out[b] -= 1.0;
            }
        }
    };

    let alpha2 = alpha * alpha;
    let mut s = vec![0.0; n];
    apply_removed_to_basis(u, &mut s);
    s.iter_mut().for_each(|x| *x *= alpha2);
    let mut t = vec![0.0; n];
    apply_removed_to_basis(v, &mut t);
    t.iter_mut().for_each(|x| *x *= alpha2);
    let mut work = 2usize;

    let mut combined: Vec<f64> = (0..n).map(|i| x_v * s[i] + x_u * t[i]).collect();
    for i in 0..n {
        x_hat[i] -= combined[i];
    }
    let mut l = 1usize;
    let mut scratch = vec![0.0; n];
    loop {
        if norm2(&combined) / x_norm <= tol {
            return (l, work, ConvergedBy::Tolerance);
        }
        if l >= l_max {
            return (l, work, ConvergedBy::MaxLength);
        }
        spmv_into(g, &s, &mut scratch);
        subtract_edge_corrections(set_pairs, &s, &mut scratch);
        for i in 0..n {
            s[i] = alpha * scratch[i];
        }
        spmv_into(g, &t, &mut scratch);
        subtract_edge_corrections(set_pairs, &t, &mut scratch);
        for i in 0..n {
            t[i] = alpha * scratch[i];
        }
        work += 2;
        for i in 0..n {
            combined[i] = x_v * s[i] + x_u * t[i];
            x_hat[i] -= combined[i];
        }
        l += 1;
    }
}

/// Closed-form update for a set of removed edges: solves one resolvent
/// system on the removed-set adjacency for the combined right-hand side
/// `sum (x_u e_v + x_v e_u)` and subtracts `alpha` times the solution.
pub fn exact_update_edges(
    g: &Graph,
    state: &KatzState,
    es: &RemovalSet,
    tol: f64,
) -> Result<KatzState, UpdateError> {
    check_state(g, state)?;
    let pairs = match es {
        RemovalSet::Edges(pairs) => pairs.clone(),
        RemovalSet::Nodes(_) => {
            return Err(UpdateError::Graph(GraphError::InvalidParameters(
                "exact_update_edges expects an edge set".into(),
            )))
        }
    };
    let ge = remove_elements(g, es)?;
    let n = g.node_count();
    let mut rhs = vec![0.0; n];
    for &(u, v) in &pairs {
        rhs[v] += state.x[u];
        rhs[u] += state.x[v];
    }
    let report =
        linalg::solve_resolvent_cg(&ge, state.alpha, &rhs, &vec![0.0; n], tol, n.max(200))?;
    let x_new: Vec<f64> = (0..n)
        .map(|i| state.x[i] - state.alpha * report.solution[i])
        .collect();
    Ok(KatzState {
        alpha: state.alpha,
        seed: state.seed.clone(),
        x: x_new,
        provenance: Provenance::Exact,
    })
}

/// Truncated walk-loss update after removing node `w`: subtracts
/// `x_w * sum_{r=1}^{L} alpha^r q_r` with the first-passage recurrence, one
/// matrix-vector product per term, then pins the removed node's score to 1.
pub fn update_node_removal(
    g: &Graph,
    state: &KatzState,
    w: usize,
    l_max: usize,
    tol: f64,
) -> Result<UpdateResult, UpdateError> {
    check_state(g, state)?;
    if w >= g.node_count() {
        return Err(UpdateError::Graph(GraphError::MissingElement(format!(
            "node {w}"
        ))));
    }
    if g.degree(w) == 0 {
        return Err(UpdateError::IsolatedNode(w));
    }
    let mut x_hat = state.x.clone();
    let x_norm = norm2(&state.x);
    let (l_used, work_spmv, converged_by) = node_series_subtract(
        g,
        state.alpha,
        state.x[w],
        w,
        &[w],
        l_max,
        tol,
        x_norm,
        &mut x_hat,
    );
    x_hat[w] = 1.0;
    Ok(UpdateResult {
        x_new: x_hat,
        l_used,
        converged_by,
        work_spmv,
    })
}

/// Truncated walk-loss update after removing edge `e = {u, v}`: propagates
/// the two correction vectors through the removed-edge adjacency, two
/// matrix-vector products per term.
pub fn update_edge_removal(
    g: &Graph,
    state: &KatzState,
    e: (usize, usize),
    l_max: usize,
    tol: f64,
) -> Result<UpdateResult, UpdateError> {
    check_state(g, state)?;
    let (u, v) = (e.0.min(e.1), e.0.max(e.1));
    if !g.has_edge(u, v) {
        return Err(UpdateError::Graph(GraphError::MissingElement(format!(
            "edge {{{u},{v}}}"
        ))));
    }
    let mut x_hat = state.x.clone();
    let x_norm = norm2(&state.x);
    let pairs = [(u, v)];
    let (l_used, work_spmv, converged_by) = edge_series_subtract(
        g,
        state.alpha,
        state.x[u],
        state.x[v],
        (u, v),
        &pairs,
        l_max,
        tol,
        x_norm,
        &mut x_hat,
    );
    Ok(UpdateResult {
        x_new: x_hat,
        l_used,
        converged_by,
        work_spmv,
    })
}

/// Simultaneous removal of a whole set: one truncated series per member,
/// each against the adjacency with the entire set removed. Singleton sets
/// reproduce [`update_node_removal`] / [`update_edge_removal`] exactly.
pub fn update_set_removal(
    g: &Graph,
    state: &KatzState,
    s: &RemovalSet,
    l_max: usize,
    tol: f64,
) -> Result<UpdateResult, UpdateError> {
    check_state(g, state)?;
    let mut x_hat = state.x.clone();
    let x_norm = norm2(&state.x);
    let mut l_used = 0usize;
    let mut work_spmv = 0usize;
    let mut converged_by = ConvergedBy::Tolerance;
    match s {
        RemovalSet::Nodes(ids) => {
            for &w in ids {
                if w >= g.node_count() {
                    return Err(UpdateError::Graph(GraphError::MissingElement(format!(
                        "node {w}"
                    ))));
                }
                if g.degree(w) == 0 {
                    return Err(UpdateError::IsolatedNode(w));
                }
            }
            for &w in ids {
                let (l, work, hit) = node_series_subtract(
                    g,
                    state.alpha,
                    state.x[w],
                    w,
                    ids,
                    l_max,
                    tol,
                    x_norm,
                    &mut x_hat,
                );
                l_used = l_used.max(l);
                work_spmv += work;
                if hit == ConvergedBy::MaxLength {
                    converged_by = ConvergedBy::MaxLength;
                }
            }
            for &w in ids {
                x_hat[w] = 1.0;
            }
        }
        RemovalSet::Edges(pairs) => {
            for &(u, v) in pairs {
                if !g.has_edge(u, v) {
                    return Err(UpdateError::Graph(GraphError::MissingElement(format!(
                        "edge {{{u},{v}}}"
                    ))));
                }
            }
            for &(u, v) in pairs {
                let (l, work, hit) = edge_series_subtract(
                    g,
                    state.alpha,
                    state.x[u],
                    state.x[v],
                    (u, v),
                    pairs,
                    l_max,
                    tol,
                    x_norm,
                    &mut x_hat,
                );
                l_used = l_used.max(l);
                work_spmv += work;
                if hit == ConvergedBy::MaxLength {
                    converged_by = ConvergedBy::MaxLength;
                }
            }
        }
    }
    Ok(UpdateResult {
        x_new: x_hat,
        l_used,
        converged_by,
        work_spmv,
    })
}

/// Baseline policies for the sequential driver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalPolicy {
    /// Truncated walk-loss update fed forward step to step.
    ApproxUpdate,
    /// Conjugate gradient from a zero initial guess after every removal.
    RecomputeCgCold,
    /// Conjugate gradient warm-started from the previous vector.
    RecomputeCgWarm,
    /// Truncated series summation from scratch after every removal.
    RecomputeNeumann,
}

#[derive(Debug, Clone)]
pub struct DriverParams {
    pub l_max_node: usize,
    pub l_max_edge: usize,
    /// Tolerance for the walk-loss updates and the series baseline.
    pub tol: f64,
    /// Tolerance for the conjugate-gradient baselines.
    pub solver_tol: f64,
    pub neumann_cap: usize,
    pub cg_cap: usize,
}

impl Default for DriverParams {
    fn default() -> Self {
        DriverParams {
            l_max_node: 30,
            l_max_edge: 30,
            tol: 1e-4,
            solver_tol: 1e-5,
            neumann_cap: 100,
            cg_cap: 10_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DriverStep {
    pub removed: RemovalSet,
    pub result: UpdateResult,
    /// Graph after this removal.
    pub graph: Graph,
    /// State fed into the next step.
    pub state: KatzState,
}

#[derive(Debug)]
pub struct DriverTrace {
    pub steps: Vec<DriverStep>,
    /// Step index and error if the schedule could not be completed; the
    /// steps before it are still reported.
    pub failure: Option<(usize, UpdateError)>,
}

fn recompute_state(
    g_next: &Graph,
    state: &KatzState,
    policy: RemovalPolicy,
    params: &DriverParams,
) -> Result<(KatzState, UpdateResult), UpdateError> {
    let n = g_next.node_count();
    let (report, converged_by, extra_spmv) = match policy {
        RemovalPolicy::RecomputeCgCold => (
            linalg::solve_resolvent_cg(
                g_next,
                state.alpha,
                &state.seed,
                &vec![0.0; n],
                params.solver_tol,
                params.cg_cap,
            )?,
            ConvergedBy::Tolerance,
            1,
        ),
        RemovalPolicy::RecomputeCgWarm => (
            linalg::solve_resolvent_cg(
                g_next,
                state.alpha,
                &state.seed,
                &state.x,
                params.solver_tol,
                params.cg_cap,
            )?,
            ConvergedBy::Tolerance,
            1,
        ),
        RemovalPolicy::RecomputeNeumann => {
            let r = linalg::solve_resolvent_neumann(
                g_next,
                state.alpha,
                &state.seed,
                params.tol,
                params.neumann_cap,
            )?;
            let hit = if r.converged {
                ConvergedBy::Tolerance
            } else {
                ConvergedBy::MaxLength
            };
            (r, hit, 0)
        }
        RemovalPolicy::ApproxUpdate => unreachable!("handled by the caller"),
    };
    let mut x = report.solution;
    for i in 0..n {
        if g_next.degree(i) == 0 {
            x[i] = state.seed[i];
        }
    }
    let next = KatzState {
        alpha: state.alpha,
        seed: state.seed.clone(),
        x: x.clone(),
        provenance: Provenance::Exact,
    };
    let result = UpdateResult {
        x_new: x,
        l_used: report.iterations,
        converged_by,
        work_spmv: report.iterations + extra_spmv,
    };
    Ok((next, result))
}

/// Applies the scheduled removals in order. `ApproxUpdate` feeds each
/// step's approximation into the next; the recompute policies solve from
/// scratch on every new graph. A failing step ends the trace early.
pub fn sequential_removal_driver(
    g: &Graph,
    state: &KatzState,
    schedule: &[RemovalSet],
    policy: RemovalPolicy,
    params: &DriverParams,
) -> DriverTrace {
    let mut steps: Vec<DriverStep> = Vec::with_capacity(schedule.len());
    let mut cur_graph = g.clone();
    let mut cur_state = state.clone();
    for (idx, set) in schedule.iter().enumerate() {
        let g_next = match remove_elements(&cur_graph, set) {
            Ok(g) => g,
            Err(e) => {
                return DriverTrace {
                    steps,
                    failure: Some((idx, UpdateError::Graph(e))),
                }
            }
        };
        let outcome = if policy == RemovalPolicy::ApproxUpdate {
            let result = match set {
                RemovalSet::Nodes(ids) if ids.len() == 1 => update_node_removal(
                    &cur_graph,
                    &cur_state,
                    ids[0],
                    params.l_max_node,
                    params.tol,
                ),
                RemovalSet::Edges(pairs) if pairs.len() == 1 => update_edge_removal(
                    &cur_graph,
                    &cur_state,
                    pairs[0],
                    params.l_max_edge,
                    params.tol,
                ),
                RemovalSet::Nodes(_) => {
                    update_set_removal(&cur_graph, &cur_state, set, params.l_max_node, params.tol)
                }
                RemovalSet::Edges(_) => {
                    update_set_removal(&cur_graph, &cur_state, set, params.l_max_edge, params.tol)
                }
            };
            result.map(|result| {
                let next_state = cur_state.with_updated_x(result.x_new.clone());
                (next_state, result)
            })
        } else {
            recompute_state(&g_next, &cur_state, policy, params)
        };
        match outcome {
            Ok((next_state, result)) => {
                steps.push(DriverStep {
                    removed: set.clone(),
                    result,
                    graph: g_next.clone(),
                    state: next_state.clone(),
                });
                cur_graph = g_next;
                cur_state = next_state;
            }
            Err(e) => {
                return DriverTrace {
                    steps,
                    failure: Some((idx, e)),
                }
            }
        }
    }
    DriverTrace {
        steps,
        failure: None,
    }
}
