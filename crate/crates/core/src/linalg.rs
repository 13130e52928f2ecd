//! Sparse matrix-vector kernels, spectral-radius estimation, and the two
//! baseline solvers for resolvent systems `(I - alpha*A) x = b`: plain
//! conjugate gradient with a configurable initial guess, and truncated
//! series summation.
//!
//! All floating-point work is in `f64`; norms are 2-norms throughout.

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq)]
pub enum SolveError {
    #[error("dimension mismatch: got vector of length {got}, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("system is not positive definite (nonpositive curvature at iteration {0})")]
    NotPositiveDefinite(usize),
    #[error("no convergence within {0} iterations")]
    NoConvergence(usize),
    #[error("graph has no edges")]
    NoEdges,
}

/// Outcome of a resolvent solve.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub solution: Vec<f64>,
    /// Matrix-vector products performed (CG steps, or series terms added).
    pub iterations: usize,
    /// Norm of the final stopping quantity: the residual for CG, the last
    /// added term for the truncated series.
    pub residual_norm: f64,
    pub converged: bool,
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

pub(crate) fn spmv_into(g: &Graph, v: &[f64], out: &mut [f64]) {
    for u in 0..g.node_count() {
        let mut acc = 0.0;
        for &j in g.neighbors(u) {
            acc += v[j];
        }
        out[u] = acc;
    }
}

/// Exact product `A * v` for the adjacency matrix of `g`.
pub fn spmv(g: &Graph, v: &[f64]) -> Result<Vec<f64>, SolveError> {
    if v.len() != g.node_count() {
        return Err(SolveError::DimensionMismatch {
            got: v.len(),
            expected: g.node_count(),
        });
    }
    let mut out = vec![0.0; v.len()];
    spmv_into(g, v, &mut out);
    Ok(out)
}

/// Applies `(I - alpha*A)` to `v`.
fn resolvent_apply(g: &Graph, alpha: f64, v: &[f64], scratch: &mut [f64], out: &mut [f64]) {
    spmv_into(g, v, scratch);
    for i in 0..v.len() {
        out[i] = v[i] - alpha * scratch[i];
    }
}

/// Spectral radius of the adjacency matrix, via power iteration on `A^2`
/// with an all-ones start vector. Squaring keeps the iteration convergent
/// on bipartite graphs, where the extreme eigenvalues come in a +/- pair.
pub fn spectral_radius(g: &Graph, tol: f64, max_iter: usize) -> Result<f64, SolveError> {
    if g.edge_count() == 0 {
        return Err(SolveError::NoEdges);
    }
    let n = g.node_count();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut av = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut lambda_prev = f64::NAN;
    for _ in 0..max_iter {
        spmv_into(g, &v, &mut av);
        spmv_into(g, &av, &mut w);
        let lambda = dot(&v, &w);
        let wn = norm2(&w);
        if wn == 0.0 {
            // All mass sat on isolated nodes; with m >= 1 the diagonal of
            // A^2 carries the degrees, so this cannot happen.
            return Ok(0.0);
        }
        for i in 0..n {
            v[i] = w[i] / wn;
        }
        if !lambda_prev.is_nan() && (lambda - lambda_prev).abs() <= tol * lambda.abs() {
            return Ok(lambda.sqrt());
        }
        lambda_prev = lambda;
    }
    Err(SolveError::NoConvergence(max_iter))
}

fn cg_impl(
    g: &Graph,
    alpha: f64,
    rhs: &[f64],
    x0: &[f64],
    tol: f64,
    max_iter: usize,
    mut trace: Option<&mut Vec<Vec<f64>>>,
) -> Result<SolveReport, SolveError> {
    let n = g.node_count();
    for v in [rhs, x0] {
        if v.len() != n {
            return Err(SolveError::DimensionMismatch {
                got: v.len(),
                expected: n,
            });
        }
    }
    let target = tol * norm2(rhs);
    let mut x = x0.to_vec();
    let mut scratch = vec![0.0; n];
    let mut mx = vec![0.0; n];
    resolvent_apply(g, alpha, &x, &mut scratch, &mut mx);
    let mut r: Vec<f64> = rhs.iter().zip(&mx).map(|(b, m)| b - m).collect();
    let mut rs = dot(&r, &r);
    if let Some(t) = trace.as_deref_mut() {
        t.push(x.clone());
    }
    if rs.sqrt() <= target {
        return Ok(SolveReport {
            solution: x,
            iterations: 0,
            residual_norm: rs.sqrt(),
            converged: true,
        });
    }
    let mut p = r.clone();
    let mut mp = vec![0.0; n];
    for k in 1..=max_iter {
        resolvent_apply(g, alpha, &p, &mut scratch, &mut mp);
        let curvature = dot(&p, &mp);
        if curvature <= 0.0 {
            return Err(SolveError::NotPositiveDefinite(k));
        }
        let step = rs / curvature;
        for i in 0..n {
            x[i] += step * p[i];
            r[i] -= step * mp[i];
        }
        if let Some(t) = trace.as_deref_mut() {
            t.push(x.clone());
        }
        let rs_next = dot(&r, &r);
        if rs_next.sqrt() <= target {
            return Ok(SolveReport {
                solution: x,
                iterations: k,
                residual_norm: rs_next.sqrt(),
                converged: true,
            });
        }
        let beta = rs_next / rs;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        rs = rs_next;
    }
    Err(SolveError::NoConvergence(max_iter))
}

/// Unpreconditioned conjugate gradient on `(I - alpha*A) x = rhs`, started
/// from `x0`, stopping when the residual norm falls below `tol * ||rhs||`.
pub fn solve_resolvent_cg(
    g: &Graph,
    alpha: f64,
    rhs: &[f64],
    x0: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<SolveReport, SolveError> {
    cg_impl(g, alpha, rhs, x0, tol, max_iter, None)
}

/// Same as [`solve_resolvent_cg`] but also returns every iterate (including
/// the initial guess), for convergence diagnostics.
pub fn solve_resolvent_cg_traced(
    g: &Graph,
    alpha: f64,
    rhs: &[f64],
    x0: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<(SolveReport, Vec<Vec<f64>>), SolveError> {
    let mut iterates = Vec::new();
    let report = cg_impl(g, alpha, rhs, x0, tol, max_iter, Some(&mut iterates))?;
    Ok((report, iterates))
}

/// Truncated series for the resolvent: returns the partial sum
/// `sum_{r=0}^{L} alpha^r A^r rhs`, stopping at the first `L` where the norm
/// of the newly added term drops below `tol` times the norm of the partial
/// sum, or at `max_iter`. Always returns a result; check `converged`.
pub fn solve_resolvent_neumann(
    g: &Graph,
    alpha: f64,
    rhs: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<SolveReport, SolveError> {
    let n = g.node_count();
    if rhs.len() != n {
        return Err(SolveError::DimensionMismatch {
            got: rhs.len(),
            expected: n,
        });
    }
    let mut sum = rhs.to_vec();
    let mut term = rhs.to_vec();
    let mut scratch = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;
    let mut last_norm = norm2(&term);
    for l in 1..=max_iter {
        spmv_into(g, &term, &mut scratch);
        for i in 0..n {
            term[i] = alpha * scratch[i];
            sum[i] += term[i];
        }
        iterations = l;
        last_norm = norm2(&term);
        if last_norm <= tol * norm2(&sum) {
            converged = true;
            break;
        }
    }
    Ok(SolveReport {
        solution: sum,
        iterations,
        residual_norm: last_norm,
        converged,
    })
}

/// Estimate of the 2-norm condition number of `I - alpha*A`, from the
/// extreme eigenvalues of `A`: the largest via [`spectral_radius`], the
/// smallest via power iteration on the shifted matrix `rho*I - A`.
pub fn condition_estimate(g: &Graph, alpha: f64) -> Result<f64, SolveError> {
    let rho = spectral_radius(g, 1e-10, 10_000)?;
    let n = g.node_count();
    // The all-ones vector can be exactly orthogonal to the bottom
    // eigenvector (e.g. regular bipartite graphs), so start from a fixed
    // pseudo-random direction instead.
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x636f6e64);
    let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let vn = norm2(&v);
    v.iter_mut().for_each(|x| *x /= vn);
    let mut av = vec![0.0; n];
    let mut mu_prev = f64::NAN;
    let mut mu = 0.0;
    for _ in 0..10_000 {
        spmv_into(g, &v, &mut av);
        let mut w: Vec<f64> = (0..n).map(|i| rho * v[i] - av[i]).collect();
        mu = dot(&v, &w);
        let wn = norm2(&w);
        if wn == 0.0 {
            break;
        }
        w.iter_mut().for_each(|x| *x /= wn);
        v = w;
        if !mu_prev.is_nan() && (mu - mu_prev).abs() <= 1e-10 * mu.abs() {
            break;
        }
        mu_prev = mu;
    }
    let lambda_min = rho - mu;
    Ok((1.0 - alpha * lambda_min) / (1.0 - alpha * rho))
}
