//! Exact walk counting: total walks, lost-walk vectors for removed node and
//! edge sets, first-passage walks, and avoiding first-passage walks.
//!
//! Everything here runs in checked 64-bit integer arithmetic; walk counts
//! grow like `rho(A)^r`, so callers that need long damped series should use
//! the floating-point recurrences in [`crate::update`] instead.
//!
//! Conventions: the lost-walk vector at length zero is the zero vector, a
//! first-passage series starts with the indicator of its target, and a walk
//! "visits" a node set if any of its nodes (including the start) belongs to
//! the set, while it visits an edge only by traversing it.

use thiserror::Error;

use crate::graph::{remove_elements, split_boundary, Graph, GraphError, RemovalSet};

#[derive(Debug, Error, PartialEq)]
pub enum WalkError {
    #[error("walk count exceeds the 64-bit integer range")]
    IntegerOverflow,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("target node {0} must not belong to the avoided set")]
    TargetInAvoidSet(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkKind {
    Total,
    LostEdges,
    LostNodes,
    FirstPassage,
    AvoidingFirstPassage,
}

/// Length-indexed sequence of per-node walk counts; `vectors[r]` belongs to
/// walks of length `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkCountSeries {
    pub kind: WalkKind,
    pub vectors: Vec<Vec<u64>>,
    /// Walk target for the first-passage kinds.
    pub target: Option<usize>,
    /// Avoided nodes for [`WalkKind::AvoidingFirstPassage`].
    pub avoid: Vec<usize>,
}

impl WalkCountSeries {
    pub fn vector(&self, r: usize) -> &[u64] {
        &self.vectors[r]
    }

    pub fn max_length(&self) -> usize {
        self.vectors.len() - 1
    }
}

fn spmv_counts(g: &Graph, v: &[u64]) -> Result<Vec<u64>, WalkError> {
    let mut out = vec![0u64; g.node_count()];
    for u in 0..g.node_count() {
        let mut acc = 0u64;
        for &j in g.neighbors(u) {
            acc = acc.checked_add(v[j]).ok_or(WalkError::IntegerOverflow)?;
        }
        out[u] = acc;
    }
    Ok(out)
}

/// Adds `B * src` to `acc`, where `B` is the adjacency matrix holding
/// exactly the listed undirected edges.
fn add_edges_apply(
    edges: &[(usize, usize)],
    src: &[u64],
    acc: &mut [u64],
) -> Result<(), WalkError> {
    for &(u, v) in edges {
        acc[u] = acc[u]
            .checked_add(src[v])
            .ok_or(WalkError::IntegerOverflow)?;
        acc[v] = acc[v]
            .checked_add(src[u])
            .ok_or(WalkError::IntegerOverflow)?;
    }
    Ok(())
}

/// `A^j * 1` for `j = 0..=max_len`.
fn power_vectors(g: &Graph, max_len: usize) -> Result<Vec<Vec<u64>>, WalkError> {
    let mut out = Vec::with_capacity(max_len + 1);
    out.push(vec![1u64; g.node_count()]);
    for j in 1..=max_len {
        let next = spmv_counts(g, &out[j - 1])?;
        out.push(next);
    }
    Ok(out)
}

/// Walks of every length up to `max_len` leaving each node: `A^r * 1`.
pub fn total_walks(g: &Graph, max_len: usize) -> Result<WalkCountSeries, WalkError> {
    Ok(WalkCountSeries {
        kind: WalkKind::Total,
        vectors: power_vectors(g, max_len)?,
        target: None,
        avoid: Vec::new(),
    })
}

/// Reference lost-walk count via the difference of matrix powers,
/// `(A^r - A_S^r) * 1`. Ground truth for the structured routines below.
pub fn lost_walks_direct(g: &Graph, s: &RemovalSet, r: usize) -> Result<Vec<u64>, WalkError> {
    let gs = remove_elements(g, s)?;
    let mut full = vec![1u64; g.node_count()];
    let mut removed = vec![1u64; g.node_count()];
    for _ in 0..r {
        full = spmv_counts(g, &full)?;
        removed = spmv_counts(&gs, &removed)?;
    }
    full.iter()
        .zip(&removed)
        .map(|(a, b)| a.checked_sub(*b).ok_or(WalkError::IntegerOverflow))
        .collect()
}

fn check_node(g: &Graph, w: usize) -> Result<(), WalkError> {
    if w >= g.node_count() {
        return Err(WalkError::Graph(GraphError::MissingElement(format!(
            "node {w}"
        ))));
    }
    Ok(())
}

/// First-passage walk counts to `w`: `vectors[k][i]` is the number of walks
/// of length `k` from `i` that reach `w` at the final step and never before.
/// Built with the recurrence "multiply by `A`, zero the target entry".
pub fn first_passage_series(
    g: &Graph,
    w: usize,
    max_len: usize,
) -> Result<WalkCountSeries, WalkError> {
    check_node(g, w)?;
    let n = g.node_count();
    let mut q = vec![0u64; n];
    q[w] = 1;
    let mut vectors = Vec::with_capacity(max_len + 1);
    vectors.push(q.clone());
    for _ in 1..=max_len {
        q = spmv_counts(g, &q)?;
        q[w] = 0;
        vectors.push(q.clone());
    }
    Ok(WalkCountSeries {
        kind: WalkKind::FirstPassage,
        vectors,
        target: Some(w),
        avoid: Vec::new(),
    })
}

/// First-passage walks to `w` whose earlier nodes also avoid `avoid`:
/// the recurrence multiplies by `A` and zeroes every entry of
/// `avoid ∪ {w}`.
pub fn avoiding_first_passage_series(
    g: &Graph,
    w: usize,
    avoid: &[usize],
    max_len: usize,
) -> Result<WalkCountSeries, WalkError> {
    check_node(g, w)?;
    for &f in avoid {
        check_node(g, f)?;
        if f == w {
            return Err(WalkError::TargetInAvoidSet(w));
        }
    }
    let n = g.node_count();
    let mut q = vec![0u64; n];
    q[w] = 1;
    let mut vectors = Vec::with_capacity(max_len + 1);
    vectors.push(q.clone());
    for _ in 1..=max_len {
        q = spmv_counts(g, &q)?;
        q[w] = 0;
        for &f in avoid {
            q[f] = 0;
        }
        vectors.push(q.clone());
    }
    let mut sorted = avoid.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(WalkCountSeries {
        kind: WalkKind::AvoidingFirstPassage,
        vectors,
        target: Some(w),
        avoid: sorted,
    })
}

/// Walks of length `r` visiting at least one edge of the set, by splitting
/// each walk at its first traversal of a removed edge: accumulates
/// `sum_k A_E^k D A^{r-1-k} * 1` where `D` carries the removed edges and
/// `A_E` the rest, reusing the cached power vectors `A^j * 1`.
pub fn lost_walks_edges(g: &Graph, es: &RemovalSet, r: usize) -> Result<Vec<u64>, WalkError> {
    let pairs = match es {
        RemovalSet::Edges(pairs) => pairs.clone(),
        RemovalSet::Nodes(_) => {
            return Err(WalkError::Graph(GraphError::InvalidParameters(
                "lost_walks_edges expects an edge set".into(),
            )))
        }
    };
    let ge = remove_elements(g, es)?;
    let n = g.node_count();
    if r == 0 {
        return Ok(vec![0; n]);
    }
    let powers = power_vectors(g, r - 1)?;
    let mut acc = vec![0u64; n];
    for u_j in powers.iter().take(r) {
        let mut next = if acc.iter().all(|&x| x == 0) {
            vec![0u64; n]
        } else {
            spmv_counts(&ge, &acc)?
        };
        add_edges_apply(&pairs, u_j, &mut next)?;
        acc = next;
    }
    Ok(acc)
}

/// Evaluation route for [`lost_walks_nodes`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeLossMethod {
    /// Boundary decomposition `A = A_N + A_in + A_out`:
    /// `c_r = A_in A^{r-1} 1 + sum_k A_N^k A_out A^{r-1-k} 1`.
    Boundary,
    /// Per-node avoiding first-passage expansion: entry `i` outside the set
    /// is `sum_w sum_k q_k^{F_w}(i) * [A^{r-k} 1]_w` with `F_w` the other
    /// set members; entries inside the set count all walks.
    FirstPassage,
}

/// Walks of length `r` visiting at least one node of the set.
pub fn lost_walks_nodes(
    g: &Graph,
    ns: &RemovalSet,
    r: usize,
    method: NodeLossMethod,
) -> Result<Vec<u64>, WalkError> {
    let ids = match ns {
        RemovalSet::Nodes(ids) => ids.clone(),
        RemovalSet::Edges(_) => {
            return Err(WalkError::Graph(GraphError::InvalidParameters(
                "lost_walks_nodes expects a node set".into(),
            )))
        }
    };
    let n = g.node_count();
    if r == 0 {
        return Ok(vec![0; n]);
    }
    match method {
        NodeLossMethod::Boundary => {
            let boundary = split_boundary(g, ns)?;
            let gn = remove_elements(g, ns)?;
            let powers = power_vectors(g, r - 1)?;
            let mut acc = vec![0u64; n];
            for u_j in powers.iter().take(r) {
                let mut next = if acc.iter().all(|&x| x == 0) {
                    vec![0u64; n]
                } else {
                    spmv_counts(&gn, &acc)?
                };
                add_edges_apply(&boundary.crossing, u_j, &mut next)?;
                acc = next;
            }
            add_edges_apply(&boundary.internal, &powers[r - 1], &mut acc)?;
            Ok(acc)
        }
        NodeLossMethod::FirstPassage => {
            let powers = power_vectors(g, r)?;
            let mut acc = vec![0u64; n];
            for &w in &ids {
                let others: Vec<usize> = ids.iter().copied().filter(|&x| x != w).collect();
                let series = avoiding_first_passage_series(g, w, &others, r)?;
                for k in 1..=r {
                    let weight = powers[r - k][w];
                    if weight == 0 {
                        continue;
                    }
                    for i in 0..n {
                        let term = series.vectors[k][i]
                            .checked_mul(weight)
                            .ok_or(WalkError::IntegerOverflow)?;
                        acc[i] = acc[i].checked_add(term).ok_or(WalkError::IntegerOverflow)?;
                    }
                }
            }
            for &w in &ids {
                acc[w] = powers[r][w];
            }
            Ok(acc)
        }
    }
}

/// Walks of length `r` visiting the single node `w`, by the first-passage
/// expansion `sum_{k=0}^{r} [A^{r-k} 1]_w * q_k`.
pub fn lost_walks_single_node(g: &Graph, w: usize, r: usize) -> Result<Vec<u64>, WalkError> {
    check_node(g, w)?;
    let n = g.node_count();
    if r == 0 {
        return Ok(vec![0; n]);
    }
    let powers = power_vectors(g, r)?;
    let series = first_passage_series(g, w, r)?;
    let mut acc = vec![0u64; n];
    for k in 0..=r {
        let weight = powers[r - k][w];
        if weight == 0 {
            continue;
        }
        for i in 0..n {
            let term = series.vectors[k][i]
                .checked_mul(weight)
                .ok_or(WalkError::IntegerOverflow)?;
            acc[i] = acc[i].checked_add(term).ok_or(WalkError::IntegerOverflow)?;
        }
    }
    Ok(acc)
}

/// Sum of the per-node single-removal counts. Deliberately ignores the
/// interaction between set members, so walks touching two of them are
/// counted more than once; exposed as a diagnostic of that overcount.
pub fn lost_walks_nodes_naive(g: &Graph, ns: &RemovalSet, r: usize) -> Result<Vec<u64>, WalkError> {
    let ids = match ns {
        RemovalSet::Nodes(ids) => ids.clone(),
        RemovalSet::Edges(_) => {
            return Err(WalkError::Graph(GraphError::InvalidParameters(
                "lost_walks_nodes_naive expects a node set".into(),
            )))
        }
    };
    let n = g.node_count();
    let mut acc = vec![0u64; n];
    for &w in &ids {
        let single = lost_walks_single_node(g, w, r)?;
        for i in 0..n {
            acc[i] = acc[i]
                .checked_add(single[i])
                .ok_or(WalkError::IntegerOverflow)?;
        }
    }
    Ok(acc)
}

/// Lost-walk series up to `max_len` for either removal kind; index 0 holds
/// the zero vector by convention.
pub fn lost_walks_series(
    g: &Graph,
    s: &RemovalSet,
    max_len: usize,
) -> Result<WalkCountSeries, WalkError> {
    let n = g.node_count();
    let mut vectors = vec![vec![0u64; n]];
    for r in 1..=max_len {
        let v = match s {
            RemovalSet::Edges(_) => lost_walks_edges(g, s, r)?,
            RemovalSet::Nodes(_) => lost_walks_nodes(g, s, r, NodeLossMethod::Boundary)?,
        };
        vectors.push(v);
    }
    Ok(WalkCountSeries {
        kind: match s {
            RemovalSet::Edges(_) => WalkKind::LostEdges,
            RemovalSet::Nodes(_) => WalkKind::LostNodes,
        },
        vectors,
        target: None,
        avoid: Vec::new(),
    })
}

/// Formula-independent reference counts produced by explicitly enumerating
/// walks as node sequences. Exponential in the walk length; intended for
/// graphs of a dozen nodes and lengths up to about six.
pub mod brute {
    use super::WalkError;
    use crate::graph::{Graph, RemovalSet};

    /// First-passage walk counts to `w` by direct enumeration:
    /// `out[k][i]` counts length-`k` walks from `i` ending at `w` that do
    /// not touch `w` earlier.
    pub fn first_passage_counts(g: &Graph, w: usize, max_len: usize) -> Vec<Vec<u64>> {
        avoiding_first_passage_counts(g, w, &[], max_len).expect("empty avoid set is valid")
    }

    /// Avoiding first-passage counts: as above, with every node before the
    /// final one also outside `avoid`.
    pub fn avoiding_first_passage_counts(
        g: &Graph,
        w: usize,
        avoid: &[usize],
        max_len: usize,
    ) -> Result<Vec<Vec<u64>>, WalkError> {
        if avoid.contains(&w) {
            return Err(WalkError::TargetInAvoidSet(w));
        }
        let n = g.node_count();
        let mut blocked = vec![false; n];
        for &f in avoid {
            blocked[f] = true;
        }
        let mut out = vec![vec![0u64; n]; max_len + 1];
        out[0][w] = 1;

        fn extend(
            g: &Graph,
            w: usize,
            blocked: &[bool],
            start: usize,
            cur: usize,
            depth: usize,
            max_len: usize,
            out: &mut [Vec<u64>],
        ) {
            if depth == max_len {
                return;
            }
            for &next in g.neighbors(cur) {
                if next == w {
                    out[depth + 1][start] += 1;
                } else if !blocked[next] {
                    extend(g, w, blocked, start, next, depth + 1, max_len, out);
                }
            }
        }

        for start in 0..n {
            if start == w || blocked[start] {
                continue;
            }
            extend(g, w, &blocked, start, start, 0, max_len, &mut out);
        }
        Ok(out)
    }

    /// Per-node count of length-`r` walks that visit at least one element
    /// of the removal set, by enumerating every walk of length `r`.
    /// Length zero is the zero vector by convention.
    pub fn visiting_walk_counts(g: &Graph, s: &RemovalSet, r: usize) -> Vec<u64> {
        let n = g.node_count();
        let mut out = vec![0u64; n];
        if r == 0 {
            return out;
        }
        let node_set: Vec<bool> = match s {
            RemovalSet::Nodes(ids) => {
                let mut m = vec![false; n];
                for &w in ids {
                    m[w] = true;
                }
                m
            }
            RemovalSet::Edges(_) => vec![false; n],
        };
        let edge_set: std::collections::HashSet<(usize, usize)> = match s {
            RemovalSet::Edges(pairs) => pairs.iter().copied().collect(),
            RemovalSet::Nodes(_) => Default::default(),
        };

        #[allow(clippy::too_many_arguments)]
        fn walk(
            g: &Graph,
            node_set: &[bool],
            edge_set: &std::collections::HashSet<(usize, usize)>,
            cur: usize,
            depth: usize,
            r: usize,
            hit: bool,
            tally: &mut u64,
        ) {
            if depth == r {
                if hit {
                    *tally += 1;
                }
                return;
            }
            for &next in g.neighbors(cur) {
                let edge = (cur.min(next), cur.max(next));
                let hit_next = hit || node_set[next] || edge_set.contains(&edge);
                walk(g, node_set, edge_set, next, depth + 1, r, hit_next, tally);
            }
        }

        for start in 0..n {
            let mut tally = 0u64;
            walk(
                g,
                &node_set,
                &edge_set,
                start,
                0,
                r,
                node_set[start],
                &mut tally,
            );
            out[start] = tally;
        }
        out
    }
}
