//! Simple undirected graphs in compressed sparse row form, plus the
//! ingestion, generation, and mutation operations the rest of the crate
//! builds on.
//!
//! Nodes are `0..n` internally; all file formats and CLI output use 1-based
//! ids unless stated otherwise. Removing a node never shrinks the graph: it
//! deletes the incident edges and leaves the node isolated, so vectors
//! indexed by node id stay aligned across removals.

use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("line {line}: expected two integer node ids, got `{text}`")]
    MalformedLine { line: usize, text: String },
    #[error("self-loop at node {0} (simple graphs only)")]
    SelfLoop(usize),
    #[error("node id {id} out of range (n = {n})")]
    IndexOutOfRange { id: usize, n: usize },
    #[error("unsupported Matrix Market header: {0}")]
    UnsupportedHeader(String),
    #[error("malformed Matrix Market entry on line {0}")]
    MalformedEntry(usize),
    #[error("requested {requested} edges but only {available} node pairs exist")]
    TooManyEdges { requested: usize, available: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("element {0} not present in the graph")]
    MissingElement(String),
    #[error("removal set must be nonempty")]
    EmptyRemovalSet,
}

/// Immutable simple undirected graph with unit weights, stored as CSR.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    m: usize,
}

impl Graph {
    /// Builds a graph on `n` nodes from an undirected edge list.
    /// Duplicate edges are merged; self-loops are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        Ok(Self::build(n, edges)?.0)
    }

    fn build(n: usize, edges: &[(usize, usize)]) -> Result<(Graph, usize), GraphError> {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::IndexOutOfRange { id: u, n });
            }
            if v >= n {
                return Err(GraphError::IndexOutOfRange { id: v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut duplicates = 0usize;
        for list in &mut adj {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            duplicates += before - list.len();
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        row_ptr.push(0);
        for list in &adj {
            cols.extend_from_slice(list);
            row_ptr.push(cols.len());
        }
        let m = cols.len() / 2;
        // Each duplicate pair was counted once per endpoint.
        Ok((
            Graph {
                n,
                row_ptr,
                cols,
                m,
            },
            duplicates / 2,
        ))
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row_ptr[u + 1] - self.row_ptr[u]
    }

    /// Neighbors of `u`, sorted ascending.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.cols[self.row_ptr[u]..self.row_ptr[u + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// All undirected edges as pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            for &v in self.neighbors(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Component label per node; labels are the smallest node id in the
    /// component.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            let mut queue = std::collections::VecDeque::new();
            label[start] = start;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbors(u) {
                    if label[v] == usize::MAX {
                        label[v] = start;
                        queue.push_back(v);
                    }
                }
            }
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().iter().all(|&c| c == 0)
    }
}

/// A set of nodes or a set of undirected edges scheduled for removal.
/// Members are sorted and duplicate-free; edges stored as `(u, v)`, `u < v`.
#[derive(Debug, Clone, PartialEq)]
pub enum RemovalSet {
    Nodes(Vec<usize>),
    Edges(Vec<(usize, usize)>),
}

impl RemovalSet {
    pub fn nodes(mut ids: Vec<usize>) -> Result<RemovalSet, GraphError> {
        if ids.is_empty() {
            return Err(GraphError::EmptyRemovalSet);
        }
        ids.sort_unstable();
        ids.dedup();
        Ok(RemovalSet::Nodes(ids))
    }

    pub fn edges(pairs: Vec<(usize, usize)>) -> Result<RemovalSet, GraphError> {
        if pairs.is_empty() {
            return Err(GraphError::EmptyRemovalSet);
        }
        let mut norm: Vec<(usize, usize)> = Vec::with_capacity(pairs.len());
        for (u, v) in pairs {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        norm.dedup();
        Ok(RemovalSet::Edges(norm))
    }

    pub fn single_node(w: usize) -> RemovalSet {
        RemovalSet::Nodes(vec![w])
    }

    pub fn single_edge(u: usize, v: usize) -> RemovalSet {
        RemovalSet::Edges(vec![(u.min(v), u.max(v))])
    }

    pub fn len(&self) -> usize {
        match self {
            RemovalSet::Nodes(v) => v.len(),
            RemovalSet::Edges(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn validate(&self, g: &Graph) -> Result<(), GraphError> {
        match self {
            RemovalSet::Nodes(ids) => {
                for &w in ids {
                    if w >= g.node_count() {
                        return Err(GraphError::MissingElement(format!("node {w}")));
                    }
                }
            }
            RemovalSet::Edges(pairs) => {
                for &(u, v) in pairs {
                    if !g.has_edge(u, v) {
                        return Err(GraphError::MissingElement(format!("edge {{{u},{v}}}")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Deletes the elements of `s` from `g`. Node removal isolates the node and
/// keeps the dimension unchanged.
pub fn remove_elements(g: &Graph, s: &RemovalSet) -> Result<Graph, GraphError> {
    s.validate(g)?;
    let kept: Vec<(usize, usize)> = match s {
        RemovalSet::Nodes(ids) => {
            let mut gone = vec![false; g.node_count()];
            for &w in ids {
                gone[w] = true;
            }
            g.edges()
                .into_iter()
                .filter(|&(u, v)| !gone[u] && !gone[v])
                .collect()
        }
        RemovalSet::Edges(pairs) => {
            let gone: HashSet<(usize, usize)> = pairs.iter().copied().collect();
            g.edges()
                .into_iter()
                .filter(|e| !gone.contains(e))
                .collect()
        }
    };
    Graph::from_edges(g.node_count(), &kept)
}

/// Edge partition induced by a node set: `internal` edges join two set
/// members, `crossing` edges join a member to the rest of the graph.
/// Together with the edges of the removed graph they recover all of `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct Boundary {
    pub internal: Vec<(usize, usize)>,
    pub crossing: Vec<(usize, usize)>,
}

pub fn split_boundary(g: &Graph, ns: &RemovalSet) -> Result<Boundary, GraphError> {
    let ids = match ns {
        RemovalSet::Nodes(ids) => ids,
        RemovalSet::Edges(_) => {
            return Err(GraphError::InvalidParameters(
                "split_boundary expects a node set".into(),
            ))
        }
    };
    ns.validate(g)?;
    let mut in_set = vec![false; g.node_count()];
    for &w in ids {
        in_set[w] = true;
    }
    let mut internal = Vec::new();
    let mut crossing = Vec::new();
    for (u, v) in g.edges() {
        match (in_set[u], in_set[v]) {
            (true, true) => internal.push((u, v)),
            (false, false) => {}
            _ => crossing.push((u, v)),
        }
    }
    Ok(Boundary { internal, crossing })
}

/// Geodesic distances from `source`; `None` marks unreachable nodes.
pub fn bfs_distance(g: &Graph, source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.node_count()];
    dist[source] = Some(0);
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &v in g.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphStats {
    pub diameter: usize,
    pub mean_eccentricity: f64,
    pub mean_degree: f64,
    /// False when the stats were computed on the largest component only.
    pub connected: bool,
}

/// Exact BFS-based diameter and eccentricity. On a disconnected graph the
/// distance statistics are taken over the largest component and `connected`
/// is set to false.
pub fn graph_stats(g: &Graph) -> GraphStats {
    let n = g.node_count();
    if n == 0 {
        return GraphStats {
            diameter: 0,
            mean_eccentricity: 0.0,
            mean_degree: 0.0,
            connected: true,
        };
    }
    let labels = g.components();
    let mut counts = std::collections::HashMap::new();
    for &c in &labels {
        *counts.entry(c).or_insert(0usize) += 1;
    }
    let connected = counts.len() == 1;
    let (&largest, _) = counts
        .iter()
        .max_by_key(|&(label, count)| (*count, std::cmp::Reverse(*label)))
        .unwrap();
    let members: Vec<usize> = (0..n).filter(|&u| labels[u] == largest).collect();

    let mut diameter = 0usize;
    let mut ecc_sum = 0usize;
    for &u in &members {
        let dist = bfs_distance(g, u);
        let ecc = members
            .iter()
            .map(|&v| dist[v].expect("same component"))
            .max()
            .unwrap();
        ecc_sum += ecc;
        diameter = diameter.max(ecc);
    }
    GraphStats {
        diameter,
        mean_eccentricity: ecc_sum as f64 / members.len() as f64,
        mean_degree: 2.0 * g.edge_count() as f64 / n as f64,
        connected,
    }
}

/// A parsed graph plus how many duplicate input edges were merged away.
#[derive(Debug)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub duplicates_merged: usize,
}

/// Parses a whitespace-separated edge list. Lines starting with `#` and
/// blank lines are ignored. With `one_based` set, node ids start at 1.
pub fn load_edge_list(text: &str, one_based: bool) -> Result<LoadedGraph, GraphError> {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut max_id = 0usize;
    let mut any = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<usize, GraphError> {
            tok.and_then(|t| t.parse::<usize>().ok())
                .ok_or(GraphError::MalformedLine {
                    line: idx + 1,
                    text: line.to_string(),
                })
        };
        let a = parse(tokens.next())?;
        let b = parse(tokens.next())?;
        if tokens.next().is_some() {
            return Err(GraphError::MalformedLine {
                line: idx + 1,
                text: line.to_string(),
            });
        }
        let (u, v) = if one_based {
            if a == 0 || b == 0 {
                return Err(GraphError::IndexOutOfRange { id: 0, n: 0 });
            }
            (a - 1, b - 1)
        } else {
            (a, b)
        };
        if u == v {
            return Err(GraphError::SelfLoop(if one_based { a } else { u }));
        }
        max_id = max_id.max(u).max(v);
        edges.push((u, v));
        any = true;
    }
    let n = if any { max_id + 1 } else { 0 };
    let (graph, duplicates_merged) = Graph::build(n, &edges)?;
    Ok(LoadedGraph {
        graph,
        duplicates_merged,
    })
}

/// Parses a Matrix Market coordinate file with `pattern`, `real`, or
/// `integer` field and `symmetric` symmetry; values are ignored and the
/// pattern is taken as the adjacency structure.
pub fn load_matrix_market(text: &str) -> Result<LoadedGraph, GraphError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| GraphError::UnsupportedHeader("empty file".into()))?;
    let tokens: Vec<String> = header
        .split_whitespace()
        .map(|t| t.to_lowercase())
        .collect();
    if tokens.len() < 5
        || tokens[0] != "%%matrixmarket"
        || tokens[1] != "matrix"
        || tokens[2] != "coordinate"
        || !matches!(tokens[3].as_str(), "pattern" | "real" | "integer")
        || tokens[4] != "symmetric"
    {
        return Err(GraphError::UnsupportedHeader(header.trim().to_string()));
    }

    let mut size: Option<(usize, usize, usize)> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (idx, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let nums: Vec<&str> = line.split_whitespace().collect();
        if size.is_none() {
            if nums.len() != 3 {
                return Err(GraphError::MalformedEntry(idx + 1));
            }
            let rows = nums[0]
                .parse::<usize>()
                .map_err(|_| GraphError::MalformedEntry(idx + 1))?;
            let cols = nums[1]
                .parse::<usize>()
                .map_err(|_| GraphError::MalformedEntry(idx + 1))?;
            let nnz = nums[2]
                .parse::<usize>()
                .map_err(|_| GraphError::MalformedEntry(idx + 1))?;
            if rows != cols {
                return Err(GraphError::UnsupportedHeader(format!(
                    "non-square size {rows}x{cols}"
                )));
            }
            size = Some((rows, cols, nnz));
            continue;
        }
        if nums.len() < 2 {
            return Err(GraphError::MalformedEntry(idx + 1));
        }
        let i = nums[0]
            .parse::<usize>()
            .map_err(|_| GraphError::MalformedEntry(idx + 1))?;
        let j = nums[1]
            .parse::<usize>()
            .map_err(|_| GraphError::MalformedEntry(idx + 1))?;
        let (n, _, _) = size.unwrap();
        if i == 0 || j == 0 || i > n || j > n {
            return Err(GraphError::IndexOutOfRange { id: i.max(j), n });
        }
        if i == j {
            return Err(GraphError::SelfLoop(i));
        }
        edges.push((i - 1, j - 1));
    }
    let (n, _, _) =
        size.ok_or_else(|| GraphError::UnsupportedHeader("missing size line".into()))?;
    let (graph, duplicates_merged) = Graph::build(n, &edges)?;
    Ok(LoadedGraph {
        graph,
        duplicates_merged,
    })
}

fn pair_index_to_edge(n: usize, k: u64) -> (usize, usize) {
    // Pairs (u,v), u<v, in lexicographic order; row u starts at
    // c(u) = u*(n-1) - u*(u-1)/2.
    let offset = |u: u64| u * (n as u64 - 1) - u * u.saturating_sub(1) / 2;
    let (mut lo, mut hi) = (0u64, n as u64 - 1);
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if offset(mid) <= k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u = lo;
    let v = u + 1 + (k - offset(u));
    (u as usize, v as usize)
}

/// Uniform simple graph with exactly `m` distinct edges (Floyd sampling of an
/// `m`-subset of all node pairs). Deterministic for a fixed seed.
pub fn gen_erdos_renyi(n: usize, m: usize, seed: u64) -> Result<Graph, GraphError> {
    let total = if n < 2 {
        0
    } else {
        n as u64 * (n as u64 - 1) / 2
    };
    if m as u64 > total {
        return Err(GraphError::TooManyEdges {
            requested: m,
            available: total as usize,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen: HashSet<u64> = HashSet::with_capacity(m * 2);
    for j in (total - m as u64)..total {
        let t = rng.random_range(0..=j);
        if !chosen.insert(t) {
            chosen.insert(j);
        }
    }
    let edges: Vec<(usize, usize)> = chosen.iter().map(|&k| pair_index_to_edge(n, k)).collect();
    Graph::from_edges(n, &edges)
}

/// Preferential-attachment graph: a `(d+1)`-clique seed, then each new node
/// attaches to `d` distinct existing nodes sampled without replacement with
/// probability proportional to current degree. Always connected.
pub fn gen_preferential_attachment(n: usize, d: usize, seed: u64) -> Result<Graph, GraphError> {
    if d < 1 {
        return Err(GraphError::InvalidParameters(
            "attachment degree must be >= 1".into(),
        ));
    }
    if n <= d {
        return Err(GraphError::InvalidParameters(format!(
            "need n > d, got n = {n}, d = {d}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(d * (d + 1) / 2 + (n - d - 1) * d);
    // Every edge contributes both endpoints; sampling an index uniformly
    // from this list is degree-proportional sampling.
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * edges.capacity());
    for u in 0..=d {
        for v in (u + 1)..=d {
            edges.push((u, v));
            endpoints.push(u);
            endpoints.push(v);
        }
    }
    let mut picks: Vec<usize> = Vec::with_capacity(d);
    for t in (d + 1)..n {
        picks.clear();
        while picks.len() < d {
            let cand = endpoints[rng.random_range(0..endpoints.len())];
            if !picks.contains(&cand) {
                picks.push(cand);
            }
        }
        for &target in &picks {
            edges.push((target, t));
            endpoints.push(target);
            endpoints.push(t);
        }
    }
    Graph::from_edges(n, &edges)
}
