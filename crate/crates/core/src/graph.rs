//! Weighted opinion graphs and the Laplacians built from them.
//!
//! A [`Graph`] is immutable once built. Edges are stored once per ordered
//! pair (directed) or once per unordered pair with `src < dst` (undirected);
//! duplicates are merged by summing their weights at construction time.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use nalgebra::{DMatrix, DVector};

use crate::error::GraphError;

/// Largest node count accepted by [`edge_expansion`].
pub const EXPANSION_MAX_NODES: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
}

impl Edge {
    pub fn new(src: usize, dst: usize, weight: f64) -> Self {
        Self { src, dst, weight }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    directed: bool,
    n: usize,
    edges: Vec<Edge>,
    opinions: DVector<f64>,
    node_weights: Option<DVector<f64>>,
    fixed: Option<BTreeSet<usize>>,
}

impl Graph {
    /// Validates and builds a graph. Parallel edges are merged by summing
    /// their weights; for undirected graphs `(i, j)` and `(j, i)` are the
    /// same edge.
    pub fn new<I>(
        directed: bool,
        n: usize,
        edges: I,
        opinions: Vec<f64>,
    ) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = Edge>,
    {
        if opinions.len() != n {
            return Err(GraphError::LengthMismatch {
                what: "opinions",
                got: opinions.len(),
                expected: n,
            });
        }
        for (index, &value) in opinions.iter().enumerate() {
            if !value.is_finite() {
                return Err(GraphError::BadValue {
                    what: "opinions",
                    index,
                    value,
                });
            }
        }
        let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for e in edges {
            for index in [e.src, e.dst] {
                if index >= n {
                    return Err(GraphError::IndexOutOfRange { index, n });
                }
            }
            if e.src == e.dst {
                return Err(GraphError::SelfLoop(e.src));
            }
            if !(e.weight > 0.0 && e.weight.is_finite()) {
                return Err(GraphError::BadWeight {
                    src: e.src,
                    dst: e.dst,
                    weight: e.weight,
                });
            }
            let key = if directed {
                (e.src, e.dst)
            } else {
                (e.src.min(e.dst), e.src.max(e.dst))
            };
            *merged.entry(key).or_insert(0.0) += e.weight;
        }
        let edges = merged
            .into_iter()
            .map(|((src, dst), weight)| Edge { src, dst, weight })
            .collect();
        Ok(Self {
            directed,
            n,
            edges,
            opinions: DVector::from_vec(opinions),
            node_weights: None,
            fixed: None,
        })
    }

    pub fn with_node_weights(mut self, weights: Vec<f64>) -> Result<Self, GraphError> {
        if weights.len() != self.n {
            return Err(GraphError::LengthMismatch {
                what: "node_weights",
                got: weights.len(),
                expected: self.n,
            });
        }
        for (index, &value) in weights.iter().enumerate() {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(GraphError::BadValue {
                    what: "node_weights",
                    index,
                    value,
                });
            }
        }
        self.node_weights = Some(DVector::from_vec(weights));
        Ok(self)
    }

    pub fn with_fixed<I: IntoIterator<Item = usize>>(
        mut self,
        fixed: I,
    ) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for index in fixed {
            if index >= self.n {
                return Err(GraphError::IndexOutOfRange { index, n: self.n });
            }
            set.insert(index);
        }
        self.fixed = if set.is_empty() { None } else { Some(set) };
        Ok(self)
    }

    /// Same structure with a different internal-opinion vector.
    pub fn with_opinions(&self, opinions: &DVector<f64>) -> Result<Self, GraphError> {
        if opinions.len() != self.n {
            return Err(GraphError::LengthMismatch {
                what: "opinions",
                got: opinions.len(),
                expected: self.n,
            });
        }
        let mut g = self.clone();
        g.opinions = opinions.clone();
        Ok(g)
    }

    pub fn without_node_weights(&self) -> Self {
        let mut g = self.clone();
        g.node_weights = None;
        g
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn opinions(&self) -> &DVector<f64> {
        &self.opinions
    }

    pub fn node_weights(&self) -> Option<&DVector<f64>> {
        self.node_weights.as_ref()
    }

    /// Node weights, defaulting to all ones.
    pub fn node_weights_or_ones(&self) -> DVector<f64> {
        self.node_weights
            .clone()
            .unwrap_or_else(|| DVector::from_element(self.n, 1.0))
    }

    pub fn fixed_nodes(&self) -> Option<&BTreeSet<usize>> {
        self.fixed.as_ref()
    }

    pub fn is_fixed(&self, i: usize) -> bool {
        self.fixed.as_ref().is_some_and(|f| f.contains(&i))
    }

    /// True when every edge has weight exactly 1.
    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|e| e.weight == 1.0)
    }

    /// Directed arcs: undirected edges appear once in each direction.
    pub fn arcs(&self) -> Vec<Edge> {
        if self.directed {
            return self.edges.clone();
        }
        let mut arcs = Vec::with_capacity(2 * self.edges.len());
        for e in &self.edges {
            arcs.push(*e);
            arcs.push(Edge::new(e.dst, e.src, e.weight));
        }
        arcs.sort_by_key(|e| (e.src, e.dst));
        arcs
    }

    /// Out-neighbour lists `(j, w_ij)` over the arc view.
    pub fn out_adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in self.arcs() {
            adj[e.src].push((e.dst, e.weight));
        }
        adj
    }

    /// Weight of the arc `i -> j` (0 when absent).
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        let key = if self.directed {
            (i, j)
        } else {
            (i.min(j), i.max(j))
        };
        self.edges
            .binary_search_by_key(&key, |e| (e.src, e.dst))
            .map(|k| self.edges[k].weight)
            .unwrap_or(0.0)
    }

    /// The bidirected directed graph carrying the same arcs.
    pub fn as_directed(&self) -> Self {
        if self.directed {
            return self.clone();
        }
        Self {
            directed: true,
            edges: self.arcs(),
            ..self.clone()
        }
    }

    /// Every edge weight multiplied by `factor` (> 0).
    pub fn scaled(&self, factor: f64) -> Result<Self, GraphError> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(GraphError::BadAddedWeight(factor));
        }
        let mut g = self.clone();
        for e in &mut g.edges {
            e.weight *= factor;
        }
        Ok(g)
    }

    /// True when `w_ij = w_ji` for every pair (always for undirected graphs).
    pub fn is_symmetric(&self) -> bool {
        !self.directed
            || self
                .edges
                .iter()
                .all(|e| self.weight(e.dst, e.src) == e.weight)
    }

    /// Subgraph induced by `nodes` (in the given order), carrying opinions and
    /// node weights. Fixed-node markers are dropped.
    pub fn induced(&self, nodes: &[usize]) -> Self {
        let mut local = vec![usize::MAX; self.n];
        for (k, &v) in nodes.iter().enumerate() {
            local[v] = k;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| local[e.src] != usize::MAX && local[e.dst] != usize::MAX)
            .map(|e| Edge::new(local[e.src], local[e.dst], e.weight));
        let opinions = nodes.iter().map(|&v| self.opinions[v]).collect();
        let mut g = Self::new(self.directed, nodes.len(), edges, opinions)
            .expect("induced subgraph of a valid graph is valid");
        if let Some(w) = &self.node_weights {
            g.node_weights = Some(DVector::from_iterator(
                nodes.len(),
                nodes.iter().map(|&v| w[v]),
            ));
        }
        g
    }
}

/// Out-degree Laplacian `L` and the Laplacian `A` of the symmetrised graph
/// (weights `w_ij + w_ji`). `A = L + Lᵀ` holds exactly when the graph is
/// Eulerian.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianPair {
    pub l: DMatrix<f64>,
    pub a: DMatrix<f64>,
}

/// Builds `L` on the arc view (so undirected graphs get `A = 2L`).
pub fn laplacians(g: &Graph) -> LaplacianPair {
    let n = g.n();
    let mut l = DMatrix::zeros(n, n);
    let mut a = DMatrix::zeros(n, n);
    for e in g.arcs() {
        l[(e.src, e.src)] += e.weight;
        l[(e.src, e.dst)] -= e.weight;
        a[(e.src, e.src)] += e.weight;
        a[(e.dst, e.dst)] += e.weight;
        a[(e.src, e.dst)] -= e.weight;
        a[(e.dst, e.src)] -= e.weight;
    }
    LaplacianPair { l, a }
}

/// Weighted in- and out-degree of every node over the arc view.
pub fn degrees(g: &Graph) -> (Vec<f64>, Vec<f64>) {
    let mut din = vec![0.0; g.n()];
    let mut dout = vec![0.0; g.n()];
    for e in g.arcs() {
        dout[e.src] += e.weight;
        din[e.dst] += e.weight;
    }
    (din, dout)
}

/// Maximum weighted degree. Directed graphs take the larger of in- and
/// out-weight at each node.
pub fn max_degree(g: &Graph) -> f64 {
    let (din, dout) = degrees(g);
    din.iter()
        .zip(&dout)
        .map(|(a, b)| a.max(*b))
        .fold(0.0, f64::max)
}

/// In-weight equals out-weight at every node (relative tolerance 1e-12).
pub fn is_eulerian(g: &Graph) -> bool {
    if !g.is_directed() {
        return true;
    }
    let (din, dout) = degrees(g);
    din.iter()
        .zip(&dout)
        .all(|(a, b)| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0))
}

/// No pair of oppositely oriented edges.
pub fn is_asymmetric(g: &Graph) -> bool {
    if !g.is_directed() {
        return g.edges().is_empty();
    }
    g.edges().iter().all(|e| g.weight(e.dst, e.src) == 0.0)
}

/// Connected components of the symmetrised support graph, each sorted, in
/// order of their smallest node.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut adj = vec![Vec::new(); n];
    for e in g.edges() {
        adj[e.src].push(e.dst);
        adj[e.dst].push(e.src);
    }
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                    queue.push_back(v);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Symmetrised edge weights: `w_ij + w_ji` for directed graphs, `w_ij` for
/// undirected ones.
pub fn symmetrized_weights(g: &Graph) -> DMatrix<f64> {
    let n = g.n();
    let mut w = DMatrix::zeros(n, n);
    for e in g.edges() {
        w[(e.src, e.dst)] += e.weight;
        w[(e.dst, e.src)] += e.weight;
    }
    w
}

/// Exact edge expansion of the symmetrised graph: the minimum of
/// `boundary(S) / |S|` over all `S` with `1 <= |S| <= ceil(n/2)`.
///
/// Subsets are walked in Gray-code order so each step updates the boundary
/// weight in O(n).
pub fn edge_expansion(g: &Graph) -> Result<f64, GraphError> {
    let n = g.n();
    if n > EXPANSION_MAX_NODES {
        return Err(GraphError::TooLarge {
            op: "edge_expansion",
            n,
            limit: EXPANSION_MAX_NODES,
        });
    }
    if connected_components(g).len() > 1 {
        return Err(GraphError::Disconnected);
    }
    if n <= 1 {
        return Ok(0.0);
    }
    let w = symmetrized_weights(g);
    let deg: Vec<f64> = (0..n).map(|i| w.row(i).sum()).collect();
    let max_size = n.div_ceil(2);
    let mut in_set = vec![false; n];
    let mut size = 0usize;
    let mut boundary = 0.0f64;
    let mut best = f64::INFINITY;
    for k in 1u64..(1u64 << n) {
        let v = k.trailing_zeros() as usize;
        let inside: f64 = (0..n).filter(|&u| in_set[u]).map(|u| w[(v, u)]).sum();
        if in_set[v] {
            in_set[v] = false;
            size -= 1;
            boundary -= deg[v] - 2.0 * inside;
        } else {
            in_set[v] = true;
            size += 1;
            boundary += deg[v] - 2.0 * inside;
        }
        if size >= 1 && size <= max_size {
            best = best.min(boundary.max(0.0) / size as f64);
        }
    }
    Ok(best)
}

/// Adds `rho` to the weight of `i -> j` (or of the undirected edge `{i, j}`).
pub fn add_edge_weight(g: &Graph, i: usize, j: usize, rho: f64) -> Result<Graph, GraphError> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(GraphError::BadAddedWeight(rho));
    }
    let mut edges = g.edges().to_vec();
    edges.push(Edge::new(i, j, rho));
    let mut out = Graph::new(
        g.is_directed(),
        g.n(),
        edges,
        g.opinions().iter().copied().collect(),
    )?;
    out.node_weights = g.node_weights.clone();
    out.fixed = g.fixed.clone();
    Ok(out)
}
