//! Named instances, seeded random families and the edge-addition gadgets.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::equilibrium::{nash, node_cost};
use crate::error::{Error, GraphError, Result};
use crate::graph::{add_edge_weight, Edge, Graph};
use crate::poa::directed_worst;

/// Node limit for generated trees (dense storage).
pub const TREE_MAX_NODES: usize = 5000;

/// Largest item count for which the subset-sum gadget tabulates every subset.
pub const SUBSET_TABLE_MAX_ITEMS: usize = 12;

/// Undirected path on three nodes with opinions 0, 1/2, 1.
pub fn gen_path3() -> Graph {
    Graph::new(
        false,
        3,
        [Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0)],
        vec![0.0, 0.5, 1.0],
    )
    .expect("path is valid")
}

/// In-directed star: node 0 is the centre with opinion 1, every leaf has
/// opinion 0 and links to the centre.
pub fn gen_star(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "star needs n >= 2, got {n}"
        )));
    }
    let mut s = vec![0.0; n];
    s[0] = 1.0;
    Ok(Graph::new(
        true,
        n,
        (1..n).map(|l| Edge::new(l, 0, 1.0)),
        s,
    )?)
}

/// Complete `2^k`-ary tree of the given depth in breadth-first order. Every
/// child links to its parent; the root has opinion 1, all others 0.
pub fn gen_kary_tree(k: u32, depth: u32) -> Result<Graph> {
    if k == 0 {
        return Err(Error::InvalidArgument("tree needs k >= 1".into()));
    }
    let branching = 1usize
        .checked_shl(k)
        .filter(|_| k < 32)
        .ok_or_else(|| Error::InvalidArgument(format!("k = {k} is too large")))?;
    let mut n = 1usize;
    let mut layer = 1usize;
    for _ in 0..depth {
        layer = layer.saturating_mul(branching);
        n = n.saturating_add(layer);
        if n > TREE_MAX_NODES {
            return Err(GraphError::TooLarge {
                op: "gen_kary_tree",
                n,
                limit: TREE_MAX_NODES,
            }
            .into());
        }
    }
    let edges = (1..n).map(|c| Edge::new(c, (c - 1) / branching, 1.0));
    let mut s = vec![0.0; n];
    s[0] = 1.0;
    Ok(Graph::new(true, n, edges, s)?)
}

/// Directed cycle `0 -> 1 -> .. -> n-1 -> 0`. Without `opinions` the
/// worst-case vector of the cycle is used.
pub fn gen_cycle(n: usize, opinions: Option<Vec<f64>>) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "cycle needs n >= 3, got {n}"
        )));
    }
    let edges: Vec<Edge> = (0..n).map(|i| Edge::new(i, (i + 1) % n, 1.0)).collect();
    match opinions {
        Some(s) => Ok(Graph::new(true, n, edges, s)?),
        None => {
            let g = Graph::new(true, n, edges, vec![0.0; n])?;
            let worst = directed_worst(&g)?
                .worst_s
                .expect("a cycle has a nonconstant worst case");
            Ok(g.with_opinions(&worst)?)
        }
    }
}

/// Each pair (ordered when `directed`) becomes an edge with probability
/// `density`, with weight uniform in `weights`. Opinions are uniform in
/// `[0, 1]`.
pub fn gen_random(
    n: usize,
    density: f64,
    weights: (f64, f64),
    directed: bool,
    seed: u64,
) -> Result<Graph> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidArgument(format!(
            "density must lie in [0, 1], got {density}"
        )));
    }
    let (lo, hi) = weights;
    if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "bad weight range [{lo}, {hi}]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || (!directed && j < i) {
                continue;
            }
            if rng.gen_bool(density) {
                let w = if lo == hi { lo } else { rng.gen_range(lo..=hi) };
                edges.push(Edge::new(i, j, w));
            }
        }
    }
    let s = (0..n).map(|_| rng.gen::<f64>()).collect();
    Ok(Graph::new(directed, n, edges, s)?)
}

/// Unit-weight Eulerian graph: a random Hamiltonian cycle plus up to
/// `cycles` further random cycles that reuse no existing arc.
pub fn gen_random_eulerian(n: usize, cycles: usize, seed: u64) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "Eulerian generator needs n >= 3, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut present = vec![vec![false; n]; n];
    let mut edges = Vec::new();
    let push_cycle = |order: &[usize], present: &mut Vec<Vec<bool>>, edges: &mut Vec<Edge>| {
        for k in 0..order.len() {
            let (a, b) = (order[k], order[(k + 1) % order.len()]);
            present[a][b] = true;
            edges.push(Edge::new(a, b, 1.0));
        }
    };
    let mut nodes: Vec<usize> = (0..n).collect();
    nodes.shuffle(&mut rng);
    push_cycle(&nodes, &mut present, &mut edges);
    for _ in 0..cycles {
        for _attempt in 0..20 {
            let len = rng.gen_range(3..=n);
            nodes.shuffle(&mut rng);
            let order = &nodes[..len];
            let fresh = (0..len).all(|k| !present[order[k]][order[(k + 1) % len]]);
            if fresh {
                push_cycle(order, &mut present, &mut edges);
                break;
            }
        }
    }
    let s = (0..n).map(|_| rng.gen::<f64>()).collect();
    Ok(Graph::new(true, n, edges, s)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeRole {
    /// The node `w` that edges are added from or to.
    Sink,
    /// Leaf of the in-directed star around `center`.
    Peripheral { center: usize },
    /// Isolated node carrying item `item` of a subset-sum instance.
    Item { item: usize },
    /// Node standing for edge `{i, j}` of the source graph.
    EdgeNode { i: usize, j: usize },
    /// Node standing for vertex `i` of the source graph.
    VertexNode { i: usize },
}

/// A known Nash cost after adding unit edges.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedCost {
    pub label: String,
    pub added: Vec<(usize, usize)>,
    /// Nodes whose costs are summed.
    pub nodes: Vec<usize>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostCheck {
    pub label: String,
    pub expected: f64,
    pub computed: f64,
}

impl CostCheck {
    pub fn error(&self) -> f64 {
        (self.expected - self.computed).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GadgetInstance {
    pub graph: Graph,
    pub roles: Vec<NodeRole>,
    pub sink: usize,
    pub budget: Option<usize>,
    pub expected: Vec<ExpectedCost>,
}

impl GadgetInstance {
    /// Recomputes every tabulated cost from the Nash equilibrium.
    pub fn check(&self) -> Result<Vec<CostCheck>> {
        self.expected
            .iter()
            .map(|row| {
                let mut g = self.graph.clone();
                for &(a, b) in &row.added {
                    g = add_edge_weight(&g, a, b, 1.0)?;
                }
                let y = nash(&g)?.opinions;
                let computed = row.nodes.iter().map(|&i| node_cost(&g, &y, i)).sum();
                Ok(CostCheck {
                    label: row.label.clone(),
                    expected: row.value,
                    computed,
                })
            })
            .collect()
    }

    pub fn nodes_with_role(&self, pred: impl Fn(&NodeRole) -> bool) -> Vec<usize> {
        (0..self.roles.len())
            .filter(|&v| pred(&self.roles[v]))
            .collect()
    }
}

fn undirected_source(g: &Graph, what: &str) -> Result<()> {
    if g.is_directed() {
        return Err(Error::InvalidArgument(format!(
            "{what} gadget needs an undirected source graph"
        )));
    }
    Ok(())
}

/// Star of `n` zero-opinion leaves around `w` (opinion 1) plus `n` isolated
/// nodes with opinions `−a_i/t`. Adding `w -> x_j` for a set `F` of item
/// nodes gives everyone but `w` the cost
/// `2n((1 + Σ_F s_j) / (2(1 + |F|)))²`, tabulated for every `F` when
/// `n ≤ 12`.
pub fn gen_subset_sum_gadget(a: &[u64], t: u64) -> Result<GadgetInstance> {
    if a.is_empty() || t == 0 || a.contains(&0) {
        return Err(Error::InvalidArgument(
            "subset sum needs positive items and target".into(),
        ));
    }
    let n = a.len();
    let mut roles = vec![NodeRole::Sink];
    let mut s = vec![1.0];
    let mut edges = Vec::new();
    for p in 1..=n {
        roles.push(NodeRole::Peripheral { center: 0 });
        s.push(0.0);
        edges.push(Edge::new(p, 0, 1.0));
    }
    for (item, &ai) in a.iter().enumerate() {
        roles.push(NodeRole::Item { item });
        s.push(-(ai as f64) / t as f64);
    }
    let graph = Graph::new(true, 2 * n + 1, edges, s.clone())?;
    let others: Vec<usize> = (1..=2 * n).collect();
    let mut expected = Vec::new();
    if n <= SUBSET_TABLE_MAX_ITEMS {
        for mask in 0u32..(1 << n) {
            let f: Vec<usize> = (0..n)
                .filter(|&b| mask >> b & 1 == 1)
                .map(|b| n + 1 + b)
                .collect();
            let sum: f64 = f.iter().map(|&x| s[x]).sum();
            let inner = (1.0 + sum) / (2.0 * (1.0 + f.len() as f64));
            expected.push(ExpectedCost {
                label: format!("F = {:?}", f.iter().map(|x| x - n - 1).collect::<Vec<_>>()),
                added: f.iter().map(|&x| (0, x)).collect(),
                nodes: others.clone(),
                value: 2.0 * n as f64 * inner * inner,
            });
        }
    }
    Ok(GadgetInstance {
        graph,
        roles,
        sink: 0,
        budget: None,
        expected,
    })
}

/// For each edge `{i, j}` of `source` a node `v_ij` (opinion 1) with 24
/// zero-opinion leaves, linking to `u_i` and `u_j` (opinion 1); an
/// isolated `w` with opinion −3. The table lists the cost of each `v_ij`'s
/// star under the six ways of adding edges to `w`, and the cost 8 of a
/// vertex node that links to `w`.
pub fn gen_vertex_cover_gadget(source: &Graph) -> Result<GadgetInstance> {
    undirected_source(source, "vertex-cover")?;
    const LEAVES: usize = 24;
    let m = source.edges().len();
    let nv = source.n();
    let n = m * (LEAVES + 1) + nv + 1;
    let u = |i: usize| m * (LEAVES + 1) + i;
    let w = n - 1;
    let mut roles = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n);
    let mut edges = Vec::new();
    let mut stars = Vec::new();
    for e in source.edges() {
        let v = roles.len();
        roles.push(NodeRole::EdgeNode { i: e.src, j: e.dst });
        s.push(1.0);
        edges.push(Edge::new(v, u(e.src), 1.0));
        edges.push(Edge::new(v, u(e.dst), 1.0));
        for _ in 0..LEAVES {
            let p = roles.len();
            roles.push(NodeRole::Peripheral { center: v });
            s.push(0.0);
            edges.push(Edge::new(p, v, 1.0));
        }
        stars.push((v, e.src, e.dst));
    }
    for i in 0..nv {
        roles.push(NodeRole::VertexNode { i });
        s.push(1.0);
    }
    roles.push(NodeRole::Sink);
    s.push(-3.0);
    let graph = Graph::new(true, n, edges, s)?;

    let mut expected = Vec::new();
    for &(v, i, j) in &stars {
        let star: Vec<usize> = (v..=v + LEAVES).collect();
        let rows: [(&str, Vec<usize>, f64); 6] = [
            ("none in T", vec![], 12.0),
            ("v only", vec![v], 12.0),
            ("v and u_i", vec![v, u(i)], 14.0),
            ("v, u_i and u_j", vec![v, u(i), u(j)], 20.0),
            ("u_i only", vec![u(i)], 4.0),
            ("u_i and u_j", vec![u(i), u(j)], 4.0),
        ];
        for (label, t, value) in rows {
            expected.push(ExpectedCost {
                label: format!("star of v({i},{j}): {label}"),
                added: t.iter().map(|&x| (x, w)).collect(),
                nodes: star.clone(),
                value,
            });
        }
    }
    for i in 0..nv {
        expected.push(ExpectedCost {
            label: format!("u_{i} in T"),
            added: vec![(u(i), w)],
            nodes: vec![u(i)],
            value: 8.0,
        });
    }
    Ok(GadgetInstance {
        graph,
        roles,
        sink: w,
        budget: None,
        expected,
    })
}

/// For each edge `{i, j}` of `source` a node `v_ij` (opinion 0) linking to
/// `u_i` and `u_j` (opinion 1), each vertex node with 20 zero-opinion
/// leaves, and an isolated `w` with opinion −1. The table lists the cost of
/// `v_ij` when both, neither, or one of its vertex nodes link to `w`.
pub fn gen_dense_subgraph_gadget(source: &Graph, k: usize) -> Result<GadgetInstance> {
    undirected_source(source, "dense-subgraph")?;
    const LEAVES: usize = 20;
    let m = source.edges().len();
    let nv = source.n();
    let n = m + nv * (LEAVES + 1) + 1;
    let u = |i: usize| m + i * (LEAVES + 1);
    let w = n - 1;
    let mut roles = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n);
    let mut edges = Vec::new();
    for e in source.edges() {
        let v = roles.len();
        roles.push(NodeRole::EdgeNode { i: e.src, j: e.dst });
        s.push(0.0);
        edges.push(Edge::new(v, u(e.src), 1.0));
        edges.push(Edge::new(v, u(e.dst), 1.0));
    }
    for i in 0..nv {
        roles.push(NodeRole::VertexNode { i });
        s.push(1.0);
        for _ in 0..LEAVES {
            let p = roles.len();
            roles.push(NodeRole::Peripheral { center: u(i) });
            s.push(0.0);
            edges.push(Edge::new(p, u(i), 1.0));
        }
    }
    roles.push(NodeRole::Sink);
    s.push(-1.0);
    let graph = Graph::new(true, n, edges, s)?;

    let mut expected = Vec::new();
    for (v, e) in source.edges().iter().enumerate() {
        let (i, j) = (e.src, e.dst);
        let rows: [(&str, Vec<usize>, f64); 3] = [
            ("both in T", vec![u(i), u(j)], 0.0),
            ("neither in T", vec![], 2.0 / 3.0),
            ("only u_i in T", vec![u(i)], 2.0 / 3.0),
        ];
        for (label, t, value) in rows {
            expected.push(ExpectedCost {
                label: format!("v({i},{j}): {label}"),
                added: t.iter().map(|&x| (x, w)).collect(),
                nodes: vec![v],
                value,
            });
        }
    }
    Ok(GadgetInstance {
        graph,
        roles,
        sink: w,
        budget: Some(k),
        expected,
    })
}
