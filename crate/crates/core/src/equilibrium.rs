//! Nash equilibria, social optima and social cost.
//!
//! Three cost models share one [`Graph`] type:
//!
//! * the base game, `c(z) = Σ_i (z_i − s_i)² + Σ_{i→j} w_ij (z_i − z_j)²`;
//! * node weights, where the internal term of node `i` is scaled by `w_i`;
//! * fixed opinions, where fixed nodes are non-strategic, hold `s_j`, and
//!   contribute no cost, while free nodes have no internal opinion.
//!
//! Directed graphs use out-neighbours throughout: a node is pulled toward
//! the nodes it links to.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::{connected_components, laplacians, Edge, Graph};
use crate::linalg::{relative_residual, solve_linear};

/// Default stopping tolerance of [`nash_iterative`].
pub const DEFAULT_TOL: f64 = 1e-12;

pub fn default_max_iter(n: usize) -> usize {
    100 * n + 1000
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumResult {
    pub opinions: DVector<f64>,
    pub social_cost: f64,
    /// Relative residual of the linear system for direct solves; last
    /// per-step change for the iterative solver.
    pub residual: f64,
    /// 0 for direct solves.
    pub iterations: usize,
    pub converged: bool,
}

impl EquilibriumResult {
    fn direct(g: &Graph, m: &DMatrix<f64>, rhs: &DVector<f64>, opinions: DVector<f64>) -> Self {
        let residual = relative_residual(m, &opinions, rhs);
        Self {
            social_cost: social_cost(g, &opinions),
            opinions,
            residual,
            iterations: 0,
            converged: true,
        }
    }
}

fn internal_weight(g: &Graph, i: usize) -> f64 {
    if g.fixed_nodes().is_some() {
        0.0
    } else {
        g.node_weights().map_or(1.0, |w| w[i])
    }
}

/// Cost paid by node `i` at opinions `z`. Fixed nodes pay nothing and are
/// read at their internal opinion.
pub fn node_cost(g: &Graph, z: &DVector<f64>, i: usize) -> f64 {
    if g.is_fixed(i) {
        return 0.0;
    }
    let s = g.opinions();
    let at = |j: usize| if g.is_fixed(j) { s[j] } else { z[j] };
    let mut cost = internal_weight(g, i) * (z[i] - s[i]).powi(2);
    for e in g.arcs().iter().filter(|e| e.src == i) {
        cost += e.weight * (z[i] - at(e.dst)).powi(2);
    }
    cost
}

/// Sum of all node costs.
pub fn social_cost(g: &Graph, z: &DVector<f64>) -> f64 {
    assert_eq!(z.len(), g.n(), "opinion vector length");
    let s = g.opinions();
    let at = |j: usize| if g.is_fixed(j) { s[j] } else { z[j] };
    let mut cost = 0.0;
    for i in (0..g.n()).filter(|&i| !g.is_fixed(i)) {
        cost += internal_weight(g, i) * (z[i] - s[i]).powi(2);
    }
    for e in g.arcs().iter().filter(|e| !g.is_fixed(e.src)) {
        cost += e.weight * (z[e.src] - at(e.dst)).powi(2);
    }
    cost
}

/// `‖z − s‖²_W + zᵀAz`, the matrix form of the social cost for the base and
/// node-weighted models.
pub fn social_cost_matrix_form(g: &Graph, z: &DVector<f64>) -> f64 {
    let a = laplacians(g).a;
    let w = g.node_weights_or_ones();
    let d = z - g.opinions();
    d.iter()
        .zip(w.iter())
        .map(|(x, wi)| wi * x * x)
        .sum::<f64>()
        + (z.transpose() * a * z)[0]
}

fn require_base_model(g: &Graph, op: &str) -> Result<()> {
    if g.node_weights().is_some() || g.fixed_nodes().is_some() {
        return Err(Error::Unsupported(format!(
            "{op} solves the uniform-weight game; use the node-weighted or fixed-opinion solvers"
        )));
    }
    Ok(())
}

/// Solves `(L + I)y = s`.
pub fn nash_direct(g: &Graph) -> Result<EquilibriumResult> {
    require_base_model(g, "nash_direct")?;
    let m = laplacians(g).l + DMatrix::identity(g.n(), g.n());
    let y = solve_linear(&m, g.opinions())?;
    Ok(EquilibriumResult::direct(g, &m, g.opinions(), y))
}

/// Synchronous repeated averaging from `z⁰ = s` until the largest per-step
/// change is at most `tol`. When `max_iter` runs out the last iterate is
/// returned with `converged = false`.
pub fn nash_iterative(g: &Graph, tol: f64, max_iter: usize) -> Result<EquilibriumResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if g.fixed_nodes().is_some() {
        return Err(Error::Unsupported(
            "iterative solver does not handle fixed opinions".into(),
        ));
    }
    let adj = g.out_adjacency();
    let s = g.opinions();
    let w = g.node_weights_or_ones();
    let denom: Vec<f64> = (0..g.n())
        .map(|i| w[i] + adj[i].iter().map(|&(_, wij)| wij).sum::<f64>())
        .collect();
    if let Some(i) = denom.iter().position(|&d| d == 0.0) {
        return Err(Error::Unanchored { component: vec![i] });
    }
    let mut z = s.clone();
    let mut next = z.clone();
    let mut change = f64::INFINITY;
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        change = 0.0f64;
        for i in 0..g.n() {
            let pull: f64 = adj[i].iter().map(|&(j, wij)| wij * z[j]).sum();
            next[i] = (w[i] * s[i] + pull) / denom[i];
            change = change.max((next[i] - z[i]).abs());
        }
        std::mem::swap(&mut z, &mut next);
        if change <= tol {
            break;
        }
    }
    Ok(EquilibriumResult {
        social_cost: social_cost(g, &z),
        opinions: z,
        residual: change,
        iterations,
        converged: change <= tol,
    })
}

/// Solves `(A + I)x = s`.
pub fn social_opt(g: &Graph) -> Result<EquilibriumResult> {
    require_base_model(g, "social_opt")?;
    let m = laplacians(g).a + DMatrix::identity(g.n(), g.n());
    let x = solve_linear(&m, g.opinions())?;
    Ok(EquilibriumResult::direct(g, &m, g.opinions(), x))
}

fn reject_fixed(g: &Graph) -> Result<()> {
    if g.fixed_nodes().is_some() {
        return Err(Error::Unsupported(
            "reduce fixed opinions before the node-weighted solve".into(),
        ));
    }
    Ok(())
}

// Nodes that cannot reach a positive-weight node along out-arcs.
fn unanchored_nash_nodes(g: &Graph, w: &DVector<f64>) -> Vec<usize> {
    let mut reverse = vec![Vec::new(); g.n()];
    for e in g.arcs() {
        reverse[e.dst].push(e.src);
    }
    let mut reached: Vec<bool> = w.iter().map(|&x| x > 0.0).collect();
    let mut queue: VecDeque<usize> = (0..g.n()).filter(|&i| reached[i]).collect();
    while let Some(u) = queue.pop_front() {
        for &v in &reverse[u] {
            if !reached[v] {
                reached[v] = true;
                queue.push_back(v);
            }
        }
    }
    (0..g.n()).filter(|&i| !reached[i]).collect()
}

/// Solves `(L + d(w))y = d(w)s`. Missing node weights default to 1.
pub fn nash_node_weighted(g: &Graph) -> Result<EquilibriumResult> {
    reject_fixed(g)?;
    let w = g.node_weights_or_ones();
    let stuck = unanchored_nash_nodes(g, &w);
    if !stuck.is_empty() {
        return Err(Error::Unanchored { component: stuck });
    }
    let m = laplacians(g).l + DMatrix::from_diagonal(&w);
    let rhs = w.component_mul(g.opinions());
    let y = solve_linear(&m, &rhs)?;
    Ok(EquilibriumResult::direct(g, &m, &rhs, y))
}

/// Solves `(A + d(w))x = d(w)s`. Every connected component needs a node of
/// positive weight.
pub fn opt_node_weighted(g: &Graph) -> Result<EquilibriumResult> {
    reject_fixed(g)?;
    let w = g.node_weights_or_ones();
    if let Some(component) = connected_components(g)
        .into_iter()
        .find(|c| c.iter().all(|&i| w[i] == 0.0))
    {
        return Err(Error::Unanchored { component });
    }
    let m = laplacians(g).a + DMatrix::from_diagonal(&w);
    let rhs = w.component_mul(g.opinions());
    let x = solve_linear(&m, &rhs)?;
    Ok(EquilibriumResult::direct(g, &m, &rhs, x))
}

/// A fixed-opinion instance rewritten as a node-weighted game on its free
/// nodes, with `cost_G(z) = cost_reduced(z_free) + offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedReduction {
    pub graph: Graph,
    /// Original index of each reduced node.
    pub free_nodes: Vec<usize>,
    pub offset: f64,
}

impl FixedReduction {
    /// Lifts an opinion vector on the free nodes back to the original graph,
    /// with fixed nodes at their internal opinion.
    pub fn lift(&self, original: &Graph, free: &DVector<f64>) -> DVector<f64> {
        let mut z = original.opinions().clone();
        for (k, &v) in self.free_nodes.iter().enumerate() {
            z[v] = free[k];
        }
        z
    }

    pub fn restrict(&self, z: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.free_nodes.len(), self.free_nodes.iter().map(|&v| z[v]))
    }
}

/// Each free node gets the weighted average of its fixed out-neighbours'
/// opinions as internal opinion (0 if it has none) and their total weight as
/// node weight.
pub fn reduce_fixed_opinions(g: &Graph) -> Result<FixedReduction> {
    let Some(fixed) = g.fixed_nodes() else {
        return Err(Error::InvalidArgument("graph has no fixed nodes".into()));
    };
    let free_nodes: Vec<usize> = (0..g.n()).filter(|i| !fixed.contains(i)).collect();
    let mut local = vec![usize::MAX; g.n()];
    for (k, &v) in free_nodes.iter().enumerate() {
        local[v] = k;
    }
    let s = g.opinions();
    let m = free_nodes.len();
    let mut anchor_weight = vec![0.0; m];
    let mut anchor_sum = vec![0.0; m];
    let mut anchor_sq = vec![0.0; m];
    for e in g.arcs() {
        if local[e.src] != usize::MAX && fixed.contains(&e.dst) {
            let k = local[e.src];
            anchor_weight[k] += e.weight;
            anchor_sum[k] += e.weight * s[e.dst];
            anchor_sq[k] += e.weight * s[e.dst] * s[e.dst];
        }
    }
    let mut opinions = vec![0.0; m];
    let mut offset = 0.0;
    for k in 0..m {
        if anchor_weight[k] > 0.0 {
            opinions[k] = anchor_sum[k] / anchor_weight[k];
            offset += anchor_sq[k] - anchor_sum[k] * anchor_sum[k] / anchor_weight[k];
        }
    }
    let edges = g
        .edges()
        .iter()
        .filter(|e| local[e.src] != usize::MAX && local[e.dst] != usize::MAX)
        .map(|e| Edge::new(local[e.src], local[e.dst], e.weight));
    let graph =
        Graph::new(g.is_directed(), m, edges, opinions)?.with_node_weights(anchor_weight)?;
    Ok(FixedReduction {
        graph,
        free_nodes,
        offset: offset.max(0.0),
    })
}

fn lift_result(g: &Graph, red: &FixedReduction, r: EquilibriumResult) -> EquilibriumResult {
    let opinions = red.lift(g, &r.opinions);
    EquilibriumResult {
        social_cost: social_cost(g, &opinions),
        opinions,
        ..r
    }
}

/// Nash equilibrium under whichever cost model `g` carries.
pub fn nash(g: &Graph) -> Result<EquilibriumResult> {
    if g.fixed_nodes().is_some() {
        let red = reduce_fixed_opinions(g)?;
        let r = nash_node_weighted(&red.graph)?;
        Ok(lift_result(g, &red, r))
    } else if g.node_weights().is_some() {
        nash_node_weighted(g)
    } else {
        nash_direct(g)
    }
}

/// Social optimum under whichever cost model `g` carries.
pub fn optimum(g: &Graph) -> Result<EquilibriumResult> {
    if g.fixed_nodes().is_some() {
        let red = reduce_fixed_opinions(g)?;
        let r = opt_node_weighted(&red.graph)?;
        Ok(lift_result(g, &red, r))
    } else if g.node_weights().is_some() {
        opt_node_weighted(g)
    } else {
        social_opt(g)
    }
}
