//! Price of anarchy: for a given internal-opinion vector, and worst case
//! over all of them.
//!
//! With `B = I − (A+I)⁻¹` and
//! `C = ((L+I)⁻¹ − I)ᵀ((L+I)⁻¹ − I) + (L+I)⁻ᵀA(L+I)⁻¹` the optimal and
//! Nash costs are `sᵀBs` and `sᵀCs`, so the worst-case PoA is the largest
//! eigenvalue of the pencil `(C, B)` restricted to mean-zero vectors. On
//! undirected graphs both matrices are rational functions of `A` and the
//! ratio collapses to `φ(λ) = (λ+4)(λ+1)/(λ+2)²` per eigenvalue of `A`.
//!
//! Worst-case analyses run per connected component of the symmetrised
//! graph and report the maximum.

use nalgebra::{DMatrix, DVector};

use crate::equilibrium::{nash, optimum, social_cost};
use crate::error::{Error, GraphError, Result};
use crate::graph::{connected_components, is_eulerian, laplacians, max_degree, Graph};
use crate::linalg::{
    gen_eigen_max, inf_norm, normalize_sign, solve_linear, sym_eigen, symmetrize, Lu,
};

/// Eigenvalues of `A` below this (relative to `max(1, λ_max)`) count as zero.
const ZERO_EIGENVALUE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentPoA {
    pub nodes: Vec<usize>,
    pub poa: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoAReport {
    pub poa: f64,
    pub nash_cost: f64,
    pub opt_cost: f64,
    /// Maximizing internal opinions: mean-zero on each component, with
    /// optimal cost 1.
    pub worst_s: Option<DVector<f64>>,
    pub extremal_eigenvalue: Option<f64>,
    pub per_component: Vec<ComponentPoA>,
}

/// Nash cost over optimal cost, with the convention that the ratio is 1
/// when the optimal cost vanishes.
pub fn cost_ratio(nash_cost: f64, opt_cost: f64, scale: f64) -> f64 {
    if opt_cost <= 1e-20 * scale.max(1.0) {
        1.0
    } else {
        nash_cost / opt_cost
    }
}

fn sum_over(costs: &DVector<f64>, nodes: &[usize]) -> f64 {
    nodes.iter().map(|&v| costs[v]).sum()
}

/// PoA of `g` at its own internal opinions, under whichever cost model the
/// graph carries.
pub fn poa(g: &Graph) -> Result<PoAReport> {
    let y = nash(g)?;
    let x = optimum(g)?;
    let scale = g.opinions().norm_squared();
    let per_node = |z: &DVector<f64>| {
        DVector::from_iterator(
            g.n(),
            (0..g.n()).map(|i| crate::equilibrium::node_cost(g, z, i)),
        )
    };
    let (ny, nx) = (per_node(&y.opinions), per_node(&x.opinions));
    let per_component = connected_components(g)
        .into_iter()
        .map(|nodes| {
            let poa = cost_ratio(sum_over(&ny, &nodes), sum_over(&nx, &nodes), scale);
            ComponentPoA { nodes, poa }
        })
        .collect();
    Ok(PoAReport {
        poa: cost_ratio(y.social_cost, x.social_cost, scale),
        nash_cost: y.social_cost,
        opt_cost: x.social_cost,
        worst_s: None,
        extremal_eigenvalue: None,
        per_component,
    })
}

/// `(λ+4)(λ+1)/(λ+2)²`: the Nash/optimum cost ratio along an eigenvector
/// of `A` with eigenvalue `λ`. Peaks at 9/8 when `λ = 2`.
pub fn phi_curve(lambda: f64) -> f64 {
    (lambda + 4.0) * (lambda + 1.0) / ((lambda + 2.0) * (lambda + 2.0))
}

fn embed(n: usize, nodes: &[usize], local: &DVector<f64>) -> DVector<f64> {
    let mut out = DVector::zeros(n);
    for (k, &v) in nodes.iter().enumerate() {
        out[v] = local[k];
    }
    out
}

// Rescales `s` to unit optimal cost and fills in the report costs.
fn finish_worst(
    g: &Graph,
    poa: f64,
    eigenvalue: Option<f64>,
    worst: Option<DVector<f64>>,
    per_component: Vec<ComponentPoA>,
) -> Result<PoAReport> {
    let Some(mut s) = worst else {
        return Ok(PoAReport {
            poa,
            nash_cost: 0.0,
            opt_cost: 0.0,
            worst_s: None,
            extremal_eigenvalue: eigenvalue,
            per_component,
        });
    };
    let opt = optimum(&g.with_opinions(&s)?)?.social_cost;
    if opt > 0.0 {
        s /= opt.sqrt();
    }
    normalize_sign(&mut s);
    let probe = g.with_opinions(&s)?;
    let nash_cost = nash(&probe)?.social_cost;
    let opt_cost = optimum(&probe)?.social_cost;
    Ok(PoAReport {
        poa,
        nash_cost,
        opt_cost,
        worst_s: Some(s),
        extremal_eigenvalue: eigenvalue,
        per_component,
    })
}

/// Worst-case PoA of an undirected graph from the spectrum of `A`.
///
/// With strictly positive node weights `w` the spectrum of
/// `d(√w)⁻¹ A d(√w)⁻¹` is used instead and the maximizer is mapped back.
pub fn undirected_worst(g: &Graph) -> Result<PoAReport> {
    if g.is_directed() {
        return Err(Error::Unsupported(
            "undirected_worst needs an undirected graph".into(),
        ));
    }
    if g.fixed_nodes().is_some() {
        return Err(Error::Unsupported(
            "worst-case analysis of fixed-opinion instances".into(),
        ));
    }
    let w = g.node_weights_or_ones();
    if w.iter().any(|&x| x <= 0.0) {
        return Err(Error::Unsupported(
            "spectral worst case needs strictly positive node weights".into(),
        ));
    }
    let inv_sqrt_w = w.map(|x| 1.0 / x.sqrt());
    let a = laplacians(g).a;

    let mut best: Option<(f64, f64, DVector<f64>)> = None;
    let mut per_component = Vec::new();
    for nodes in connected_components(g) {
        let m = nodes.len();
        let scaled = DMatrix::from_fn(m, m, |r, c| {
            a[(nodes[r], nodes[c])] * inv_sqrt_w[nodes[r]] * inv_sqrt_w[nodes[c]]
        });
        let eig = sym_eigen(&scaled);
        let top = eig
            .eigenvalues
            .iter()
            .fold(0.0f64, |acc, x| acc.max(x.abs()));
        let cutoff = ZERO_EIGENVALUE * top.max(1.0);
        let mut comp_best: Option<(f64, usize)> = None;
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda <= cutoff {
                continue;
            }
            let ratio = phi_curve(lambda);
            if comp_best.is_none_or(|(r, _)| ratio > r) {
                comp_best = Some((ratio, k));
            }
        }
        let comp_poa = comp_best.map_or(1.0, |(r, _)| r);
        if let Some((ratio, k)) = comp_best {
            if best.as_ref().is_none_or(|(r, _, _)| ratio > *r) {
                let local = eig
                    .eigenvectors
                    .column(k)
                    .component_mul(&DVector::from_iterator(
                        m,
                        nodes.iter().map(|&v| inv_sqrt_w[v]),
                    ));
                best = Some((ratio, eig.eigenvalues[k], embed(g.n(), &nodes, &local)));
            }
        }
        per_component.push(ComponentPoA {
            nodes,
            poa: comp_poa,
        });
    }
    match best {
        Some((ratio, lambda, s)) => finish_worst(g, ratio, Some(lambda), Some(s), per_component),
        None => finish_worst(g, 1.0, None, None, per_component),
    }
}

/// Scaling factor `2/λ_k` that moves eigenvalue `k` (ascending) of `A` onto
/// the peak of `φ`, making the worst-case PoA exactly 9/8.
pub fn scale_to_tight(g: &Graph, which_eigenvalue: usize) -> Result<f64> {
    if g.is_directed() {
        return Err(Error::Unsupported(
            "weight scaling applies to undirected graphs".into(),
        ));
    }
    let eig = sym_eigen(&laplacians(g).a);
    let Some(&lambda) = eig.eigenvalues.get(which_eigenvalue) else {
        return Err(Error::InvalidArgument(format!(
            "eigenvalue index {which_eigenvalue} out of range for n = {}",
            g.n()
        )));
    };
    let top = eig
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, x| acc.max(x.abs()));
    if lambda <= ZERO_EIGENVALUE * top.max(1.0) {
        return Err(Error::InvalidArgument(format!(
            "eigenvalue {which_eigenvalue} is zero; no scaling reaches it"
        )));
    }
    Ok(2.0 / lambda)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrices {
    /// `sᵀBs` is the optimal social cost.
    pub b: DMatrix<f64>,
    /// `sᵀCs` is the Nash social cost.
    pub c: DMatrix<f64>,
    /// `n × (n−1)` basis of mean-zero vectors.
    pub p: DMatrix<f64>,
}

/// Columns `e_j − e_{j+1}`.
pub fn mean_zero_basis(n: usize) -> DMatrix<f64> {
    let cols = n.saturating_sub(1);
    let mut p = DMatrix::zeros(n, cols);
    for j in 0..cols {
        p[(j, j)] = 1.0;
        p[(j + 1, j)] = -1.0;
    }
    p
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}

fn require_uniform(g: &Graph, op: &str) -> Result<()> {
    if g.node_weights().is_some() || g.fixed_nodes().is_some() {
        return Err(Error::Unsupported(format!(
            "{op} assumes uniform node weights"
        )));
    }
    Ok(())
}

pub fn cost_matrices(g: &Graph) -> Result<CostMatrices> {
    require_uniform(g, "cost_matrices")?;
    let n = g.n();
    let id = DMatrix::<f64>::identity(n, n);
    let lp = laplacians(g);
    let a_inv = Lu::new(&(&lp.a + &id))?.inverse();
    let l_inv = Lu::new(&(&lp.l + &id))?.inverse();
    let b = symmetrize(&(&id - a_inv));
    let shift = &l_inv - &id;
    let c_raw = shift.transpose() * &shift + l_inv.transpose() * &lp.a * &l_inv;
    let asym = max_abs(&(&c_raw - c_raw.transpose()));
    if asym > 1e-10 * max_abs(&c_raw).max(1.0) {
        return Err(Error::Numerical(format!(
            "Nash cost matrix asymmetric by {asym:e}"
        )));
    }
    Ok(CostMatrices {
        b,
        c: symmetrize(&c_raw),
        p: mean_zero_basis(n),
    })
}

/// Worst-case PoA of any graph as the top eigenvalue of `(PᵀCP, PᵀBP)`.
pub fn directed_worst(g: &Graph) -> Result<PoAReport> {
    require_uniform(g, "directed_worst")?;
    let mut best: Option<(f64, DVector<f64>)> = None;
    let mut per_component = Vec::new();
    for nodes in connected_components(g) {
        if nodes.len() == 1 {
            per_component.push(ComponentPoA { nodes, poa: 1.0 });
            continue;
        }
        let sub = g.induced(&nodes);
        let cm = cost_matrices(&sub)?;
        let pt = cm.p.transpose();
        let b_bar = &pt * &cm.b * &cm.p;
        let c_bar = &pt * &cm.c * &cm.p;
        let pair = gen_eigen_max(&c_bar, &b_bar).map_err(|e| {
            Error::Numerical(format!(
                "projected optimal-cost matrix on component {nodes:?}: {e}"
            ))
        })?;
        let local = &cm.p * &pair.vector;
        if best.as_ref().is_none_or(|(r, _)| pair.lambda > *r) {
            best = Some((pair.lambda, embed(g.n(), &nodes, &local)));
        }
        per_component.push(ComponentPoA {
            nodes,
            poa: pair.lambda,
        });
    }
    match best {
        Some((lambda, s)) => finish_worst(g, lambda, Some(lambda), Some(s), per_component),
        None => finish_worst(g, 1.0, None, None, per_component),
    }
}

/// `M = (I − C)⁻¹ − I`, which equals `A + LLᵀ` on Eulerian graphs. The
/// identity is checked to 1e-8 and the closed form returned.
pub fn eulerian_m(g: &Graph) -> Result<DMatrix<f64>> {
    if !is_eulerian(g) {
        return Err(Error::Unsupported("graph is not Eulerian".into()));
    }
    let n = g.n();
    let cm = cost_matrices(g)?;
    let lp = laplacians(g);
    let closed = &lp.a + &lp.l * lp.l.transpose();
    let via_c = Lu::new(&(DMatrix::identity(n, n) - &cm.c))?.inverse() - DMatrix::identity(n, n);
    let gap = inf_norm(&(&via_c - &closed));
    if gap > 1e-8 * inf_norm(&closed).max(1.0) {
        return Err(Error::Numerical(format!(
            "(I - C)^-1 - I differs from A + LL^T by {gap:e}"
        )));
    }
    Ok(closed)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinG {
    pub value: f64,
    pub minimizer: DVector<f64>,
    pub nash_cost: f64,
}

/// Minimizes `g(z) = zᵀMz + ‖z − s‖²` with `M = (I − C)⁻¹ − I` and checks
/// that the minimum equals the Nash social cost (relative 1e-9).
pub fn min_g(g: &Graph) -> Result<MinG> {
    let n = g.n();
    let id = DMatrix::<f64>::identity(n, n);
    let cm = cost_matrices(g)?;
    let m = symmetrize(&(Lu::new(&(&id - &cm.c))?.inverse() - &id));
    let s = g.opinions();
    let z = solve_linear(&(&m + &id), s)?;
    let value = (z.transpose() * &m * &z)[0] + (&z - s).norm_squared();
    let nash_cost = nash(g)?.social_cost;
    let tol = 1e-9 * nash_cost.max(1e-12 * (1.0 + s.norm_squared()));
    if (value - nash_cost).abs() > tol {
        return Err(Error::Numerical(format!(
            "min g = {value} but Nash cost = {nash_cost}"
        )));
    }
    Ok(MinG {
        value,
        minimizer: z,
        nash_cost,
    })
}

/// `1 + max zᵀLLᵀz / zᵀAz` over non-constant `z`. On unweighted graphs the
/// result is checked against `Δ + 1`.
pub fn eulerian_beta(g: &Graph) -> Result<f64> {
    if !is_eulerian(g) {
        return Err(Error::Unsupported("graph is not Eulerian".into()));
    }
    require_uniform(g, "eulerian_beta")?;
    if connected_components(g).len() > 1 {
        return Err(GraphError::Disconnected.into());
    }
    if g.n() <= 1 {
        return Ok(1.0);
    }
    let lp = laplacians(g);
    let p = mean_zero_basis(g.n());
    let pt = p.transpose();
    let llt = &lp.l * lp.l.transpose();
    let pair = gen_eigen_max(&(&pt * llt * &p), &(&pt * &lp.a * &p))?;
    let beta = 1.0 + pair.lambda;
    if g.is_unweighted() {
        let bound = max_degree(g) + 1.0;
        if beta > bound + 1e-9 {
            return Err(Error::Numerical(format!(
                "beta = {beta} exceeds degree bound {bound}"
            )));
        }
    }
    Ok(beta)
}

/// Second-smallest eigenvalue of `A`.
pub fn algebraic_connectivity(g: &Graph) -> f64 {
    let eig = sym_eigen(&laplacians(g).a);
    eig.eigenvalues.get(1).copied().unwrap_or(0.0)
}

/// `(β + βλ₂)/(1 + βλ₂)`.
pub fn poa_bound_from_beta(beta: f64, lambda2: f64) -> Result<f64> {
    if !(beta >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "beta must be at least 1, got {beta}"
        )));
    }
    if !(lambda2 > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "lambda2 must be positive, got {lambda2}"
        )));
    }
    Ok((beta + beta * lambda2) / (1.0 + beta * lambda2))
}

/// `2Δ(1+Δ)/α²`.
pub fn expander_bound(delta: f64, alpha: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "degree must be positive, got {delta}"
        )));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "edge expansion must be positive, got {alpha}"
        )));
    }
    Ok(2.0 * delta * (1.0 + delta) / (alpha * alpha))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EulerianSearch {
    pub best_poa: f64,
    pub best_seed: u64,
    pub trials: usize,
}

/// Largest worst-case PoA over `trials` random unit-weight Eulerian graphs
/// on `n` nodes built from `cycles` extra cycles. Reports only.
pub fn eulerian_poa_search(
    n: usize,
    cycles: usize,
    trials: usize,
    seed: u64,
) -> Result<EulerianSearch> {
    let mut best = EulerianSearch {
        best_poa: 1.0,
        best_seed: seed,
        trials,
    };
    for t in 0..trials as u64 {
        let g = crate::generators::gen_random_eulerian(n, cycles, seed.wrapping_add(t))?;
        let p = directed_worst(&g)?.poa;
        if p > best.best_poa {
            best.best_poa = p;
            best.best_seed = seed.wrapping_add(t);
        }
    }
    Ok(best)
}

/// Nash cost of the in-directed `2^k`-ary tree with root opinion 1.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeNashCost {
    pub cost: f64,
    /// Opinion held by every node of layer `i` (root is layer 0).
    pub layer_opinions: Vec<f64>,
    pub closed_form: bool,
}

/// Layer `i` holds `2^{-i}` and each of its `2^{ik}` nodes pays
/// `2·2^{-2i}`. For `k > 2` the geometric sum is taken in closed form,
/// otherwise term by term.
pub fn tree_nash_cost(k: u32, depth: u32) -> TreeNashCost {
    let layer_opinions = (0..=depth).map(|i| 0.5f64.powi(i as i32)).collect();
    if k > 2 {
        let ratio = 2f64.powi(k as i32 - 2);
        let cost = 2f64.powi(k as i32 - 1) * (ratio.powi(depth as i32) - 1.0) / (ratio - 1.0);
        TreeNashCost {
            cost,
            layer_opinions,
            closed_form: true,
        }
    } else {
        let cost = (1..=depth as i32)
            .map(|i| 2f64.powi(i * k as i32) * 2f64.powi(1 - 2 * i))
            .sum();
        TreeNashCost {
            cost,
            layer_opinions,
            closed_form: false,
        }
    }
}

/// Recomputes a report's PoA at its own worst-case vector.
pub fn reproduce(g: &Graph, report: &PoAReport) -> Result<Option<f64>> {
    let Some(s) = &report.worst_s else {
        return Ok(None);
    };
    let probe = g.with_opinions(s)?;
    let y = nash(&probe)?;
    let x = optimum(&probe)?;
    Ok(Some(cost_ratio(
        social_cost(&probe, &y.opinions),
        x.social_cost,
        s.norm_squared(),
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn path3() -> Graph {
        Graph::new(
            false,
            3,
            [Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0)],
            vec![0.0, 0.5, 1.0],
        )
        .unwrap()
    }

    fn in_star(n: usize) -> Graph {
        let mut s = vec![0.0; n];
        s[0] = 1.0;
        Graph::new(true, n, (1..n).map(|l| Edge::new(l, 0, 1.0)), s).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let s = (0..n).map(|i| (i as f64 * 0.7).sin()).collect();
        Graph::new(true, n, (0..n).map(|i| Edge::new(i, (i + 1) % n, 1.0)), s).unwrap()
    }

    #[test]
    fn poa_examples() {
        assert!((poa(&path3()).unwrap().poa - 1.125).abs() < 1e-12);
        let star = poa(&in_star(9)).unwrap();
        assert!((star.opt_cost - 0.8).abs() < 1e-12);
        assert!((star.poa - 5.0).abs() < 1e-12);
        let flat = path3()
            .with_opinions(&DVector::from_element(3, 0.3))
            .unwrap();
        assert_eq!(poa(&flat).unwrap().poa, 1.0);
    }

    #[test]
    fn phi_values() {
        assert_eq!(phi_curve(2.0), 9.0 / 8.0);
        assert_eq!(phi_curve(0.0), 1.0);
        let big = phi_curve(1e6);
        assert!(big <= 9.0 / 8.0 && (big - (1.0 + 1e-6)).abs() < 1e-11);
    }

    #[test]
    fn undirected_worst_examples() {
        let r = undirected_worst(&path3()).unwrap();
        assert!((r.poa - 1.125).abs() < 1e-12);
        let s = r.worst_s.unwrap();
        assert!(s[1].abs() < 1e-12 && (s[0] + s[2]).abs() < 1e-12 && s[0] > 0.0);
        assert!((r.opt_cost - 1.0).abs() < 1e-12);

        let edge = Graph::new(false, 2, [Edge::new(0, 1, 1.0)], vec![0.0, 1.0]).unwrap();
        assert!((undirected_worst(&edge).unwrap().poa - 10.0 / 9.0).abs() < 1e-12);
        let half = Graph::new(false, 2, [Edge::new(0, 1, 0.5)], vec![0.0, 1.0]).unwrap();
        assert!((undirected_worst(&half).unwrap().poa - 1.125).abs() < 1e-12);
        assert!(undirected_worst(&in_star(3)).is_err());
    }

    #[test]
    fn scaling_to_tight() {
        let edge = Graph::new(false, 2, [Edge::new(0, 1, 1.0)], vec![0.0, 1.0]).unwrap();
        assert!((scale_to_tight(&edge, 1).unwrap() - 0.5).abs() < 1e-12);
        let alpha = scale_to_tight(&path3(), 2).unwrap();
        assert!((alpha - 1.0 / 3.0).abs() < 1e-12);
        let tight = undirected_worst(&path3().scaled(alpha).unwrap()).unwrap();
        assert!((tight.poa - 1.125).abs() < 1e-9);
        assert!(scale_to_tight(&path3(), 0).is_err());
    }

    #[test]
    fn cost_matrix_forms() {
        let bare = Graph::new(true, 3, [], vec![1.0, 2.0, 3.0]).unwrap();
        let cm = cost_matrices(&bare).unwrap();
        assert!(max_abs(&cm.b) == 0.0 && max_abs(&cm.c) == 0.0);
        let g = path3();
        let cm = cost_matrices(&g).unwrap();
        let s = g.opinions();
        assert!(((s.transpose() * &cm.c * s)[0] - 0.375).abs() < 1e-14);
        assert!(((s.transpose() * &cm.b * s)[0] - 1.0 / 3.0).abs() < 1e-14);
        assert_eq!(cm.p.shape(), (3, 2));
        assert_eq!(cm.p.column(1).as_slice(), &[0.0, 1.0, -1.0]);
    }

    #[test]
    fn directed_worst_matches_undirected_on_path() {
        let r = directed_worst(&path3()).unwrap();
        assert!((r.poa - 1.125).abs() < 1e-10);
        let s = r.worst_s.unwrap();
        assert!(s[1].abs() < 1e-8 && (s[0] + s[2]).abs() < 1e-8);
    }

    #[test]
    fn directed_cycle_closed_form() {
        for n in [4usize, 8] {
            let r = directed_worst(&cycle(n)).unwrap();
            let l2 = 2.0 * (1.0 - (2.0 * std::f64::consts::PI / n as f64).cos());
            assert!((r.poa - (2.0 + 2.0 * l2) / (1.0 + 2.0 * l2)).abs() < 1e-8);
        }
    }

    #[test]
    fn eulerian_machinery_on_cycles() {
        let g = cycle(5);
        let m = eulerian_m(&g).unwrap();
        let a = laplacians(&g).a;
        assert!(max_abs(&(m - &a * 2.0)) < 1e-12);
        let tri = cycle(3);
        assert!(eulerian_m(&tri).is_ok());
        assert!((eulerian_beta(&tri).unwrap() - 2.0).abs() < 1e-9);
        assert!(matches!(
            eulerian_m(&in_star(4)),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            eulerian_beta(&in_star(4)),
            Err(Error::Unsupported(_))
        ));
        let mg = min_g(&cycle(4)).unwrap();
        assert!((mg.value - mg.nash_cost).abs() < 1e-12);
        let bare = Graph::new(true, 3, [], vec![1.0, 2.0, 3.0]).unwrap();
        let mg = min_g(&bare).unwrap();
        assert_eq!(mg.value, 0.0);
        assert_eq!(mg.minimizer, *bare.opinions());
    }

    #[test]
    fn bound_formulas() {
        let l2 = 2.0 * (1.0 - (2.0 * std::f64::consts::PI / 32.0).cos());
        let b = poa_bound_from_beta(2.0, l2).unwrap();
        assert!((b - (2.0 + 2.0 * l2) / (1.0 + 2.0 * l2)).abs() < 1e-15);
        assert!((b - 1.9287).abs() < 1e-4);
        assert!((poa_bound_from_beta(4.0, 1.0).unwrap() - 1.6).abs() < 1e-15);
        let mut prev = f64::INFINITY;
        for l in [0.1, 1.0, 10.0, 1e3, 1e6] {
            let v = poa_bound_from_beta(3.0, l).unwrap();
            assert!(v < prev);
            prev = v;
        }
        assert!((prev - 1.0).abs() < 1e-5);
        assert!(poa_bound_from_beta(2.0, 0.0).is_err());
        assert_eq!(expander_bound(1.0, 1.0).unwrap(), 4.0);
        assert_eq!(expander_bound(2.0, 1.0).unwrap(), 12.0);
        assert!(expander_bound(2.0, 0.0).is_err());
    }

    #[test]
    fn eulerian_search_runs() {
        let r = eulerian_poa_search(6, 2, 5, 1).unwrap();
        assert!(r.best_poa >= 1.0 && r.trials == 5);
    }

    #[test]
    fn tree_costs() {
        assert_eq!(tree_nash_cost(3, 0).cost, 0.0);
        assert_eq!(tree_nash_cost(2, 4).cost, 8.0);
        assert!(!tree_nash_cost(2, 4).closed_form);
        let t = tree_nash_cost(3, 2);
        assert_eq!(t.cost, 12.0);
        assert_eq!(t.layer_opinions, vec![1.0, 0.5, 0.25]);
    }
}
