//! Adding edges to lower the Nash social cost.
//!
//! All additions are directed: adding weight `ρ` to `i -> j` makes `i` pay
//! attention to `j`, i.e. `L' = L + ρ e_i (e_i − e_j)ᵀ`. Undirected inputs
//! are first expanded to their bidirected form.
//!
//! Along such an addition the equilibrium moves on the line
//! `y' = y − φ v_i` with `v_i = (L+I)⁻¹e_i` and
//! `φ = ρ(y_i − y_j) / (1 + ρ(v_ii − v_ij))`, and the new social cost is the
//! quadratic `αφ² − 2βφ + c(y)`.

use nalgebra::{DMatrix, DVector};

use crate::equilibrium::{nash, nash_direct, node_cost, optimum, social_cost};
use crate::error::{Error, GraphError, Result};
use crate::graph::{add_edge_weight, laplacians, Edge, Graph};
use crate::linalg::Lu;
use crate::poa::cost_ratio;

/// Finite weight reported for plans whose optimum lies at `ρ = ∞`.
pub const DEFAULT_RHO_CAP: f64 = 1e6;

/// Largest candidate set [`brute_force_design`] will enumerate.
pub const BRUTE_FORCE_MAX_CANDIDATES: usize = 20;

const GRADIENT_FLOOR: f64 = -1e-12;

fn prepare(g: &Graph, op: &str) -> Result<Graph> {
    if g.node_weights().is_some() || g.fixed_nodes().is_some() {
        return Err(Error::Unsupported(format!(
            "{op} assumes uniform node weights"
        )));
    }
    Ok(g.as_directed())
}

fn check_pair(g: &Graph, i: usize, j: usize) -> Result<()> {
    for v in [i, j] {
        if v >= g.n() {
            return Err(GraphError::IndexOutOfRange { index: v, n: g.n() }.into());
        }
    }
    if i == j {
        return Err(GraphError::SelfLoop(i).into());
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceVector {
    pub source: usize,
    pub values: DVector<f64>,
}

fn influence_from(lu: &Lu, n: usize, i: usize) -> Result<InfluenceVector> {
    let mut e = DVector::zeros(n);
    e[i] = 1.0;
    let values = lu.solve(&e);
    for (j, &x) in values.iter().enumerate() {
        if !(-1e-12..=1.0 + 1e-12).contains(&x) {
            return Err(Error::Numerical(format!(
                "influence of {i} on {j} is {x}, outside [0, 1]"
            )));
        }
        if j != i && x > values[i] - 1e-12 {
            return Err(Error::Numerical(format!(
                "influence of {i} on {j} ({x}) is not below its own ({})",
                values[i]
            )));
        }
    }
    Ok(InfluenceVector { source: i, values })
}

/// `v_i = (L+I)⁻¹e_i`, the equilibrium when `s = e_i`.
pub fn influence_vector(g: &Graph, i: usize) -> Result<InfluenceVector> {
    let g = prepare(g, "influence_vector")?;
    if i >= g.n() {
        return Err(GraphError::IndexOutOfRange { index: i, n: g.n() }.into());
    }
    let lu = Lu::new(&(laplacians(&g).l + DMatrix::identity(g.n(), g.n())))?;
    influence_from(&lu, g.n(), i)
}

/// Everything needed to evaluate the cost of adding weight to `i -> j`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeModel {
    pub i: usize,
    pub j: usize,
    pub nash: DVector<f64>,
    pub influence: DVector<f64>,
    /// `y_i − y_j`.
    pub gap: f64,
    /// `v_ii − v_ij`, strictly positive.
    pub spread: f64,
    pub alpha: f64,
    pub beta: f64,
    pub baseline_cost: f64,
}

impl EdgeModel {
    pub fn new(g: &Graph, i: usize, j: usize) -> Result<Self> {
        let g = prepare(g, "edge analysis")?;
        check_pair(&g, i, j)?;
        let n = g.n();
        let lp = laplacians(&g);
        let id = DMatrix::<f64>::identity(n, n);
        let lu = Lu::new(&(&lp.l + &id))?;
        let s = g.opinions();
        let y = lu.solve(s);
        let v = influence_from(&lu, n, i)?.values;
        let a_plus_i = &lp.a + &id;
        let gap = y[i] - y[j];
        let spread = v[i] - v[j];
        let alpha = v.dot(&(&a_plus_i * &v)) - spread;
        let beta = v.dot(&(&a_plus_i * &y - s)) - 0.5 * gap;
        let baseline_cost = social_cost(&g, &y);
        Ok(Self {
            i,
            j,
            nash: y,
            influence: v,
            gap,
            spread,
            alpha,
            beta,
            baseline_cost,
        })
    }

    pub fn phi(&self, rho: f64) -> f64 {
        rho * self.gap / (1.0 + rho * self.spread)
    }

    /// Limit of `φ` as `ρ → ∞`.
    pub fn phi_max(&self) -> f64 {
        self.gap / self.spread
    }

    pub fn rho(&self, phi: f64) -> f64 {
        phi / (self.gap - phi * self.spread)
    }

    pub fn cost_at_phi(&self, phi: f64) -> f64 {
        self.alpha * phi * phi - 2.0 * self.beta * phi + self.baseline_cost
    }

    /// Nash opinions after adding `rho`, by the rank-one update.
    pub fn nash_after(&self, rho: f64) -> DVector<f64> {
        &self.nash - &self.influence * self.phi(rho)
    }

    /// `dc/dρ` at `ρ = 0`.
    pub fn gamma(&self) -> f64 {
        -2.0 * self.beta * self.gap
    }
}

/// Nash equilibrium after adding `rho` to `i -> j`, without refactoring.
pub fn rank_one_nash(g: &Graph, i: usize, j: usize, rho: f64) -> Result<DVector<f64>> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(GraphError::BadAddedWeight(rho).into());
    }
    Ok(EdgeModel::new(g, i, j)?.nash_after(rho))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgePlan {
    pub i: usize,
    pub j: usize,
    /// Optimal added weight, or the finite cap when `saturated`.
    pub rho_star: f64,
    /// The optimum is only reached as `ρ → ∞`.
    pub saturated: bool,
    pub phi_star: f64,
    pub phi_max: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Cost at `φ*` (the `ρ → ∞` limit when saturated).
    pub predicted_cost: f64,
    pub baseline_cost: f64,
}

/// [`optimal_edge_weight_capped`] with [`DEFAULT_RHO_CAP`].
pub fn optimal_edge_weight(g: &Graph, i: usize, j: usize) -> Result<EdgePlan> {
    optimal_edge_weight_capped(g, i, j, DEFAULT_RHO_CAP)
}

/// Minimizes the cost quadratic over `φ` between 0 and `φ_max`.
pub fn optimal_edge_weight_capped(g: &Graph, i: usize, j: usize, rho_cap: f64) -> Result<EdgePlan> {
    if !(rho_cap > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "rho cap must be positive, got {rho_cap}"
        )));
    }
    let m = EdgeModel::new(g, i, j)?;
    let phi_max = m.phi_max();
    let mut candidates = vec![0.0];
    if m.alpha > 0.0 {
        let stationary = m.beta / m.alpha;
        let (lo, hi) = (phi_max.min(0.0), phi_max.max(0.0));
        if stationary > lo && stationary < hi {
            candidates.push(stationary);
        }
    }
    candidates.push(phi_max);
    let mut phi_star = 0.0;
    let mut best = m.baseline_cost;
    for &phi in &candidates[1..] {
        let c = m.cost_at_phi(phi);
        if c < best {
            best = c;
            phi_star = phi;
        }
    }
    let saturated = phi_max != 0.0 && (phi_star - phi_max).abs() <= 1e-9 * phi_max.abs();
    let rho_star = if saturated {
        rho_cap
    } else if phi_star == 0.0 {
        0.0
    } else {
        m.rho(phi_star)
    };
    Ok(EdgePlan {
        i,
        j,
        rho_star,
        saturated,
        phi_star,
        phi_max,
        alpha: m.alpha,
        beta: m.beta,
        gamma: m.gamma(),
        predicted_cost: best,
        baseline_cost: m.baseline_cost,
    })
}

/// `γ_ij = (y_i − y_j)² − 2(y_i − y_j) v_iᵀ((A+I)y − s)`, the derivative of
/// the Nash social cost in the added weight at `ρ = 0`.
pub fn edge_gradient(g: &Graph, i: usize, j: usize) -> Result<f64> {
    let m = EdgeModel::new(g, i, j)?;
    let g = g.as_directed();
    let n = g.n();
    let residual = (laplacians(&g).a + DMatrix::identity(n, n)) * &m.nash - g.opinions();
    Ok(m.gap * m.gap - 2.0 * m.gap * m.influence.dot(&residual))
}

/// Every ordered pair `(i, j)` with `i ≠ j`.
pub fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignStep {
    pub plan: EdgePlan,
    pub applied_rho: f64,
    pub cost_after: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignRun {
    pub graph: Graph,
    pub initial_cost: f64,
    pub steps: Vec<DesignStep>,
}

/// Greedy edge additions along the most negative gradient, each capped at
/// `step_weight`. Stops after `budget` additions or when no candidate has
/// a negative gradient.
pub fn steepest_descent_design(
    g: &Graph,
    budget: usize,
    step_weight: f64,
    candidates: Option<&[(usize, usize)]>,
) -> Result<DesignRun> {
    if !(step_weight > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "step weight must be positive, got {step_weight}"
        )));
    }
    let mut current = prepare(g, "steepest_descent_design")?;
    let mut pairs = candidates.map_or_else(|| all_pairs(current.n()), <[_]>::to_vec);
    pairs.sort_unstable();
    pairs.dedup();
    for &(i, j) in &pairs {
        check_pair(&current, i, j)?;
    }
    let initial_cost = nash_direct(&current)?.social_cost;
    let mut steps = Vec::new();
    while steps.len() < budget {
        let mut best: Option<(f64, usize, usize)> = None;
        for &(i, j) in &pairs {
            let gamma = EdgeModel::new(&current, i, j)?.gamma();
            if best.is_none_or(|(b, _, _)| gamma < b - 1e-12) {
                best = Some((gamma, i, j));
            }
        }
        let Some((gamma, i, j)) = best else { break };
        if gamma >= GRADIENT_FLOOR {
            break;
        }
        let plan = optimal_edge_weight(&current, i, j)?;
        let applied_rho = plan.rho_star.min(step_weight);
        if applied_rho <= 0.0 {
            break;
        }
        current = add_edge_weight(&current, i, j, applied_rho)?;
        let cost_after = nash_direct(&current)?.social_cost;
        steps.push(DesignStep {
            plan,
            applied_rho,
            cost_after,
        });
    }
    Ok(DesignRun {
        graph: current,
        initial_cost,
        steps,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BidirectCertificate {
    /// Nash cost in the bidirected graph.
    pub nash_cost: f64,
    /// Optimal cost in the original graph.
    pub opt_cost: f64,
    pub ratio: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Adds the reverse of every edge. Without `weighted`, only missing
/// reverses are added (with the forward weight) and the guarantee is 9/4;
/// with it every edge gets a reverse copy, the result is the symmetrised
/// graph, and the guarantee is 2. Undirected graphs are returned as is
/// with the 9/8 guarantee.
pub fn bidirect_approx(g: &Graph, weighted: bool) -> Result<(Graph, BidirectCertificate)> {
    if g.node_weights().is_some() || g.fixed_nodes().is_some() {
        return Err(Error::Unsupported(
            "bidirect_approx assumes uniform node weights".into(),
        ));
    }
    let (out, bound) = if !g.is_directed() {
        (g.clone(), 9.0 / 8.0)
    } else {
        let mut edges = g.edges().to_vec();
        for e in g.edges() {
            if weighted || g.weight(e.dst, e.src) == 0.0 {
                edges.push(Edge::new(e.dst, e.src, e.weight));
            }
        }
        let out = Graph::new(true, g.n(), edges, g.opinions().iter().copied().collect())?;
        (out, if weighted { 2.0 } else { 9.0 / 4.0 })
    };
    let nash_cost = nash_direct(&out)?.social_cost;
    let opt_cost = optimum(g)?.social_cost;
    let ratio = cost_ratio(nash_cost, opt_cost, g.opinions().norm_squared());
    Ok((
        out,
        BidirectCertificate {
            nash_cost,
            opt_cost,
            ratio,
            bound,
            holds: ratio <= bound + 1e-9,
        },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesignObjective {
    Full,
    /// Social cost without the given node's own cost.
    ExcludeNode(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    /// Indices into the sorted candidate list.
    pub best_subset: Vec<usize>,
    pub best_edges: Vec<(usize, usize)>,
    pub best_cost: f64,
    pub baseline_cost: f64,
    pub evaluated: usize,
}

fn objective_cost(g: &Graph, objective: DesignObjective) -> Result<f64> {
    let y = nash(g)?.opinions;
    Ok(match objective {
        DesignObjective::Full => social_cost(g, &y),
        DesignObjective::ExcludeNode(w) => (0..g.n())
            .filter(|&i| i != w)
            .map(|i| node_cost(g, &y, i))
            .sum(),
    })
}

fn next_subset(subset: &mut Vec<usize>, m: usize, k: usize) -> bool {
    // Lexicographic successor among subsets of size <= k: [] [0] [0,1] .. [0,2] ..
    if subset.len() < k {
        let next = subset.last().map_or(0, |&x| x + 1);
        if next < m {
            subset.push(next);
            return true;
        }
    }
    while let Some(last) = subset.pop() {
        if last + 1 < m {
            subset.push(last + 1);
            return true;
        }
    }
    false
}

/// Exhaustive search over all subsets of at most `k` candidate additions of
/// weight `unit_weight`. Ties go to the lexicographically smallest subset.
pub fn brute_force_design(
    g: &Graph,
    candidates: &[(usize, usize)],
    k: usize,
    unit_weight: f64,
    objective: DesignObjective,
) -> Result<BruteForceResult> {
    let base = prepare(g, "brute_force_design")?;
    let mut pairs = candidates.to_vec();
    pairs.sort_unstable();
    pairs.dedup();
    if pairs.len() > BRUTE_FORCE_MAX_CANDIDATES {
        return Err(Error::Unsupported(format!(
            "{} candidate edges exceed the brute-force limit of {BRUTE_FORCE_MAX_CANDIDATES}",
            pairs.len()
        )));
    }
    for &(i, j) in &pairs {
        check_pair(&base, i, j)?;
    }
    if let DesignObjective::ExcludeNode(w) = objective {
        if w >= base.n() {
            return Err(GraphError::IndexOutOfRange {
                index: w,
                n: base.n(),
            }
            .into());
        }
    }
    if !(unit_weight > 0.0 && unit_weight.is_finite()) {
        return Err(GraphError::BadAddedWeight(unit_weight).into());
    }
    let baseline_cost = objective_cost(&base, objective)?;
    let mut best_subset = Vec::new();
    let mut best_cost = baseline_cost;
    let mut evaluated = 1;
    let mut subset = Vec::new();
    while next_subset(&mut subset, pairs.len(), k) {
        let mut trial = base.clone();
        for &c in &subset {
            let (i, j) = pairs[c];
            trial = add_edge_weight(&trial, i, j, unit_weight)?;
        }
        let cost = objective_cost(&trial, objective)?;
        evaluated += 1;
        let tol = 1e-12 * (1.0 + best_cost.abs());
        if cost < best_cost - tol || ((cost - best_cost).abs() <= tol && subset < best_subset) {
            best_cost = cost;
            best_subset = subset.clone();
        }
    }
    Ok(BruteForceResult {
        best_edges: best_subset.iter().map(|&c| pairs[c]).collect(),
        best_subset,
        best_cost,
        baseline_cost,
        evaluated,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImprovementCheck {
    /// `c_G(y) / c_G'(y')`.
    pub ratio: f64,
    /// PoA of the smaller graph.
    pub poa: f64,
    pub opt_cost: f64,
    pub opt_cost_extended: f64,
    pub holds: bool,
}

/// Compares the Nash improvement from `g` to its supergraph `g_prime`
/// with the PoA of `g`.
pub fn improvement_bound_check(g: &Graph, g_prime: &Graph) -> Result<ImprovementCheck> {
    if g.n() != g_prime.n() || g.opinions() != g_prime.opinions() {
        return Err(Error::InvalidArgument(
            "graphs must share nodes and internal opinions".into(),
        ));
    }
    for e in g.arcs() {
        let ext = if g_prime.is_directed() {
            g_prime.weight(e.src, e.dst)
        } else {
            g_prime.weight(e.src.min(e.dst), e.src.max(e.dst))
        };
        if ext < e.weight * (1.0 - 1e-12) {
            return Err(Error::InvalidArgument(format!(
                "edge ({}, {}) of the base graph is missing from the extension",
                e.src, e.dst
            )));
        }
    }
    let scale = g.opinions().norm_squared();
    let nash_g = nash(g)?.social_cost;
    let nash_ext = nash(g_prime)?.social_cost;
    let opt_cost = optimum(g)?.social_cost;
    let opt_cost_extended = optimum(g_prime)?.social_cost;
    let ratio = cost_ratio(nash_g, nash_ext, scale);
    let poa = cost_ratio(nash_g, opt_cost, scale);
    Ok(ImprovementCheck {
        ratio,
        poa,
        opt_cost,
        opt_cost_extended,
        holds: ratio <= poa + 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(n: usize) -> Graph {
        let mut s = vec![0.0; n];
        s[0] = 1.0;
        Graph::new(true, n, (1..n).map(|l| Edge::new(l, 0, 1.0)), s).unwrap()
    }

    fn path3() -> Graph {
        Graph::new(
            false,
            3,
            [Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0)],
            vec![0.0, 0.5, 1.0],
        )
        .unwrap()
    }

    #[test]
    fn influence_examples() {
        let bare = Graph::new(true, 3, [], vec![0.0; 3]).unwrap();
        assert_eq!(
            influence_vector(&bare, 1).unwrap().values.as_slice(),
            &[0.0, 1.0, 0.0]
        );
        let v = influence_vector(&star(4), 0).unwrap().values;
        assert!((v[0] - 1.0).abs() < 1e-15);
        assert!(v.iter().skip(1).all(|&x| (x - 0.5).abs() < 1e-15));
        let v = influence_vector(&path3(), 0).unwrap().values;
        assert!(v.iter().all(|&x| x > 0.0 && x <= 1.0));
        let e0 = path3()
            .with_opinions(&DVector::from_vec(vec![1.0, 0.0, 0.0]))
            .unwrap();
        assert!((v - nash_direct(&e0.as_directed()).unwrap().opinions).amax() < 1e-15);
    }

    #[test]
    fn star_shift_from_one_edge() {
        let n = 9;
        let y = rank_one_nash(&star(n), 0, 1, 1.0).unwrap();
        assert!((y[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!(y.iter().skip(1).all(|&x| (x - 1.0 / 3.0).abs() < 1e-12));
        let shifted = add_edge_weight(&star(n), 0, 1, 1.0).unwrap();
        assert!((social_cost(&shifted, &y) - 2.0 * n as f64 / 9.0).abs() < 1e-12);
        let y0 = rank_one_nash(&star(n), 0, 1, 1e-14).unwrap();
        assert!((y0 - nash_direct(&star(n)).unwrap().opinions).amax() < 1e-10);
        assert!(rank_one_nash(&star(n), 0, 1, 0.0).is_err());
    }

    #[test]
    fn plans() {
        let n = 9;
        let plan = optimal_edge_weight(&star(n), 0, 1).unwrap();
        assert!(plan.predicted_cost <= 2.0 * n as f64 / 9.0 + 1e-12);
        assert!(plan.predicted_cost <= plan.baseline_cost);
        assert!(plan.gamma < 0.0);
        let m = EdgeModel::new(&star(n), 0, 1).unwrap();
        assert!((m.cost_at_phi(m.phi(1.0)) - 2.0 * n as f64 / 9.0).abs() < 1e-12);

        let flat = Graph::new(
            true,
            3,
            [Edge::new(1, 0, 1.0), Edge::new(2, 0, 1.0)],
            vec![0.0; 3],
        )
        .unwrap();
        let plan = optimal_edge_weight(&flat, 1, 2).unwrap();
        assert_eq!(
            (plan.rho_star, plan.gamma, plan.saturated),
            (0.0, 0.0, false)
        );
        assert_eq!(edge_gradient(&flat, 1, 2).unwrap(), 0.0);
        assert!(optimal_edge_weight(&flat, 1, 1).is_err());
    }

    #[test]
    fn gradient_forms_agree() {
        let g = path3();
        for (i, j) in all_pairs(3) {
            let m = EdgeModel::new(&g, i, j).unwrap();
            assert!((m.gamma() - edge_gradient(&g, i, j).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn descent_on_star() {
        let n = 9;
        let run = steepest_descent_design(&star(n), 1, 1.0, None).unwrap();
        assert_eq!(run.steps.len(), 1);
        assert_eq!((run.steps[0].plan.i, run.steps[0].plan.j), (0, 1));
        assert_eq!(run.steps[0].applied_rho, 1.0);
        assert!((run.steps[0].cost_after - 2.0 * n as f64 / 9.0).abs() < 1e-12);
        let idle = steepest_descent_design(&star(n), 0, 1.0, None).unwrap();
        assert!(idle.steps.is_empty());
        let bare = Graph::new(true, 3, [], vec![0.0; 3]).unwrap();
        let run = steepest_descent_design(&bare, 5, 1.0, None).unwrap();
        assert!(run.steps.is_empty() && run.graph == bare);
    }

    #[test]
    fn bidirection() {
        let (g2, cert) = bidirect_approx(&star(9), false).unwrap();
        assert!(g2.is_symmetric());
        assert!(cert.holds && cert.bound == 2.25);
        let (same, cert) = bidirect_approx(&path3(), false).unwrap();
        assert_eq!(same, path3());
        assert!((cert.ratio - 1.125).abs() < 1e-12);
        let (_, cert) = bidirect_approx(&star(9), true).unwrap();
        assert!(cert.holds && cert.bound == 2.0);
    }

    #[test]
    fn subset_enumeration_order() {
        let mut s = Vec::new();
        let mut seen = vec![s.clone()];
        while next_subset(&mut s, 3, 2) {
            seen.push(s.clone());
        }
        let expected: Vec<Vec<usize>> = vec![
            vec![],
            vec![0],
            vec![0, 1],
            vec![0, 2],
            vec![1],
            vec![1, 2],
            vec![2],
        ];
        assert_eq!(seen, expected);
    }

    #[test]
    fn brute_force_basics() {
        let g = star(4);
        let cands = all_pairs(4);
        assert!(matches!(
            brute_force_design(&g, &all_pairs(6), 1, 1.0, DesignObjective::Full),
            Err(Error::Unsupported(_))
        ));
        let r = brute_force_design(&g, &cands, 0, 1.0, DesignObjective::Full).unwrap();
        assert!(r.best_edges.is_empty() && r.best_cost == r.baseline_cost && r.evaluated == 1);
        let r = brute_force_design(&g, &cands[..3], 1, 1.0, DesignObjective::Full).unwrap();
        assert_eq!(r.best_edges, vec![(0, 1)]);
    }

    #[test]
    fn improvement_examples() {
        let g = star(9);
        let same = improvement_bound_check(&g, &g).unwrap();
        assert_eq!(same.ratio, 1.0);
        assert!(same.holds);
        let ext = add_edge_weight(&g, 0, 1, 1.0).unwrap();
        let chk = improvement_bound_check(&g, &ext).unwrap();
        assert!(chk.holds && (chk.ratio - 2.0).abs() < 1e-12 && (chk.poa - 5.0).abs() < 1e-12);
        assert!(chk.opt_cost_extended >= chk.opt_cost - 1e-12);
        assert!(improvement_bound_check(&ext, &g).is_err());
    }
}
