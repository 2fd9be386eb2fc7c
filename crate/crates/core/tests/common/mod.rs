//! Reference computations built straight from the edge list with
//! nalgebra's own solvers and eigensolver.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use opinion_game::graph::Graph;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Every stored edge as one or two directed arcs.
pub fn oracle_arcs(g: &Graph) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::new();
    for e in g.edges() {
        out.push((e.src, e.dst, e.weight));
        if !g.is_directed() {
            out.push((e.dst, e.src, e.weight));
        }
    }
    out
}

/// Out-degree Laplacian, and the Laplacian of the graph with weights
/// `w_ij + w_ji`.
pub fn oracle_laplacians(g: &Graph) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = g.n();
    let mut l = DMatrix::zeros(n, n);
    let mut sym = DMatrix::zeros(n, n);
    for (i, j, w) in oracle_arcs(g) {
        l[(i, i)] += w;
        l[(i, j)] -= w;
        sym[(i, j)] += w;
        sym[(j, i)] += w;
    }
    let mut a = -sym.clone();
    for i in 0..n {
        a[(i, i)] = sym.row(i).sum();
    }
    (l, a)
}

pub fn oracle_nash(g: &Graph) -> DVector<f64> {
    let (l, _) = oracle_laplacians(g);
    let n = g.n();
    (l + DMatrix::identity(n, n))
        .lu()
        .solve(g.opinions())
        .expect("nonsingular")
}

pub fn oracle_opt(g: &Graph) -> DVector<f64> {
    let (_, a) = oracle_laplacians(g);
    let n = g.n();
    (a + DMatrix::identity(n, n))
        .lu()
        .solve(g.opinions())
        .expect("nonsingular")
}

/// `Σ_i (z_i − s_i)² + Σ_{arcs} w (z_i − z_j)²`.
pub fn oracle_cost(g: &Graph, z: &DVector<f64>) -> f64 {
    let s = g.opinions();
    let internal: f64 = (0..g.n()).map(|i| (z[i] - s[i]).powi(2)).sum();
    let edges: f64 = oracle_arcs(g)
        .into_iter()
        .map(|(i, j, w)| w * (z[i] - z[j]).powi(2))
        .sum();
    internal + edges
}

pub fn oracle_poa(g: &Graph) -> f64 {
    let nash = oracle_cost(g, &oracle_nash(g));
    let opt = oracle_cost(g, &oracle_opt(g));
    if opt <= 1e-20 * (1.0 + g.opinions().norm_squared()) {
        1.0
    } else {
        nash / opt
    }
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> DVector<f64> {
    DVector::from_iterator(n, (0..n).map(|_| rng.gen_range(lo..hi)))
}

pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}
