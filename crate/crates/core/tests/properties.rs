mod common;

use approx::assert_relative_eq;
use nalgebra::DVector;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use opinion_game::design::{all_pairs, influence_vector, steepest_descent_design, EdgeModel};
use opinion_game::equilibrium::{nash_direct, nash_iterative, social_opt};
use opinion_game::generators::{
    gen_cycle, gen_kary_tree, gen_random, gen_random_eulerian, gen_star,
};
use opinion_game::graph::{
    connected_components, edge_expansion, is_eulerian, laplacians, max_degree,
};
use opinion_game::io::{read_graph, write_graph};
use opinion_game::linalg::sym_eigen;
use opinion_game::poa::{
    algebraic_connectivity, cost_matrices, directed_worst, expander_bound, poa, tree_nash_cost,
};

fn random_graph() -> impl Strategy<Value = opinion_game::graph::Graph> {
    (2usize..=12, 0.1f64..0.9, any::<bool>(), any::<u64>())
        .prop_map(|(n, d, directed, seed)| gen_random(n, d, (0.1, 4.0), directed, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laplacian_shape(g in random_graph()) {
        let lp = laplacians(&g);
        for r in 0..g.n() {
            prop_assert!(lp.l.row(r).sum().abs() <= 1e-12);
            prop_assert!(lp.a.row(r).sum().abs() <= 1e-12);
        }
        prop_assert!((&lp.a - lp.a.transpose()).amax() == 0.0);
        prop_assert!(sym_eigen(&lp.a).eigenvalues[0] >= -1e-9);
        let (_, a_ref) = oracle_laplacians(&g);
        prop_assert!((&lp.a - a_ref).amax() <= 1e-12);
        if !g.is_directed() {
            prop_assert!((&lp.a - &lp.l * 2.0).amax() <= 1e-12);
        }
    }

    #[test]
    fn document_round_trip(g in random_graph()) {
        let text = write_graph(&g);
        let back = read_graph(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(write_graph(&back), text);
    }

    #[test]
    fn cost_forms(g in random_graph(), seed in any::<u64>()) {
        let cm = cost_matrices(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..5 {
            let s = random_vec(&mut rng, g.n(), -1.0, 1.0);
            let probe = g.with_opinions(&s).unwrap();
            let nash = oracle_cost(&probe, &oracle_nash(&probe));
            let opt = oracle_cost(&probe, &oracle_opt(&probe));
            assert_relative_eq!((s.transpose() * &cm.c * &s)[0], nash, max_relative = 1e-9, epsilon = 1e-14);
            assert_relative_eq!((s.transpose() * &cm.b * &s)[0], opt, max_relative = 1e-9, epsilon = 1e-14);
        }
    }

    #[test]
    fn shift_invariance(g in random_graph(), shift in -5.0f64..5.0) {
        let base = poa(&g).unwrap().poa;
        let moved = g.with_opinions(&g.opinions().add_scalar(shift)).unwrap();
        assert_relative_eq!(poa(&moved).unwrap().poa, base, max_relative = 1e-8);
    }

    #[test]
    fn worst_case_dominates(g in random_graph(), seed in any::<u64>()) {
        let worst = directed_worst(&g).unwrap().poa;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let s = random_vec(&mut rng, g.n(), -1.0, 1.0);
            prop_assert!(worst >= oracle_poa(&g.with_opinions(&s).unwrap()) - 1e-8);
        }
        if !g.is_directed() {
            prop_assert!(worst <= 9.0 / 8.0 + 1e-9);
        }
    }

    #[test]
    fn iterative_agrees_with_direct(g in random_graph()) {
        let direct = nash_direct(&g).unwrap();
        let it = nash_iterative(&g, 1e-13, 200_000).unwrap();
        prop_assert!(it.converged);
        prop_assert!((direct.opinions - it.opinions).amax() <= 1e-9);
    }

    #[test]
    fn phi_stays_below_its_limit(g in random_graph(), pick in any::<prop::sample::Index>()) {
        let g = g.as_directed();
        let pairs = all_pairs(g.n());
        let (i, j) = pairs[pick.index(pairs.len())];
        let m = EdgeModel::new(&g, i, j).unwrap();
        let mut prev = 0.0f64;
        for rho in [1e-3, 1e-1, 1.0, 10.0, 1e3] {
            let phi = m.phi(rho);
            prop_assert!(phi.abs() >= prev.abs() - 1e-15);
            prop_assert!(phi * m.gap >= 0.0);
            prop_assert!(phi.abs() <= m.phi_max().abs());
            prev = phi;
        }
        let v = influence_vector(&g, i).unwrap().values;
        let adj = g.out_adjacency();
        for k in (0..g.n()).filter(|&k| k != i) {
            let (num, den) = adj[k].iter().fold((0.0, 1.0), |(a, b), &(t, w)| (a + w * v[t], b + w));
            prop_assert!((v[k] - num / den).abs() <= 1e-12);
        }
    }
}

#[test]
fn simultaneous_diagonalization() {
    for seed in 0..20 {
        let g = gen_random(8, 0.5, (0.2, 3.0), false, seed).unwrap();
        let a = laplacians(&g).a;
        let eig = a.clone().symmetric_eigen();
        let q = &eig.eigenvectors;
        let cm = cost_matrices(&g).unwrap();
        let qbq = q.transpose() * &cm.b * q;
        let qcq = q.transpose() * &cm.c * q;
        for r in 0..8 {
            for c in 0..8 {
                if r != c {
                    assert!(qbq[(r, c)].abs() <= 1e-8 && qcq[(r, c)].abs() <= 1e-8);
                }
            }
            let l = eig.eigenvalues[r];
            assert_relative_eq!(qbq[(r, r)], l / (1.0 + l), epsilon = 1e-8);
            assert_relative_eq!(
                qcq[(r, r)],
                (l * l + 4.0 * l) / ((l + 2.0) * (l + 2.0)),
                epsilon = 1e-8
            );
        }
    }
}

#[test]
fn eulerian_quadratic_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for seed in 0..20 {
        let g = gen_random_eulerian(9, 3, seed).unwrap();
        assert!(is_eulerian(&g));
        let lp = laplacians(&g);
        assert!((&lp.a - (&lp.l + lp.l.transpose())).amax() <= 1e-12);
        let delta = max_degree(&g);
        let llt = &lp.l * lp.l.transpose();
        for _ in 0..20 {
            let z = random_vec(&mut rng, 9, -1.0, 1.0);
            let lhs = (z.transpose() * &llt * &z)[0];
            let rhs = (z.transpose() * &lp.a * &z)[0];
            assert!(lhs <= delta * rhs + 1e-9);
        }
    }
}

#[test]
fn cheeger_direction() {
    for seed in 0..30 {
        let g = gen_random(9, 0.45, (1.0, 1.0), false, seed).unwrap();
        if connected_components(&g).len() > 1 {
            continue;
        }
        let alpha = edge_expansion(&g).unwrap();
        let l2 = sym_eigen(&laplacians(&g).a).eigenvalues[1];
        assert!(alpha * alpha <= 2.0 * max_degree(&g) * l2 + 1e-9);
    }
}

#[test]
fn cycles_respect_expander_bound() {
    for n in [3usize, 5, 8, 12] {
        let g = gen_cycle(n, Some(vec![0.0; n])).unwrap();
        let worst = directed_worst(&g).unwrap().poa;
        let bound = expander_bound(max_degree(&g), edge_expansion(&g).unwrap()).unwrap();
        assert!(worst <= bound);
        assert!(algebraic_connectivity(&g) > 0.0);
    }
}

#[test]
fn descent_never_increases_cost() {
    for seed in 0..10 {
        let g = gen_random(7, 0.3, (0.5, 2.0), true, seed).unwrap();
        let run = steepest_descent_design(&g, 3, 1.0, None).unwrap();
        let mut prev = run.initial_cost;
        for step in &run.steps {
            assert!(step.cost_after <= prev + 1e-12);
            assert!(step.plan.gamma < 0.0);
            prev = step.cost_after;
        }
        assert_relative_eq!(
            oracle_cost(&run.graph, &oracle_nash(&run.graph)),
            prev,
            max_relative = 1e-10
        );
    }
}

#[test]
fn growth_trends() {
    let star: Vec<f64> = [5usize, 9, 17]
        .iter()
        .map(|&n| poa(&gen_star(n).unwrap()).unwrap().poa)
        .collect();
    assert!(star[0] < star[1] && star[1] < star[2]);
    let worst: Vec<f64> = [5usize, 9, 17]
        .iter()
        .map(|&n| directed_worst(&gen_star(n).unwrap()).unwrap().poa)
        .collect();
    assert!(worst[0] < worst[1] && worst[1] < worst[2]);
    let trees: Vec<f64> = (1..=3)
        .map(|d| {
            nash_direct(&gen_kary_tree(3, d).unwrap())
                .unwrap()
                .social_cost
        })
        .collect();
    assert!(trees[0] < trees[1] && trees[1] < trees[2]);
    for (d, &c) in (1..=3).zip(&trees) {
        assert_relative_eq!(c, tree_nash_cost(3, d).cost, max_relative = 1e-12);
    }
    let tree_poa: Vec<f64> = (1..=3)
        .map(|d| {
            let g = gen_kary_tree(3, d).unwrap();
            nash_direct(&g).unwrap().social_cost / social_opt(&g).unwrap().social_cost
        })
        .collect();
    assert!(tree_poa[0] < tree_poa[1] && tree_poa[1] < tree_poa[2]);
}

#[test]
fn star_opt_matches_brute_minimization() {
    // Coordinate descent on the convex social cost as an independent check.
    let g = gen_star(9).unwrap();
    let (_, a) = oracle_laplacians(&g);
    let mut z = DVector::<f64>::zeros(9);
    for _ in 0..2000 {
        for i in 0..9 {
            let row: f64 = (0..9).filter(|&j| j != i).map(|j| a[(i, j)] * z[j]).sum();
            z[i] = (g.opinions()[i] - row) / (1.0 + a[(i, i)]);
        }
    }
    let x = social_opt(&g).unwrap();
    assert!((x.opinions - &z).amax() < 1e-12);
    assert_relative_eq!(x.social_cost, 0.8, epsilon = 1e-12);
}
