mod common;

use optapprox::gram::build_system;
use optapprox::solve::{cholesky_solve, levinson_solve, solve, SolverChoice};
use optapprox::{SolverKind, SpaceParam, Structure, TaylorSeries1D};
use rand::Rng;

#[test]
fn levinson_agrees_with_cholesky() {
    let mut rng = common::rng(21);
    for case in 0..200 {
        let degree = rng.gen_range(0..=8);
        let coeffs = (0..=degree).map(|_| common::unit_square(&mut rng)).collect();
        let f = TaylorSeries1D::new(coeffs).unwrap();
        if f.is_zero() {
            continue;
        }
        let n = rng.gen_range(0..=24);
        let g = build_system(&f, n, SpaceParam::HARDY).unwrap();
        assert_eq!(g.structure, Structure::Toeplitz);
        let lev = levinson_solve(&g).unwrap();
        let chol = cholesky_solve(&g).unwrap();
        assert_eq!(lev.solver, SolverKind::Levinson);
        let rel = common::rel_inf(&lev.coeffs, &chol.coeffs);
        assert!(rel <= 1e-9, "case {case}: relative gap {rel:e}, cond {:e}", chol.cond_estimate);
    }
}

#[test]
fn residual_small_for_moderate_conditioning() {
    let mut rng = common::rng(22);
    for _ in 0..300 {
        let degree = rng.gen_range(0..=8);
        let f = common::random_poly(&mut rng, degree);
        let s = common::random_alpha(&mut rng);
        let n = rng.gen_range(0..=16);
        let g = build_system(&f, n, s).unwrap();
        let report = solve(&g, SolverChoice::Auto).unwrap();
        let b_inf = g.rhs.iter().map(|b| b.norm()).fold(0.0, f64::max);
        if report.cond_estimate <= 1e10 {
            assert!(report.residual_inf <= 1e-10 * b_inf, "{:e}", report.residual_inf);
        }
        assert!(report.refined);
    }
}

#[test]
fn solves_are_deterministic() {
    let mut rng = common::rng(23);
    for _ in 0..50 {
        let f = common::random_poly(&mut rng, 5);
        let s = common::random_alpha(&mut rng);
        let g = build_system(&f, 9, s).unwrap();
        let first = solve(&g, SolverChoice::Auto).unwrap();
        let second = solve(&g, SolverChoice::Auto).unwrap();
        assert_eq!(first.coeffs, second.coeffs);
    }
}

#[test]
fn levinson_requires_toeplitz() {
    let f = TaylorSeries1D::from_real(&[1.0, -1.0]).unwrap();
    let g = build_system(&f, 3, SpaceParam::DIRICHLET).unwrap();
    assert!(solve(&g, SolverChoice::Levinson).is_err());
    assert_eq!(solve(&g, SolverChoice::Auto).unwrap().solver, SolverKind::Cholesky);
}
