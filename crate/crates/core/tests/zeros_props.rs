mod common;

use optapprox::approx::optimal_approximant;
use optapprox::series::multiply;
use optapprox::zeros::{check_zero_bound, degree_one_zero, find_roots, root_residual, zero_bound};
use optapprox::{Complex64, TaylorSeries1D};
use rand::Rng;

/// Quotient of `q` by `z − z0`, dividing from whichever end is stable.
fn deflate(q: &TaylorSeries1D, z0: Complex64) -> TaylorSeries1D {
    let c = q.coeffs();
    let m = c.len() - 1;
    let mut b = vec![Complex64::new(0.0, 0.0); m];
    if z0.norm() <= 1.0 {
        b[m - 1] = c[m];
        for k in (1..m).rev() {
            b[k - 1] = c[k] + z0 * b[k];
        }
    } else {
        b[0] = -c[0] / z0;
        for k in 1..m {
            b[k] = (b[k - 1] - c[k]) / z0;
        }
    }
    TaylorSeries1D::new(b).unwrap()
}

#[test]
fn zeros_stay_outside_the_bound() {
    let mut rng = common::rng(41);
    let mut violations = 0;
    for _ in 0..1000 {
        let degree = rng.gen_range(0..=6);
        let f = common::random_poly(&mut rng, degree);
        let s = common::random_alpha(&mut rng);
        let n = rng.gen_range(1..=5);
        let a = optimal_approximant(&f, n, s).unwrap();
        if a.effective_degree.unwrap_or(0) == 0 {
            continue;
        }
        let roots = find_roots(&a.p).unwrap();
        assert!(root_residual(&a.p, &roots.roots) <= 1e-10);
        let report = check_zero_bound(&roots.roots, s);
        assert_eq!(report.bound, zero_bound(s));
        if !report.bound_satisfied {
            violations += 1;
        }
    }
    assert_eq!(violations, 0);
}

#[test]
fn every_zero_is_a_degree_one_zero() {
    let mut rng = common::rng(42);
    let mut checked = 0;
    while checked < 50 {
        let degree = rng.gen_range(1..=5);
        let f = common::random_poly(&mut rng, degree);
        let s = common::random_alpha(&mut rng);
        let n = rng.gen_range(1..=5);
        let a = optimal_approximant(&f, n, s).unwrap();
        if a.effective_degree.unwrap_or(0) == 0 {
            continue;
        }
        let roots = find_roots(&a.p).unwrap().roots;
        let z0 = roots[rng.gen_range(0..roots.len())];
        let g = deflate(&multiply(&a.p, &f), z0);
        let w = degree_one_zero(&g, s).unwrap();
        assert!((w - z0).norm() <= 1e-6 * z0.norm(), "{w} vs {z0}");
        checked += 1;
    }
}

#[test]
fn real_functions_have_conjugate_zero_sets() {
    let mut rng = common::rng(43);
    for _ in 0..200 {
        let degree = rng.gen_range(1..=6);
        let f = common::random_real_poly(&mut rng, degree);
        let s = common::random_alpha(&mut rng);
        let n = rng.gen_range(2..=8);
        let a = optimal_approximant(&f, n, s).unwrap();
        if a.effective_degree.unwrap_or(0) == 0 {
            continue;
        }
        let roots = find_roots(&a.p).unwrap().roots;
        for z in &roots {
            let nearest = roots.iter().map(|w| (w - z.conj()).norm()).fold(f64::INFINITY, f64::min);
            assert!(nearest <= 1e-10 * z.norm().max(1.0), "{roots:?}");
        }
    }
}
