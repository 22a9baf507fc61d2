mod common;

use optapprox::approx::optimal_approximant;
use optapprox::bidisk::{build_system_2d, norm_sq_2d, optimal_approximant_2d, swap_symmetry_check, MonomialBasis2D, TaylorSeries2D};
use optapprox::solve::Cholesky;
use optapprox::Complex64;
use rand::Rng;

fn random_2d(rng: &mut impl Rng, degree: usize) -> TaylorSeries2D {
    let mut terms = vec![(0, 0, Complex64::new(1.0, 0.0) + 0.3 * common::unit_square(rng))];
    for d in 1..=degree {
        for j in 0..=d {
            terms.push((j, d - j, 0.5 * common::unit_square(rng)));
        }
    }
    TaylorSeries2D::from_terms(terms).unwrap()
}

#[test]
fn embedded_one_variable_functions_do_no_worse() {
    let mut rng = common::rng(51);
    for _ in 0..50 {
        let degree = rng.gen_range(0..=5);
        let g = common::random_poly(&mut rng, degree);
        let s = common::random_alpha(&mut rng);
        let n = rng.gen_range(0..=5);
        let one = optimal_approximant(&g, n, s).unwrap();
        let two = optimal_approximant_2d(&common::embed_first_variable(&g), n, s).unwrap();
        assert!(two.dist_sq <= one.dist_sq + 1e-12);
    }
}

#[test]
fn gram_is_hermitian_positive_definite() {
    let mut rng = common::rng(52);
    for _ in 0..50 {
        let degree = rng.gen_range(0..=3);
        let f = random_2d(&mut rng, degree);
        let s = common::random_alpha(&mut rng);
        let basis = MonomialBasis2D::new(rng.gen_range(0..=4));
        let (m, _) = build_system_2d(&f, &basis, s);
        assert_eq!(m.hermitian_defect(), 0.0);
        assert!(Cholesky::factor(&m).is_ok());
    }
}

#[test]
fn distance_identity_and_scaling() {
    let mut rng = common::rng(53);
    for _ in 0..50 {
        let degree = rng.gen_range(0..=3);
        let f = random_2d(&mut rng, degree);
        let s = common::random_alpha(&mut rng);
        let n = rng.gen_range(0..=4);
        let a = optimal_approximant_2d(&f, n, s).unwrap();
        assert!((a.dist_sq - a.dist_sq_formula).abs() <= 1e-10);
        assert!(a.dist_sq <= norm_sq_2d(&TaylorSeries2D::constant(Complex64::new(1.0, 0.0)), s) + 1e-12);

        let c = Complex64::new(0.7, -1.3);
        let scaled = TaylorSeries2D::from_terms(f.terms().map(|(j, k, v)| (j, k, v * c))).unwrap();
        let b = optimal_approximant_2d(&scaled, n, s).unwrap();
        let want: Vec<Complex64> = a.coeffs.iter().map(|p| p / c).collect();
        assert!(common::rel_inf(&b.coeffs, &want) <= 1e-12);
    }
}

#[test]
fn symmetric_inputs_give_symmetric_approximants() {
    let mut rng = common::rng(54);
    for _ in 0..30 {
        let f = random_2d(&mut rng, 2);
        let sym = TaylorSeries2D::from_terms(f.terms().chain(f.swapped().terms())).unwrap();
        let s = common::random_alpha(&mut rng);
        assert!(swap_symmetry_check(&sym, rng.gen_range(0..=4), s).unwrap());
    }
}
