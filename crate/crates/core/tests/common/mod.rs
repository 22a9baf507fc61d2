#![allow(dead_code)]

use optapprox::bidisk::TaylorSeries2D;
use optapprox::{Complex64, SpaceParam, TaylorSeries1D};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const ALPHAS: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in the complex unit square `[-1, 1] × [-1, 1]`.
pub fn unit_square(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

/// Random polynomial of exact degree `degree` with `f(0)` bounded away from 0.
pub fn random_poly(rng: &mut impl Rng, degree: usize) -> TaylorSeries1D {
    let mut coeffs: Vec<Complex64> = (0..=degree).map(|_| unit_square(rng)).collect();
    if coeffs[0].norm() < 0.1 {
        coeffs[0] += Complex64::new(0.5, 0.0);
    }
    if coeffs[degree].norm() < 0.1 {
        coeffs[degree] += Complex64::new(0.0, 0.5);
    }
    TaylorSeries1D::new(coeffs).unwrap()
}

pub fn random_real_poly(rng: &mut impl Rng, degree: usize) -> TaylorSeries1D {
    let mut coeffs: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    if coeffs[0].abs() < 0.1 {
        coeffs[0] += 0.5;
    }
    if coeffs[degree].abs() < 0.1 {
        coeffs[degree] += 0.5;
    }
    TaylorSeries1D::from_real(&coeffs).unwrap()
}

pub fn random_alpha(rng: &mut impl Rng) -> SpaceParam {
    SpaceParam::new(ALPHAS[rng.gen_range(0..ALPHAS.len())]).unwrap()
}

/// Two-variable polynomial depending on `z1` only.
pub fn embed_first_variable(g: &TaylorSeries1D) -> TaylorSeries2D {
    TaylorSeries2D::from_terms(g.coeffs().iter().enumerate().map(|(j, &v)| (j, 0, v))).unwrap()
}

pub fn rel_inf(a: &[Complex64], b: &[Complex64]) -> f64 {
    let diff = a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    let scale = b.iter().map(|y| y.norm()).fold(0.0, f64::max);
    diff / scale
}
