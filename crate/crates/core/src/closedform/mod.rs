//! Exact formulas for `f_a = (1 − z)^a` in the Hardy space.
//!
//! The degree-`n` approximant has coefficients
//!
//! ```text
//! c_{k,n} = Γ(k+a) Γ(n+a+1−k) Γ(n+a+1) / (Γ(k+1) Γ(n−k+1) Γ(a) Γ(n+2a+1))
//!         = C(k+a−1, k) · B(n+a+1, a) / B(n−k+1, a)
//! ```
//!
//! so `p_n(0) = Γ(n+a+1)² / (Γ(n+1) Γ(n+2a+1))` and the squared distance
//! `1 − p_n(0)` behaves like `a² / (n+a+1)`. The degree-2 approximant has
//! zeros `−1 ± i √(2/a)`.
//!
//! Gamma ratios are evaluated in log space; the [`exact`] submodule provides
//! a rational-arithmetic ground truth for integer inputs.

pub mod exact;
mod gamma;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gram::build_system;
use crate::linalg::{inf_norm, residual};
use crate::series::{materialize, FunctionSpec, SpaceParam};

pub use gamma::{ln_beta, log_gamma};

/// Largest relative gap tolerated between the two coefficient forms.
pub const FORM_AGREEMENT_RTOL: f64 = 1e-10;

fn check_indices(a: u32, k: usize, n: usize) -> Result<()> {
    if a < 1 {
        return Err(Error::InvalidArgument("the exponent a must be at least 1".into()));
    }
    if k > n {
        return Err(Error::InvalidArgument(format!("coefficient index {k} exceeds degree {n}")));
    }
    Ok(())
}

/// Coefficient `c_{k,n}` from the six-gamma product.
pub fn coeff_gamma_form(a: u32, k: usize, n: usize) -> Result<f64> {
    check_indices(a, k, n)?;
    let (a, k, n) = (a as f64, k as f64, n as f64);
    let lg = gamma::ln_gamma_unchecked;
    let log = lg(k + a) + lg(n + a + 1.0 - k) + lg(n + a + 1.0)
        - lg(k + 1.0)
        - lg(n - k + 1.0)
        - lg(a)
        - lg(n + 2.0 * a + 1.0);
    Ok(log.exp())
}

/// Coefficient `c_{k,n}` from the binomial–beta form.
pub fn coeff_beta_form(a: u32, k: usize, n: usize) -> Result<f64> {
    check_indices(a, k, n)?;
    let binom = binomial_real(k as f64 + a as f64 - 1.0, k);
    let (a, k, n) = (a as f64, k as f64, n as f64);
    let log_ratio = ln_beta(n + a + 1.0, a)? - ln_beta(n - k + 1.0, a)?;
    Ok(binom * log_ratio.exp())
}

/// `C(top, k)` by the multiplicative formula.
fn binomial_real(top: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (top - i as f64) / (i as f64 + 1.0))
}

/// `c_{k,n}`, evaluated in both forms; errors if they disagree.
pub fn approximant_coeff_hardy(a: u32, k: usize, n: usize) -> Result<f64> {
    let beta = coeff_beta_form(a, k, n)?;
    let gamma = coeff_gamma_form(a, k, n)?;
    let rel = ((beta - gamma) / beta).abs();
    if rel > FORM_AGREEMENT_RTOL {
        return Err(Error::OracleMismatch(format!(
            "c_{{{k},{n}}} for a = {a}: beta form {beta:e}, gamma form {gamma:e}"
        )));
    }
    Ok(beta)
}

/// All coefficients `c_{0,n}, …, c_{n,n}`.
pub fn approximant_coeffs_hardy(a: u32, n: usize) -> Result<Vec<f64>> {
    (0..=n).map(|k| approximant_coeff_hardy(a, k, n)).collect()
}

fn log_approximant_at_zero(a: u32, n: usize) -> Result<f64> {
    if a < 1 {
        return Err(Error::InvalidArgument("the exponent a must be at least 1".into()));
    }
    // the gamma ratio telescopes to Π_{s<a} (n+1+s)/(n+a+1+s)
    let (af, nf) = (a as f64, n as f64);
    Ok((0..a)
        .map(|s| (-af / (nf + af + 1.0 + s as f64)).ln_1p())
        .sum())
}

/// `p_n(0) = Γ(n+a+1)² / (Γ(n+1) Γ(n+2a+1))`, evaluated as a finite product
/// in log space.
pub fn approximant_at_zero(a: u32, n: usize) -> Result<f64> {
    Ok(log_approximant_at_zero(a, n)?.exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DistanceAsymptotic {
    /// `1 − p_n(0)`.
    pub exact: f64,
    /// `a² / (n+a+1)`.
    pub asymptotic: f64,
    pub ratio: f64,
}

pub fn distance_asymptotic(a: u32, n: usize) -> Result<DistanceAsymptotic> {
    // 1 − e^{L} without cancellation
    let exact = -log_approximant_at_zero(a, n)?.exp_m1();
    let af = a as f64;
    let asymptotic = af * af / (n as f64 + af + 1.0);
    Ok(DistanceAsymptotic { exact, asymptotic, ratio: exact / asymptotic })
}

/// Zeros `−1 ± i √(2/a)` of the degree-2 approximant.
pub fn quadratic_zeros(a: f64) -> Result<[Complex64; 2]> {
    if !a.is_finite() || a <= 0.0 {
        return Err(Error::InvalidArgument(format!("the exponent a must be positive, got {a}")));
    }
    let h = (2.0 / a).sqrt();
    Ok([Complex64::new(-1.0, h), Complex64::new(-1.0, -h)])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZeroGeometryConstants {
    /// `2 √(2/a)`
    pub pair_distance: f64,
    /// `√(4 + 2/a)`
    pub distance_to_one: f64,
    /// `√(1 + 2/a)`
    pub modulus: f64,
}

pub fn zero_geometry_constants(a: f64) -> Result<ZeroGeometryConstants> {
    if !a.is_finite() || a <= 0.0 {
        return Err(Error::InvalidArgument(format!("the exponent a must be positive, got {a}")));
    }
    Ok(ZeroGeometryConstants {
        pair_distance: 2.0 * (2.0 / a).sqrt(),
        distance_to_one: (4.0 + 2.0 / a).sqrt(),
        modulus: (1.0 + 2.0 / a).sqrt(),
    })
}

/// Relative residual of the closed-form coefficients in the degree-`n`
/// Hardy-space normal equations for `(1 − z)^a`.
pub fn normal_equation_residual(a: u32, n: usize) -> Result<f64> {
    let f = materialize(&FunctionSpec::one_minus_z_pow(a as f64))?;
    let system = build_system(&f, n, SpaceParam::HARDY)?;
    let x: Vec<Complex64> = approximant_coeffs_hardy(a, n)?.into_iter().map(Complex64::from).collect();
    let r = residual(&system.matrix, &x, &system.rhs);
    let scale = system.matrix.max_abs() * inf_norm(&x) + inf_norm(&system.rhs);
    Ok(inf_norm(&r) / scale)
}
