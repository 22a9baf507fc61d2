//! Lower bounds for the Bergman-space extremal quotient
//! `sup |⟨g, z g⟩| / ‖z g‖²` over polynomials `g` of degree at most `N`.
//!
//! Writing `g = Σ c_j z^j`, the numerator is `Σ_{k≥1} c_k c̄_{k−1} / (k+1)` and
//! the denominator `Σ_k |c_k|² / (k+2)`. The numerator's coefficients are
//! nonnegative, so replacing `c_k` by `|c_k|` never lowers the quotient and the
//! search reduces to real nonnegative vectors: the largest eigenvalue of the
//! pencil `(S, D)` with `S` symmetric bidiagonal and `D` diagonal.
//!
//! After the symmetric scaling `B = D^{-1/2} S D^{-1/2}` the problem is a
//! zero-diagonal tridiagonal eigenproblem. The top eigenvalue is bracketed by
//! Sturm-sequence bisection and the eigenvector recovered by shifted inverse
//! iteration, which stays accurate when the spectral gap shrinks like `1/N²`.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{inner_product, norm_sq, SpaceParam, TaylorSeries1D};

pub const MAX_ITERATIONS: usize = 100_000;
pub const EIGENVALUE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremalResult {
    #[serde(rename = "N")]
    pub degree: usize,
    pub lambda: f64,
    /// Real nonnegative coefficients with `Σ c_k² / (k+2) = 1`.
    pub maximizer: Vec<f64>,
    pub iterations: usize,
    /// `‖S c − λ D c‖_∞ / ‖D c‖_∞`.
    pub residual: f64,
}

fn diag(k: usize) -> f64 {
    1.0 / (k as f64 + 2.0)
}

fn off_diag(k: usize) -> f64 {
    0.5 / (k as f64 + 2.0)
}

/// Off-diagonal of the scaled tridiagonal matrix, `√((k+3)/(k+2)) / 2`.
fn scaled_off_diag(degree: usize) -> Vec<f64> {
    (0..degree)
        .map(|k| ((k as f64 + 3.0) / (k as f64 + 2.0)).sqrt() / 2.0)
        .collect()
}

/// Number of eigenvalues below `x` of the zero-diagonal tridiagonal matrix.
fn count_below(e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = -x;
    if q < 0.0 {
        count += 1;
    }
    for &ei in e {
        let prev = if q == 0.0 { f64::MIN_POSITIVE } else { q };
        q = -x - ei * ei / prev;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Returns the largest eigenvalue and the number of bisection steps.
fn top_eigenvalue(e: &[f64]) -> (f64, usize) {
    let dim = e.len() + 1;
    let mut hi = (0..dim)
        .map(|i| {
            let left = if i > 0 { e[i - 1] } else { 0.0 };
            let right = e.get(i).copied().unwrap_or(0.0);
            left + right
        })
        .fold(0.0, f64::max);
    let mut lo = 0.0;
    let mut steps = 0;
    while hi - lo > f64::EPSILON * hi && steps < 200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(e, mid) == dim {
            hi = mid;
        } else {
            lo = mid;
        }
        steps += 1;
    }
    (0.5 * (lo + hi), steps)
}

/// Solves `(B − σ I) x = b` for the zero-diagonal tridiagonal `B`.
fn shifted_solve(e: &[f64], sigma: f64, b: &[f64]) -> Vec<f64> {
    let dim = b.len();
    let mut pivots = Vec::with_capacity(dim);
    let mut y = Vec::with_capacity(dim);
    pivots.push(-sigma);
    y.push(b[0]);
    for i in 1..dim {
        let l = e[i - 1] / pivots[i - 1];
        pivots.push(-sigma - l * e[i - 1]);
        y.push(b[i] - l * y[i - 1]);
    }
    let mut x = vec![0.0; dim];
    x[dim - 1] = y[dim - 1] / pivots[dim - 1];
    for i in (0..dim - 1).rev() {
        x[i] = (y[i] - e[i] * x[i + 1]) / pivots[i];
    }
    x
}

fn tridiag_apply(e: &[f64], x: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            let left = if i > 0 { e[i - 1] * x[i - 1] } else { 0.0 };
            let right = if i + 1 < x.len() { e[i] * x[i + 1] } else { 0.0 };
            left + right
        })
        .collect()
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
}

/// Maximizes the quotient over polynomials of degree at most `degree`.
pub fn rayleigh_lower_bound(degree: usize) -> Result<ExtremalResult> {
    if degree == 0 {
        return Ok(ExtremalResult {
            degree,
            lambda: 0.0,
            maximizer: vec![diag(0).recip().sqrt()],
            iterations: 0,
            residual: 0.0,
        });
    }
    let e = scaled_off_diag(degree);
    let (estimate, mut iterations) = top_eigenvalue(&e);
    let sigma = estimate * (1.0 + 1e-10) + f64::MIN_POSITIVE;

    let mut y = vec![1.0; degree + 1];
    normalize(&mut y);
    let mut lambda = estimate;
    let mut converged = false;
    let mut inverse_steps = 0;
    while inverse_steps < MAX_ITERATIONS {
        inverse_steps += 1;
        let mut next = shifted_solve(&e, sigma, &y);
        normalize(&mut next);
        if next[0] < 0.0 {
            next.iter_mut().for_each(|x| *x = -*x);
        }
        let change = next.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        y = next;
        let by = tridiag_apply(&e, &y);
        let rayleigh: f64 = by.iter().zip(&y).map(|(a, b)| a * b).sum();
        let settled = (rayleigh - lambda).abs() <= EIGENVALUE_TOL * rayleigh;
        lambda = rayleigh;
        if settled && change <= 1e-13 {
            converged = true;
            break;
        }
    }
    iterations += inverse_steps;
    if !converged {
        return Err(Error::NonConvergence { iterations });
    }

    let maximizer: Vec<f64> = y
        .iter()
        .enumerate()
        .map(|(k, yk)| yk.abs() / diag(k).sqrt())
        .collect();
    let residual = pencil_residual(&maximizer, lambda);
    Ok(ExtremalResult { degree, lambda, maximizer, iterations, residual })
}

fn pencil_residual(c: &[f64], lambda: f64) -> f64 {
    let n = c.len();
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for k in 0..n {
        let mut sc = 0.0;
        if k > 0 {
            sc += off_diag(k - 1) * c[k - 1];
        }
        if k + 1 < n {
            sc += off_diag(k) * c[k + 1];
        }
        let dc = diag(k) * c[k];
        worst = worst.max((sc - lambda * dc).abs());
        scale = scale.max(dc.abs());
    }
    worst / scale
}

/// `|⟨g, z g⟩| / ‖z g‖²` in the Bergman space, evaluated from inner products.
pub fn quotient(coeffs: &[f64]) -> Result<f64> {
    let g = TaylorSeries1D::from_real(coeffs)?;
    let zg = g.shift(1);
    let s = SpaceParam::BERGMAN;
    Ok(inner_product(&g, &zg, s).norm() / norm_sq(&zg, s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SweepKind {
    #[default]
    Geometric,
    Linear,
    Single,
}

impl std::str::FromStr for SweepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geometric" => Ok(Self::Geometric),
            "linear" => Ok(Self::Linear),
            "single" => Ok(Self::Single),
            other => Err(Error::InvalidArgument(format!("unknown sweep kind `{other}`"))),
        }
    }
}

/// Degrees visited by a sweep up to `max_degree`.
pub fn schedule(kind: SweepKind, max_degree: usize) -> Vec<usize> {
    let max_degree = max_degree.max(1);
    match kind {
        SweepKind::Single => vec![max_degree],
        SweepKind::Linear => (1..=max_degree).collect(),
        SweepKind::Geometric => {
            let mut out: Vec<usize> = std::iter::successors(Some(1usize), |n| n.checked_mul(2))
                .take_while(|&n| n <= max_degree)
                .collect();
            if out.last() != Some(&max_degree) {
                out.push(max_degree);
            }
            out
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub results: Vec<ExtremalResult>,
    pub best_lower_bound: f64,
    /// Smallest swept degree whose quotient exceeds 1.
    pub crossed_one_at: Option<usize>,
    /// `1 / best_lower_bound`, an upper bound for the smallest possible zero
    /// modulus of a Bergman-space optimal approximant.
    pub zero_modulus_upper_bound: f64,
}

impl SweepReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["N", "lambda", "iterations"])?;
        for r in &self.results {
            w.write_record([r.degree.to_string(), format!("{:.17e}", r.lambda), r.iterations.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn sweep(degrees: &[usize]) -> Result<SweepReport> {
    if degrees.is_empty() {
        return Err(Error::InvalidArgument("the sweep needs at least one degree".into()));
    }
    if degrees.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("sweep degrees must be strictly increasing".into()));
    }
    let results = degrees
        .iter()
        .map(|&n| rayleigh_lower_bound(n))
        .collect::<Result<Vec<_>>>()?;
    let best_lower_bound = results.iter().map(|r| r.lambda).fold(0.0, f64::max);
    let crossed_one_at = results.iter().find(|r| r.lambda > 1.0).map(|r| r.degree);
    Ok(SweepReport {
        results,
        best_lower_bound,
        crossed_one_at,
        zero_modulus_upper_bound: best_lower_bound.recip(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_one_closed_form() {
        let r = rayleigh_lower_bound(1).unwrap();
        assert!((r.lambda - 6f64.sqrt() / 4.0).abs() < 1e-14);
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn degree_zero_is_trivial() {
        let r = rayleigh_lower_bound(0).unwrap();
        assert_eq!(r.lambda, 0.0);
    }

    #[test]
    fn degree_two_matches_characteristic_polynomial() {
        // det(S − λD) = 0 with D = diag(1/2,1/3,1/4), off-diagonals 1/4, 1/6:
        // −λ³/24 + λ(1/16·1/4 + 1/36·1/2) = 0
        let want = ((1.0 / 64.0 + 1.0 / 72.0) * 24.0f64).sqrt();
        let r = rayleigh_lower_bound(2).unwrap();
        assert!((r.lambda - want).abs() < 1e-13, "{} vs {want}", r.lambda);
    }

    #[test]
    fn large_degree_values() {
        for (n, want) in [(4, 0.993329175183658), (64, 1.0606601717798212), (4096, 1.0606601717798212)] {
            let r = rayleigh_lower_bound(n).unwrap();
            assert!((r.lambda - want).abs() < 1e-12, "N={n}: {}", r.lambda);
            assert!(r.residual <= 1e-10, "N={n}: residual {:e}", r.residual);
        }
    }

    #[test]
    fn maximizer_normalized_and_nonnegative() {
        let r = rayleigh_lower_bound(30).unwrap();
        let dn: f64 = r.maximizer.iter().enumerate().map(|(k, c)| c * c * diag(k)).sum();
        assert!((dn - 1.0).abs() < 1e-12);
        assert!(r.maximizer.iter().all(|&c| c >= 0.0));
        let q = quotient(&r.maximizer).unwrap();
        assert!((q - r.lambda).abs() <= 1e-10);
    }

    #[test]
    fn sweep_is_monotone_and_bounded() {
        let report = sweep(&[1, 2, 4, 8, 16, 32, 64]).unwrap();
        assert!((report.results[0].lambda - 6f64.sqrt() / 4.0).abs() < 1e-14);
        for w in report.results.windows(2) {
            assert!(w[1].lambda >= w[0].lambda - 1e-12);
        }
        assert!(report.results.iter().all(|r| r.lambda <= 2f64.sqrt() + 1e-9));
        assert_eq!(report.crossed_one_at, Some(8));
        assert!(report.zero_modulus_upper_bound < 1.0);
        assert!(sweep(&[]).is_err());
        assert!(sweep(&[4, 2]).is_err());
    }

    #[test]
    fn schedules() {
        assert_eq!(schedule(SweepKind::Geometric, 10), vec![1, 2, 4, 8, 10]);
        assert_eq!(schedule(SweepKind::Geometric, 8), vec![1, 2, 4, 8]);
        assert_eq!(schedule(SweepKind::Linear, 3), vec![1, 2, 3]);
        assert_eq!(schedule(SweepKind::Single, 7), vec![7]);
    }

    #[test]
    fn csv_header() {
        let report = sweep(&[1, 2]).unwrap();
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("N,lambda,iterations\n1,"));
    }
}
