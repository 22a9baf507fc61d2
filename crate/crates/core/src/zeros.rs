//! Zeros of optimal approximants.
//!
//! Roots are found by Aberth–Ehrlich simultaneous iteration followed by a
//! Newton polish. Every zero `z₀` of an optimal approximant in `D_α`
//! satisfies `|z₀| > min(1, 2^{α/2})`; [`check_zero_bound`] turns that into
//! a report.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::approx::optimal_approximant;
use crate::error::{Error, Result};
use crate::series::{horner, inner_product, materialize, norm_sq, FunctionSpec, SpaceParam, TaylorSeries1D};

pub const MAX_ITERATIONS: usize = 200;
/// Roots closer than this (relative) are counted as one with multiplicity.
pub const MULTIPLICITY_RTOL: f64 = 1e-7;
/// Slack allowed below the zero-location bound.
pub const BOUND_SLACK: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Roots of a polynomial, with multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub converged: bool,
    pub iterations: usize,
}

/// All roots of `p`, counted with multiplicity.
///
/// Degrees one and two are solved in closed form. Non-convergence is not an
/// error: the best iterate is returned with `converged == false`.
pub fn find_roots(p: &TaylorSeries1D) -> Result<RootSet> {
    find_roots_near(p, &[])
}

/// As [`find_roots`], starting Aberth iteration from `guess` (typically the
/// roots of a nearby polynomial). Missing starting points are filled in on
/// the default circle; a guess of the wrong size is ignored.
pub fn find_roots_near(p: &TaylorSeries1D, guess: &[Complex64]) -> Result<RootSet> {
    let degree = p.effective_degree().ok_or(Error::ConstantPolynomial)?;
    if degree == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let coeffs = &p.coeffs()[..=degree];
    // roots at the origin
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let low = coeffs
        .iter()
        .position(|c| c.norm() > crate::series::EFFECTIVE_DEGREE_RTOL * scale)
        .unwrap_or(0);
    let mut roots = vec![ZERO; low];
    let reduced = &coeffs[low..];
    let (rest, converged, iterations) = match reduced.len() - 1 {
        0 => (Vec::new(), true, 0),
        1 => (vec![-reduced[0] / reduced[1]], true, 0),
        2 => (quadratic(reduced[0], reduced[1], reduced[2]).to_vec(), true, 0),
        _ => aberth(reduced, guess),
    };
    roots.extend(rest);
    log::debug!("degree {degree}: {iterations} Aberth iterations");
    if !converged {
        log::warn!("root finder did not converge after {iterations} iterations (degree {degree})");
    }
    Ok(RootSet { roots, converged, iterations })
}

/// Roots of `c2 z² + c1 z + c0` without cancellation.
fn quadratic(c0: Complex64, c1: Complex64, c2: Complex64) -> [Complex64; 2] {
    let disc = (c1 * c1 - 4.0 * c2 * c0).sqrt();
    let plus = c1 + disc;
    let minus = c1 - disc;
    let q = -0.5 * if plus.norm() >= minus.norm() { plus } else { minus };
    if q == ZERO {
        return [ZERO, ZERO];
    }
    [q / c2, c0 / q]
}

/// Horner evaluation of `Σ c_k z^k` and its derivative, with a running
/// bound on the rounding error.
fn horner_with_derivative<'a>(
    coeffs: impl DoubleEndedIterator<Item = &'a Complex64> + ExactSizeIterator,
    z: Complex64,
) -> (Complex64, Complex64, f64) {
    let steps = coeffs.len() as f64;
    let mut p = ZERO;
    let mut dp = ZERO;
    let mut bound = 0.0;
    let r = z.norm();
    for c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
        bound = bound * r + c.norm();
    }
    (p, dp, 2.0 * steps * bound * f64::EPSILON)
}

/// Newton correction `p(z)/p'(z)` and whether `p(z)` is below rounding
/// level. Outside the unit disk the reversed polynomial is evaluated at `1/z`.
fn newton_correction(coeffs: &[Complex64], z: Complex64) -> (Complex64, bool) {
    if z.norm() <= 1.0 {
        let (p, dp, err) = horner_with_derivative(coeffs.iter().rev(), z);
        (p / dp, p.norm() <= err)
    } else {
        let n = (coeffs.len() - 1) as f64;
        let w = z.inv();
        let (q, dq, err) = horner_with_derivative(coeffs.iter(), w);
        (z / (n - w * dq / q), q.norm() <= err)
    }
}

fn aberth(coeffs: &[Complex64], guess: &[Complex64]) -> (Vec<Complex64>, bool, usize) {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    // start on a circle whose radius is the geometric mean of the root moduli
    let radius = (coeffs[0] / lead).norm().powf(1.0 / n as f64);
    let center = -coeffs[n - 1] / (lead * n as f64);
    let center = if center.norm() < radius { center } else { ZERO };
    let circle = |k: usize, m: usize| center + Complex64::from_polar(radius, 2.0 * PI * k as f64 / m as f64 + 0.4);
    let usable = guess.len() <= n && guess.len() + 2 >= n && guess.iter().all(|g| g.re.is_finite() && g.im.is_finite());
    let mut z: Vec<Complex64> = if usable {
        let missing = n - guess.len();
        guess.iter().copied().chain((0..missing).map(|k| circle(2 * k + 1, 2 * missing))).collect()
    } else {
        (0..n).map(|k| circle(k, n)).collect()
    };
    let mut done = vec![false; n];
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS && done.iter().any(|d| !d) {
        iterations += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (ratio, small) = newton_correction(coeffs, z[i]);
            if small {
                done[i] = true;
                continue;
            }
            let zi = z[i];
            let repulsion: Complex64 = z
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, zj)| (zi - zj).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !(step.re.is_finite() && step.im.is_finite()) {
                continue;
            }
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[i].norm() {
                done[i] = true;
            }
        }
    }
    let converged = done.iter().all(|&d| d);
    // one Newton polish per root
    for zi in z.iter_mut() {
        let (step, _) = newton_correction(coeffs, *zi);
        if step.re.is_finite() && step.im.is_finite() && step.norm() < 1e-6 * zi.norm().max(1.0) {
            *zi -= step;
        }
    }
    (z, converged, iterations)
}

/// Groups roots closer than [`MULTIPLICITY_RTOL`] (relative to their size).
pub fn cluster_multiplicities(roots: &[Complex64]) -> Vec<(Complex64, usize)> {
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for &z in roots {
        let tol = MULTIPLICITY_RTOL * z.norm().max(1.0);
        match clusters.iter_mut().find(|(c, _)| (*c - z).norm() <= tol) {
            Some((c, m)) => {
                *c = (*c * *m as f64 + z) / (*m as f64 + 1.0);
                *m += 1;
            }
            None => clusters.push((z, 1)),
        }
    }
    clusters
}

/// Largest `|p(z_i)|` scaled as in the root-residual invariant:
/// `|p(z_i)| / (max|c_k| (1+|z_i|)^deg)`.
pub fn root_residual(p: &TaylorSeries1D, roots: &[Complex64]) -> f64 {
    let scale = p.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    let deg = roots.len() as i32;
    roots
        .iter()
        .map(|z| horner(p.coeffs(), *z).norm() / (scale * (1.0 + z.norm()).powi(deg)))
        .fold(0.0, f64::max)
}

/// The zero of the degree-one approximant, `‖zf‖² / ⟨f, zf⟩`.
pub fn degree_one_zero(f: &TaylorSeries1D, s: SpaceParam) -> Result<Complex64> {
    let f = f.as_polynomial();
    let zf = f.shift(1);
    let num = norm_sq(&zf, s);
    let den = inner_product(&f, &zf, s);
    if num == 0.0 {
        return Err(Error::ZeroFunction);
    }
    if den.norm() <= 1e-14 * (norm_sq(&f, s) * num).sqrt() {
        return Err(Error::NoDegreeOneZero);
    }
    Ok(num / den)
}

/// Distances describing where the zeros sit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroGeometry {
    /// `|z_i − z_j|` for `i < j`, in index order.
    pub pairwise_distances: Vec<f64>,
    pub reference_points: Vec<Complex64>,
    /// Row `i` holds the distances from zero `i` to each reference point.
    pub distances_to_reference_points: Vec<Vec<f64>>,
    pub moduli: Vec<f64>,
}

impl ZeroGeometry {
    pub fn new(zeros: &[Complex64], reference_points: Vec<Complex64>) -> Self {
        let mut pairwise_distances = Vec::new();
        for i in 0..zeros.len() {
            for j in i + 1..zeros.len() {
                pairwise_distances.push((zeros[i] - zeros[j]).norm());
            }
        }
        ZeroGeometry {
            pairwise_distances,
            distances_to_reference_points: zeros
                .iter()
                .map(|z| reference_points.iter().map(|r| (z - r).norm()).collect())
                .collect(),
            moduli: zeros.iter().map(|z| z.norm()).collect(),
            reference_points,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroReport {
    pub zeros: Vec<Complex64>,
    pub min_modulus: f64,
    pub bound: f64,
    pub bound_satisfied: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometry: Option<ZeroGeometry>,
}

impl ZeroReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    /// Plot-ready rows `re, im, modulus`.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["re", "im", "modulus"])?;
        for z in &self.zeros {
            w.write_record([z.re.to_string(), z.im.to_string(), z.norm().to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `min(1, 2^{α/2})`.
pub fn zero_bound(s: SpaceParam) -> f64 {
    2f64.powf(s.alpha() / 2.0).min(1.0)
}

/// Compares the zeros of an optimal approximant with the location bound.
///
/// Violations are reported (and logged), never dropped.
pub fn check_zero_bound(zeros: &[Complex64], s: SpaceParam) -> ZeroReport {
    let bound = zero_bound(s);
    let min_modulus = zeros.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    let bound_satisfied = min_modulus > bound - BOUND_SLACK;
    if !bound_satisfied {
        log::warn!("zero of modulus {min_modulus} inside the bound {bound} (alpha = {})", s.alpha());
    }
    ZeroReport {
        zeros: zeros.to_vec(),
        min_modulus,
        bound,
        bound_satisfied,
        geometry: None,
    }
}

/// Zeros of the degree-`n` approximant for
/// `f = (1−z)^β [(z − e^{iθ})(z − e^{−iθ})]^γ` with their geometry relative
/// to `1, e^{iθ}, e^{−iθ}`.
pub fn family_report(
    beta: f64,
    gamma: f64,
    theta: f64,
    s: SpaceParam,
    n: usize,
    truncation: Option<usize>,
) -> Result<ZeroReport> {
    let mut spec = FunctionSpec::family(beta, gamma, theta);
    spec.truncation = truncation;
    let f = materialize(&spec)?;
    let approx = optimal_approximant(&f, n, s)?;
    let zeros = match approx.effective_degree {
        Some(d) if d > 0 => find_roots(&approx.p)?.roots,
        _ => Vec::new(),
    };
    let reference = vec![
        Complex64::new(1.0, 0.0),
        Complex64::from_polar(1.0, theta),
        Complex64::from_polar(1.0, -theta),
    ];
    let mut report = check_zero_bound(&zeros, s);
    report.geometry = Some(ZeroGeometry::new(&zeros, reference));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(v: &[f64]) -> TaylorSeries1D {
        TaylorSeries1D::from_real(v).unwrap()
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        let key = |z: &Complex64| ((z.im * 1e9).round(), (z.re * 1e9).round());
        v.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        v
    }

    fn assert_roots(got: Vec<Complex64>, want: &[Complex64], tol: f64) {
        let got = sorted(got);
        let want = sorted(want.to_vec());
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() <= tol, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn find_roots_examples() {
        let r = 2f64.sqrt();
        assert_roots(
            find_roots(&series(&[3.0, 2.0, 1.0])).unwrap().roots,
            &[Complex64::new(-1.0, r), Complex64::new(-1.0, -r)],
            1e-15,
        );
        assert_roots(find_roots(&series(&[-1.0, 1.0])).unwrap().roots, &[Complex64::new(1.0, 0.0)], 0.0);
        assert_roots(
            find_roots(&series(&[2.0, 2.0, 1.0])).unwrap().roots,
            &[Complex64::new(-1.0, 1.0), Complex64::new(-1.0, -1.0)],
            1e-15,
        );
    }

    #[test]
    fn find_roots_rejects_constants() {
        assert!(matches!(find_roots(&series(&[2.0, 0.0])), Err(Error::ConstantPolynomial)));
        assert!(matches!(find_roots(&series(&[0.0])), Err(Error::ConstantPolynomial)));
    }

    #[test]
    fn aberth_on_known_roots() {
        // (z−1)(z−2)(z−3)(z+1)(z−i)
        let roots = [1.0, 2.0, 3.0, -1.0].map(|r| Complex64::new(r, 0.0));
        let mut all = roots.to_vec();
        all.push(Complex64::new(0.0, 1.0));
        let mut p = TaylorSeries1D::one();
        for r in &all {
            p = crate::series::multiply(&p, &TaylorSeries1D::new(vec![-r, Complex64::new(1.0, 0.0)]).unwrap());
        }
        let found = find_roots(&p).unwrap();
        assert!(found.converged);
        assert!(root_residual(&p, &found.roots) < 1e-14);
        assert_roots(found.roots, &all, 1e-12);
    }

    #[test]
    fn roots_at_origin_are_deflated() {
        let found = find_roots(&series(&[0.0, 0.0, 1.0, 1.0, 1.0])).unwrap();
        assert_eq!(found.roots.iter().filter(|z| z.norm() == 0.0).count(), 2);
        assert_eq!(found.roots.len(), 4);
    }

    #[test]
    fn multiplicity_clustering() {
        let z = Complex64::new(1.5, 0.0);
        let c = cluster_multiplicities(&[z, z + 1e-9, Complex64::new(-2.0, 0.0)]);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].1, 2);
    }

    #[test]
    fn degree_one_zero_examples() {
        let f = series(&[1.0, -1.0]);
        assert!((degree_one_zero(&f, SpaceParam::HARDY).unwrap() - Complex64::new(-2.0, 0.0)).norm() < 1e-15);
        assert!(matches!(degree_one_zero(&series(&[1.0]), SpaceParam::HARDY), Err(Error::NoDegreeOneZero)));
        let z = degree_one_zero(&f, SpaceParam::BERGMAN).unwrap();
        assert!((z - Complex64::new(-5.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!(z.norm() > zero_bound(SpaceParam::BERGMAN));
    }

    #[test]
    fn zero_bound_examples() {
        let r3 = 3f64.sqrt();
        let report = check_zero_bound(&[Complex64::new(-1.0, 2f64.sqrt()), Complex64::new(-1.0, -2f64.sqrt())], SpaceParam::HARDY);
        assert!((report.min_modulus - r3).abs() < 1e-15);
        assert!(report.bound_satisfied);
        assert!(check_zero_bound(&[Complex64::new(-2.0, 0.0)], SpaceParam::HARDY).bound_satisfied);
        assert_eq!(zero_bound(SpaceParam::new(-2.0).unwrap()), 0.5);
        let bad = check_zero_bound(&[Complex64::new(0.4, 0.0)], SpaceParam::new(-2.0).unwrap());
        assert!(!bad.bound_satisfied);
    }

    #[test]
    fn family_report_examples() {
        let a: f64 = 3.0;
        let r = family_report(a, 0.0, 1.0, SpaceParam::HARDY, 2, None).unwrap();
        let g = r.geometry.as_ref().unwrap();
        assert!((g.pairwise_distances[0] - 2.0 * (2.0 / a).sqrt()).abs() < 1e-9);
        for row in &g.distances_to_reference_points {
            assert!((row[0] - (4.0 + 2.0 / a).sqrt()).abs() < 1e-9);
        }
        for m in &g.moduli {
            assert!((m - (1.0 + 2.0 / a).sqrt()).abs() < 1e-9);
        }

        let trivial = family_report(0.0, 0.0, 1.0, SpaceParam::HARDY, 3, None).unwrap();
        assert!(trivial.zeros.is_empty());
        assert!(trivial.bound_satisfied);

        let r = family_report(1.0, 1.0, PI, SpaceParam::HARDY, 2, None).unwrap();
        assert_eq!(r.zeros.len(), 2);
        assert!(r.zeros.iter().all(|z| z.norm() > 1.0));
    }

    #[test]
    fn report_json_and_csv() {
        let r = check_zero_bound(&[Complex64::new(-2.0, 0.0)], SpaceParam::HARDY);
        assert_eq!(
            r.to_json().unwrap(),
            r#"{"zeros":[[-2.0,0.0]],"min_modulus":2.0,"bound":1.0,"bound_satisfied":true}"#
        );
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "re,im,modulus\n-2,0,2\n");
    }
}
