//! Optimal approximants, distances and cyclicity diagnostics.
//!
//! `p*_n f` is the orthogonal projection of `1` onto `P_n f`, hence
//! `‖p*_n f − 1‖² = 1 − p*_n(0) f(0)`. Every approximant computes its
//! distance both by direct expansion and through that identity and refuses
//! to return when they disagree.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gram::build_system;
use crate::series::{multiply, norm_sq, SpaceParam, TaylorSeries1D};
use crate::solve::{solve, solve_prefixes, SolveReport, SolverChoice, SolverKind};
use crate::zeros::find_roots_near;

/// Largest tolerated gap between the two distance computations.
pub const DISTANCE_MISMATCH_ABORT: f64 = 1e-8;

/// Solver diagnostics carried by an approximant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveSummary {
    pub solver: SolverKind,
    pub residual_inf: f64,
    pub cond_estimate: f64,
    pub refined: bool,
    pub fallback: bool,
    pub warnings: Vec<String>,
}

impl SolveSummary {
    pub(crate) fn split(report: SolveReport) -> (Vec<Complex64>, SolveSummary) {
        let summary = SolveSummary {
            solver: report.solver,
            residual_inf: report.residual_inf,
            cond_estimate: report.cond_estimate,
            refined: report.refined,
            fallback: report.fallback,
            warnings: report.warnings,
        };
        (report.coeffs, summary)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimalApproximant {
    /// The polynomial `p*_n`.
    pub p: TaylorSeries1D,
    pub n: usize,
    pub effective_degree: Option<usize>,
    /// `‖p f − 1‖²` by direct expansion.
    pub dist_sq: f64,
    /// `1 − Re(p(0) f(0))`.
    pub dist_sq_formula: f64,
    /// `Im(p(0) f(0))`, zero up to roundoff.
    pub formula_imag: f64,
    /// `max_j |⟨p f − 1, z^j f⟩|`.
    pub orthogonality_residual: f64,
    pub solve: SolveSummary,
    pub alpha: SpaceParam,
}

#[derive(Serialize)]
struct ApproximantJson<'a> {
    alpha: f64,
    n: usize,
    coeffs: &'a [Complex64],
    dist_sq: f64,
    dist_sq_formula: f64,
    solver: &'static str,
    residual_inf: f64,
}

impl OptimalApproximant {
    pub fn coeffs(&self) -> &[Complex64] {
        self.p.coeffs()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&ApproximantJson {
            alpha: self.alpha.alpha(),
            n: self.n,
            coeffs: self.p.coeffs(),
            dist_sq: self.dist_sq,
            dist_sq_formula: self.dist_sq_formula,
            solver: self.solve.solver.as_str(),
            residual_inf: self.solve.residual_inf,
        })?)
    }
}

pub fn optimal_approximant(f: &TaylorSeries1D, n: usize, s: SpaceParam) -> Result<OptimalApproximant> {
    optimal_approximant_with(f, n, s, SolverChoice::Auto)
}

pub fn optimal_approximant_with(
    f: &TaylorSeries1D,
    n: usize,
    s: SpaceParam,
    choice: SolverChoice,
) -> Result<OptimalApproximant> {
    // downstream quantities are exact for the (possibly truncated) polynomial
    let f = f.as_polynomial();
    let system = build_system(&f, n, s)?;
    let report = solve(&system, choice)?;
    let (coeffs, summary) = SolveSummary::split(report);
    let p = TaylorSeries1D::new(coeffs)?;

    let residual = multiply(&p, &f).sub(&TaylorSeries1D::one());
    let dist_sq = norm_sq(&residual, s);
    let at_zero = p.value_at_zero() * f.value_at_zero();
    let dist_sq_formula = 1.0 - at_zero.re;
    if (dist_sq - dist_sq_formula).abs() > DISTANCE_MISMATCH_ABORT {
        return Err(Error::DistanceMismatch {
            direct: dist_sq,
            formula: dist_sq_formula,
            cond: summary.cond_estimate,
        });
    }
    let orthogonality_residual = (0..=n)
        .map(|j| crate::series::inner_product(&residual, &f.shift(j), s).norm())
        .fold(0.0, f64::max);

    Ok(OptimalApproximant {
        effective_degree: p.effective_degree(),
        p,
        n,
        dist_sq,
        dist_sq_formula,
        formula_imag: at_zero.im,
        orthogonality_residual,
        solve: summary,
        alpha: s,
    })
}

/// `‖p*_m f − 1‖²` for `m = 0..=n_max`, from a single assembled system.
pub fn distance_profile(f: &TaylorSeries1D, n_max: usize, s: SpaceParam) -> Result<Vec<(usize, f64)>> {
    Ok(approximant_prefixes(f, n_max, s)?
        .iter()
        .enumerate()
        .map(|(m, c)| (m, 1.0 - (c[0] * f.value_at_zero()).re))
        .collect())
}

fn approximant_prefixes(f: &TaylorSeries1D, n_max: usize, s: SpaceParam) -> Result<Vec<Vec<Complex64>>> {
    let system = build_system(&f.as_polynomial(), n_max, s)?;
    Ok(solve_prefixes(&system, SolverChoice::Auto)?.1)
}

/// Least-squares fit `dist_sq ≈ prefactor · n^exponent` in log-log scale.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub n_from: usize,
    pub n_to: usize,
}

/// Fits `y ≈ C n^e` over the points with `n ≥ 1` and `y > 0`.
pub fn fit_power_law(points: &[(usize, f64)]) -> Option<PowerFit> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(n, y)| *n >= 1 && *y > 0.0)
        .map(|&(n, y)| ((n as f64).ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let exponent = sxy / sxx;
    let used: Vec<usize> = points.iter().filter(|(n, y)| *n >= 1 && *y > 0.0).map(|p| p.0).collect();
    Some(PowerFit {
        exponent,
        prefactor: (my - exponent * mx).exp(),
        n_from: used[0],
        n_to: used[used.len() - 1],
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CyclicityReport {
    pub alpha: f64,
    /// Set when `f(0) = 0`: point evaluation at the origin is a bounded
    /// functional killing every `p f`, so `f` cannot be cyclic.
    pub non_cyclic: bool,
    pub p_at_zero: Vec<Complex64>,
    pub dist_sq: Vec<f64>,
    /// Decay fit over the upper half of the degree range.
    pub fit: Option<PowerFit>,
}

impl CyclicityReport {
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "p0_re", "p0_im", "dist_sq"])?;
        for (n, (p0, d)) in self.p_at_zero.iter().zip(&self.dist_sq).enumerate() {
            w.write_record([n.to_string(), p0.re.to_string(), p0.im.to_string(), d.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Tracks `p*_n(0)` and `‖p*_n f − 1‖²` for `n = 0..=n_max`.
pub fn cyclicity_report(f: &TaylorSeries1D, s: SpaceParam, n_max: usize) -> Result<CyclicityReport> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    if f.value_at_zero() == Complex64::new(0.0, 0.0) {
        return Ok(CyclicityReport {
            alpha: s.alpha(),
            non_cyclic: true,
            p_at_zero: Vec::new(),
            dist_sq: Vec::new(),
            fit: None,
        });
    }
    let prefixes = approximant_prefixes(f, n_max, s)?;
    let p_at_zero: Vec<Complex64> = prefixes.iter().map(|c| c[0]).collect();
    let dist_sq: Vec<f64> = p_at_zero.iter().map(|p0| 1.0 - (p0 * f.value_at_zero()).re).collect();
    let upper: Vec<(usize, f64)> = dist_sq
        .iter()
        .copied()
        .enumerate()
        .skip(n_max.div_ceil(2))
        .collect();
    Ok(CyclicityReport {
        alpha: s.alpha(),
        non_cyclic: false,
        fit: fit_power_law(&upper),
        p_at_zero,
        dist_sq,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TelescopeStep {
    pub n: usize,
    /// Zeros of `p*_n`, counted with multiplicity.
    pub zero_count: usize,
    /// `1 − Π |z_k|^{−2}` from the computed zeros; `None` when `p*_n` is
    /// constant.
    pub factor: Option<f64>,
    /// The same factor from the coefficients, `1 − |c_deg / c_0|²`.
    pub factor_from_coeffs: Option<f64>,
    /// Running product from `n = 1`; `None` once a degenerate factor occurs.
    pub partial_product: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TelescopeReport {
    pub steps: Vec<TelescopeStep>,
    /// `conj(f(0)) / ‖f‖²`, the limit for cyclic `f`.
    pub target: Complex64,
    /// Degrees whose approximant has no zeros.
    pub degenerate: Vec<usize>,
    pub roots_converged: bool,
}

impl TelescopeReport {
    pub fn final_product(&self) -> Option<f64> {
        self.steps.last().and_then(|s| s.partial_product)
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "zeros", "factor", "partial_product", "target"])?;
        for s in &self.steps {
            w.write_record([
                s.n.to_string(),
                s.zero_count.to_string(),
                opt(s.factor),
                opt(s.partial_product),
                self.target.re.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Partial products of `1 − Π_{z ∈ Z(p*_n)} |z|^{−2}` over `n = 1..=n_max`
/// in the Hardy space.
///
/// The product starts at `n = 1`: `p*_0` is a nonzero constant whose empty
/// zero set would make the first factor vanish.
pub fn telescoping_product(f: &TaylorSeries1D, n_max: usize) -> Result<TelescopeReport> {
    let s = SpaceParam::HARDY;
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let f0 = f.value_at_zero();
    if f0 == Complex64::new(0.0, 0.0) {
        return Err(Error::VanishesAtOrigin);
    }
    let target = f0.conj() / norm_sq(&f.as_polynomial(), s);
    let prefixes = approximant_prefixes(f, n_max, s)?;
    let mut steps = Vec::with_capacity(n_max);
    let mut degenerate = Vec::new();
    let mut product = Some(1.0);
    let mut roots_converged = true;
    let mut previous: Vec<Complex64> = Vec::new();
    for (n, coeffs) in prefixes.into_iter().enumerate().skip(1) {
        let p = TaylorSeries1D::new(coeffs)?;
        let (zero_count, factor, factor_from_coeffs) = match p.effective_degree() {
            Some(d) if d > 0 => {
                let roots = find_roots_near(&p, &previous)?;
                roots_converged &= roots.converged;
                previous.clone_from(&roots.roots);
                let log_mod: f64 = roots.roots.iter().map(|z| z.norm().ln()).sum();
                let from_coeffs = 1.0 - (p.coeff(d) / p.coeff(0)).norm_sqr();
                (roots.roots.len(), Some(-(-2.0 * log_mod).exp_m1()), Some(from_coeffs))
            }
            _ => (0, None, None),
        };
        if factor.is_none() {
            degenerate.push(n);
        }
        product = product.zip(factor).map(|(acc, x)| acc * x);
        steps.push(TelescopeStep { n, zero_count, factor, factor_from_coeffs, partial_product: product });
    }
    Ok(TelescopeReport { steps, target, degenerate, roots_converged })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(v: &[f64]) -> TaylorSeries1D {
        TaylorSeries1D::from_real(v).unwrap()
    }

    fn close(got: &[Complex64], want: &[f64], tol: f64) {
        for (g, w) in got.iter().zip(want) {
            assert!((g - Complex64::new(*w, 0.0)).norm() <= tol, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn approximant_examples() {
        let a = optimal_approximant(&series(&[1.0, -1.0]), 2, SpaceParam::HARDY).unwrap();
        close(a.coeffs(), &[0.75, 0.5, 0.25], 1e-15);
        assert!((a.dist_sq - 0.25).abs() < 1e-15);
        assert!((a.dist_sq_formula - 0.25).abs() < 1e-15);
        assert_eq!(a.solve.solver, SolverKind::Levinson);

        let a = optimal_approximant(&series(&[2.0]), 0, SpaceParam::new(0.3).unwrap()).unwrap();
        close(a.coeffs(), &[0.5], 0.0);
        assert_eq!(a.dist_sq, 0.0);

        let a = optimal_approximant(&series(&[1.0, -2.0, 1.0]), 2, SpaceParam::HARDY).unwrap();
        close(a.coeffs(), &[0.4, 0.4, 0.2], 1e-15);
        assert!((a.dist_sq - 0.6).abs() < 1e-15);
    }

    #[test]
    fn approximant_rejects_zero() {
        assert!(matches!(optimal_approximant(&series(&[0.0]), 3, SpaceParam::HARDY), Err(Error::ZeroFunction)));
    }

    #[test]
    fn approximant_json_schema() {
        let a = optimal_approximant(&series(&[2.0]), 0, SpaceParam::HARDY).unwrap();
        let v: serde_json::Value = serde_json::from_str(&a.to_json().unwrap()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["alpha", "coeffs", "dist_sq", "dist_sq_formula", "n", "residual_inf", "solver"]);
        assert_eq!(v["coeffs"], serde_json::json!([[0.5, 0.0]]));
        assert_eq!(v["solver"], "levinson");
    }

    #[test]
    fn profile_examples() {
        let p = distance_profile(&series(&[1.0, -1.0]), 3, SpaceParam::HARDY).unwrap();
        for (n, d) in p {
            assert!((d - 1.0 / (n as f64 + 2.0)).abs() < 1e-15);
        }
        let p = distance_profile(&series(&[1.0]), 4, SpaceParam::DIRICHLET).unwrap();
        assert!(p.iter().all(|(_, d)| d.abs() < 1e-15));
        let p = distance_profile(&series(&[1.0, -2.0, 1.0]), 2, SpaceParam::HARDY).unwrap();
        assert!((p[2].1 - 0.6).abs() < 1e-15);
    }

    #[test]
    fn cyclicity_examples() {
        let r = cyclicity_report(&series(&[1.0, -1.0]), SpaceParam::HARDY, 200).unwrap();
        let fit = r.fit.unwrap();
        assert!((fit.exponent + 1.0).abs() <= 0.1, "{fit:?}");
        assert!(!r.non_cyclic);

        let r = cyclicity_report(&series(&[0.0, 1.0]), SpaceParam::DIRICHLET, 10).unwrap();
        assert!(r.non_cyclic);
        assert!(r.dist_sq.is_empty());
    }

    #[test]
    fn power_law_fit_recovers_exponent() {
        let pts: Vec<(usize, f64)> = (1..50).map(|n| (n, 3.0 * (n as f64).powf(-1.5))).collect();
        let fit = fit_power_law(&pts).unwrap();
        assert!((fit.exponent + 1.5).abs() < 1e-12);
        assert!((fit.prefactor - 3.0).abs() < 1e-10);
        assert!(fit_power_law(&[(3, 0.0), (4, 0.0)]).is_none());
    }

    #[test]
    fn telescope_examples() {
        let r = telescoping_product(&series(&[1.0, -1.0]), 10).unwrap();
        assert!((r.final_product().unwrap() - 6.0 / 11.0).abs() < 1e-12);
        assert!((r.target - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!(r.degenerate.is_empty());
        for s in &r.steps {
            let n = s.n as f64;
            assert!((s.factor.unwrap() - n * (n + 2.0) / (n + 1.0).powi(2)).abs() < 1e-12);
            assert!((s.factor.unwrap() - s.factor_from_coeffs.unwrap()).abs() < 1e-12);
        }

        let r = telescoping_product(&series(&[2.0]), 5).unwrap();
        assert_eq!(r.degenerate, vec![1, 2, 3, 4, 5]);
        assert_eq!(r.final_product(), None);

        assert!(matches!(telescoping_product(&series(&[0.0, 1.0]), 3), Err(Error::VanishesAtOrigin)));
    }

    #[test]
    fn telescope_csv_ends_with_product() {
        let r = telescoping_product(&series(&[1.0, -1.0]), 10).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let last = text.lines().last().unwrap();
        let cols: Vec<&str> = last.split(',').collect();
        assert_eq!(cols[0], "10");
        assert!((cols[3].parse::<f64>().unwrap() - 6.0 / 11.0).abs() < 1e-12);
        assert_eq!(cols[4], "0.5");
    }
}
