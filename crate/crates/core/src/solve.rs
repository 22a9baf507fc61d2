//! Solvers for the Hermitian positive definite Gram systems.
//!
//! Two routes are provided: a Cholesky factorization for any system and a
//! Levinson recursion for Toeplitz systems. Both apply one step of
//! residual-based iterative refinement and report a condition estimate.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gram::{GramSystem, Structure};
use crate::linalg::{euclid_norm, inf_norm, residual, CMatrix};

/// Condition estimates above this are noted in the report.
pub const CONDITION_NOTICE: f64 = 1e6;
/// Condition estimates above this are also logged as warnings.
pub const CONDITION_WARN: f64 = 1e12;
/// Levinson gives up when a prediction error falls below this fraction of
/// the leading moment.
pub const LEVINSON_BREAKDOWN_RTOL: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Cholesky,
    Levinson,
}

impl SolverKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverKind::Cholesky => "cholesky",
            SolverKind::Levinson => "levinson",
        }
    }
}

/// Which solver to use; `Auto` picks Levinson for Toeplitz systems.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SolverChoice {
    #[default]
    Auto,
    Cholesky,
    Levinson,
}

impl std::str::FromStr for SolverChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(SolverChoice::Auto),
            "cholesky" => Ok(SolverChoice::Cholesky),
            "levinson" => Ok(SolverChoice::Levinson),
            other => Err(Error::InvalidArgument(format!("unknown solver `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    pub coeffs: Vec<Complex64>,
    pub solver: SolverKind,
    /// `‖M c − b‖_∞` after refinement.
    pub residual_inf: f64,
    pub cond_estimate: f64,
    pub refined: bool,
    /// Set when Levinson broke down and Cholesky took over.
    pub fallback: bool,
    pub warnings: Vec<String>,
}

/// Lower-triangular Cholesky factor `L` with `A = L L^H`.
#[derive(Clone, Debug)]
pub struct Cholesky {
    l: CMatrix,
}

impl Cholesky {
    pub fn factor(a: &CMatrix) -> Result<Self> {
        let n = a.dim();
        let mut l = CMatrix::zeros(n);
        for j in 0..n {
            let mut d = a[(j, j)].re;
            for k in 0..j {
                d -= l[(j, k)].norm_sqr();
            }
            if !d.is_finite() || d <= 0.0 {
                return Err(Error::NotPositiveDefinite { index: j, value: d });
            }
            let djj = d.sqrt();
            l[(j, j)] = Complex64::new(djj, 0.0);
            for i in j + 1..n {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / djj;
            }
        }
        Ok(Cholesky { l })
    }

    pub fn dim(&self) -> usize {
        self.l.dim()
    }

    /// Diagonal of `L`.
    pub fn pivots(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.l[(i, i)].re).collect()
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        self.solve_leading(b.len(), b)
    }

    /// Solves with the leading `size × size` block, which is the factor of
    /// the leading block of `A`.
    pub fn solve_leading(&self, size: usize, b: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(b.len(), size);
        let l = &self.l;
        let mut y = b.to_vec();
        for i in 0..size {
            let mut s = y[i];
            for k in 0..i {
                s -= l[(i, k)] * y[k];
            }
            y[i] = s / l[(i, i)].re;
        }
        for i in (0..size).rev() {
            let mut s = y[i];
            for k in i + 1..size {
                s -= l[(k, i)].conj() * y[k];
            }
            y[i] = s / l[(i, i)].re;
        }
        y
    }
}

fn add_assign(x: &mut [Complex64], d: &[Complex64]) {
    for (xi, di) in x.iter_mut().zip(d) {
        *xi += di;
    }
}

/// Solves `A x = b` by Cholesky with one refinement step.
pub fn cholesky_solve_dense(a: &CMatrix, b: &[Complex64]) -> Result<SolveReport> {
    let chol = Cholesky::factor(a)?;
    let mut x = chol.solve(b);
    let r = residual(a, &x, b);
    add_assign(&mut x, &chol.solve(&r));
    let cond = condition_from_factor(a, &chol);
    Ok(finish(a, b, x, SolverKind::Cholesky, cond))
}

pub fn cholesky_solve(g: &GramSystem) -> Result<SolveReport> {
    cholesky_solve_dense(&g.matrix, &g.rhs)
}

/// Outcome of the Levinson recursion.
enum Levinson {
    Solved(Vec<Complex64>),
    Breakdown { step: usize },
}

/// Levinson recursion for a Toeplitz matrix with general right-hand side.
///
/// `on_step` receives the solution of every leading subsystem.
fn levinson(a: &CMatrix, y: &[Complex64], mut on_step: impl FnMut(&[Complex64])) -> Levinson {
    let n = a.dim();
    // t(d) = A[d][0] below the diagonal, t(−d) = A[0][d] above it
    let lower: Vec<Complex64> = (0..n).map(|d| a[(d, 0)]).collect();
    let upper: Vec<Complex64> = (0..n).map(|d| a[(0, d)]).collect();
    let t0 = lower[0];
    let floor = LEVINSON_BREAKDOWN_RTOL * t0.norm();
    if t0.norm() <= floor || t0.norm() == 0.0 {
        return Levinson::Breakdown { step: 0 };
    }
    let mut fwd = vec![t0.inv()];
    let mut bwd = vec![t0.inv()];
    let mut x = vec![y[0] / t0];
    let mut err = t0.re;
    on_step(&x);
    for m in 1..n {
        let ef: Complex64 = (0..m).map(|i| lower[m - i] * fwd[i]).sum();
        let eb: Complex64 = (0..m).map(|i| upper[i + 1] * bwd[i]).sum();
        let denom = Complex64::new(1.0, 0.0) - ef * eb;
        err *= denom.re;
        if err.is_nan() || err <= floor {
            return Levinson::Breakdown { step: m };
        }
        let inv = denom.inv();
        let mut f_next = Vec::with_capacity(m + 1);
        let mut b_next = Vec::with_capacity(m + 1);
        for i in 0..=m {
            let f_i = if i < m { fwd[i] } else { ZERO };
            let b_shift = if i > 0 { bwd[i - 1] } else { ZERO };
            f_next.push((f_i - ef * b_shift) * inv);
            b_next.push((b_shift - eb * f_i) * inv);
        }
        fwd = f_next;
        bwd = b_next;
        let ex: Complex64 = (0..m).map(|i| lower[m - i] * x[i]).sum();
        let gain = y[m] - ex;
        x.push(ZERO);
        for (xi, bi) in x.iter_mut().zip(&bwd) {
            *xi += gain * bi;
        }
        on_step(&x);
    }
    Levinson::Solved(x)
}

/// Solves a Toeplitz system by Levinson recursion with one refinement step.
///
/// Falls back to Cholesky (and marks the report) if the recursion breaks
/// down.
pub fn levinson_solve(g: &GramSystem) -> Result<SolveReport> {
    if g.structure != Structure::Toeplitz {
        return Err(Error::NotToeplitz(g.structure.as_str()));
    }
    let a = &g.matrix;
    let b = &g.rhs;
    let x = match levinson(a, b, |_| {}) {
        Levinson::Solved(x) => x,
        Levinson::Breakdown { step } => return levinson_fallback(g, step),
    };
    let mut x = x;
    let r = residual(a, &x, b);
    match levinson(a, &r, |_| {}) {
        Levinson::Solved(d) => add_assign(&mut x, &d),
        Levinson::Breakdown { step } => return levinson_fallback(g, step),
    }
    let cond = condition_estimate(g);
    Ok(finish(a, b, x, SolverKind::Levinson, cond))
}

fn levinson_fallback(g: &GramSystem, step: usize) -> Result<SolveReport> {
    let msg = format!("Levinson recursion broke down at step {step}; solved by Cholesky instead");
    log::warn!("{msg}");
    let mut report = cholesky_solve(g)?;
    report.fallback = true;
    report.warnings.insert(0, msg);
    Ok(report)
}

fn finish(a: &CMatrix, b: &[Complex64], x: Vec<Complex64>, solver: SolverKind, cond: f64) -> SolveReport {
    let residual_inf = inf_norm(&residual(a, &x, b));
    let mut warnings = Vec::new();
    if cond > CONDITION_NOTICE {
        let msg = format!("ill-conditioned system: condition estimate {cond:.3e}");
        if cond > CONDITION_WARN {
            log::warn!("{msg}");
        }
        warnings.push(msg);
    }
    SolveReport {
        coeffs: x,
        solver,
        residual_inf,
        cond_estimate: cond,
        refined: true,
        fallback: false,
        warnings,
    }
}

/// Solves with the requested solver.
pub fn solve(g: &GramSystem, choice: SolverChoice) -> Result<SolveReport> {
    match (choice, g.structure) {
        (SolverChoice::Cholesky, _) => cholesky_solve(g),
        (SolverChoice::Levinson, _) | (SolverChoice::Auto, Structure::Toeplitz) => levinson_solve(g),
        (SolverChoice::Auto, _) => cholesky_solve(g),
    }
}

/// Solutions of every leading subsystem `0..=m`, `m = 0..=n`, without
/// refinement. Used by the distance profiles.
pub fn solve_prefixes(g: &GramSystem, choice: SolverChoice) -> Result<(SolverKind, Vec<Vec<Complex64>>)> {
    let use_levinson = match choice {
        SolverChoice::Levinson if g.structure != Structure::Toeplitz => {
            return Err(Error::NotToeplitz(g.structure.as_str()));
        }
        SolverChoice::Levinson => true,
        SolverChoice::Auto => g.structure == Structure::Toeplitz,
        SolverChoice::Cholesky => false,
    };
    if use_levinson {
        let mut out = Vec::with_capacity(g.dim());
        if let Levinson::Solved(_) = levinson(&g.matrix, &g.rhs, |x| out.push(x.to_vec())) {
            return Ok((SolverKind::Levinson, out));
        }
        log::warn!("Levinson recursion broke down; solving prefixes by Cholesky");
    }
    let chol = Cholesky::factor(&g.matrix)?;
    let out = (1..=g.dim()).map(|size| chol.solve_leading(size, &g.rhs[..size])).collect();
    Ok((SolverKind::Cholesky, out))
}

/// Estimate of the 2-norm condition number `λ_max / λ_min`.
///
/// Returns infinity when the matrix is not positive definite.
pub fn condition_estimate(g: &GramSystem) -> f64 {
    match Cholesky::factor(&g.matrix) {
        Ok(chol) => condition_from_factor(&g.matrix, &chol),
        Err(_) => f64::INFINITY,
    }
}

/// Power iteration for the largest eigenvalue and inverse iteration (through
/// the Cholesky factor) for the smallest.
fn condition_from_factor(a: &CMatrix, chol: &Cholesky) -> f64 {
    let n = a.dim();
    if n == 1 {
        return 1.0;
    }
    let start: Vec<Complex64> = (0..n)
        .map(|k| Complex64::new(1.0 + 0.5 * ((k * 7919) % 13) as f64 / 13.0, 0.0))
        .collect();
    let lambda_max = dominant_eigenvalue(&start, |v| a.matvec(v));
    let inv_min = dominant_eigenvalue(&start, |v| chol.solve(v));
    if inv_min <= 0.0 || !inv_min.is_finite() {
        return f64::INFINITY;
    }
    (lambda_max * inv_min).max(1.0)
}

fn dominant_eigenvalue(start: &[Complex64], apply: impl Fn(&[Complex64]) -> Vec<Complex64>) -> f64 {
    const MAX_ITER: usize = 300;
    const RTOL: f64 = 1e-9;
    let norm = euclid_norm(start);
    let mut v: Vec<Complex64> = start.iter().map(|z| z / norm).collect();
    let mut lambda = 0.0;
    for _ in 0..MAX_ITER {
        let w = apply(&v);
        // Rayleigh quotient of a Hermitian operator
        let rq: f64 = v.iter().zip(&w).map(|(vi, wi)| (vi.conj() * wi).re).sum();
        let wn = euclid_norm(&w);
        if wn == 0.0 || !wn.is_finite() {
            return rq;
        }
        v = w.iter().map(|z| z / wn).collect();
        let done = (rq - lambda).abs() <= RTOL * rq.abs();
        lambda = rq;
        if done {
            break;
        }
    }
    lambda
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gram::build_system;
    use crate::series::{SpaceParam, TaylorSeries1D};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn system(rows: &[&[f64]], b: &[f64]) -> GramSystem {
        GramSystem::from_parts(
            CMatrix::from_real_rows(rows),
            b.iter().map(|&x| c(x)).collect(),
            SpaceParam::HARDY,
        )
        .unwrap()
    }

    fn close(got: &[Complex64], want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - c(*w)).norm() <= tol, "{got:?} vs {want:?}");
        }
    }

    fn tridiagonal() -> GramSystem {
        system(&[&[2.0, -1.0, 0.0], &[-1.0, 2.0, -1.0], &[0.0, -1.0, 2.0]], &[1.0, 0.0, 0.0])
    }

    fn pentadiagonal() -> GramSystem {
        system(&[&[6.0, -4.0, 1.0], &[-4.0, 6.0, -4.0], &[1.0, -4.0, 6.0]], &[1.0, 0.0, 0.0])
    }

    #[test]
    fn cholesky_examples() {
        close(&cholesky_solve(&tridiagonal()).unwrap().coeffs, &[0.75, 0.5, 0.25], 1e-15);
        let id = system(&[&[1.0, 0.0], &[0.0, 1.0]], &[1.0, 0.0]);
        close(&cholesky_solve(&id).unwrap().coeffs, &[1.0, 0.0], 0.0);
        close(&cholesky_solve(&pentadiagonal()).unwrap().coeffs, &[0.4, 0.4, 0.2], 1e-15);
    }

    #[test]
    fn levinson_examples() {
        let r = levinson_solve(&tridiagonal()).unwrap();
        assert_eq!(r.solver, SolverKind::Levinson);
        close(&r.coeffs, &[0.75, 0.5, 0.25], 1e-15);
        close(&levinson_solve(&system(&[&[2.0]], &[1.0])).unwrap().coeffs, &[0.5], 0.0);
        close(&levinson_solve(&pentadiagonal()).unwrap().coeffs, &[0.4, 0.4, 0.2], 1e-15);
    }

    #[test]
    fn levinson_rejects_non_toeplitz() {
        let g = system(&[&[2.0, 1.0], &[1.0, 3.0]], &[1.0, 0.0]);
        assert!(matches!(levinson_solve(&g), Err(Error::NotToeplitz("two_isometry"))));
        assert!(matches!(solve(&g, SolverChoice::Levinson), Err(Error::NotToeplitz(_))));
        assert_eq!(solve(&g, SolverChoice::Auto).unwrap().solver, SolverKind::Cholesky);
    }

    #[test]
    fn levinson_handles_complex_hermitian() {
        let i = Complex64::new(0.0, 1.0);
        let f = TaylorSeries1D::new(vec![c(1.0), 0.3 * i, c(-0.2) + 0.1 * i]).unwrap();
        let g = build_system(&f, 6, SpaceParam::HARDY).unwrap();
        assert_eq!(g.structure, Structure::Toeplitz);
        let lev = levinson_solve(&g).unwrap();
        let chol = cholesky_solve(&g).unwrap();
        for (a, b) in lev.coeffs.iter().zip(&chol.coeffs) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn levinson_breakdown_falls_back() {
        // indefinite leading block triggers the breakdown branch
        let g = system(&[&[1.0, 1.0, 0.5], &[1.0, 1.0, 1.0], &[0.5, 1.0, 1.0]], &[1.0, 0.0, 0.0]);
        assert_eq!(g.structure, Structure::Toeplitz);
        match levinson_solve(&g) {
            Err(Error::NotPositiveDefinite { .. }) => {}
            other => panic!("expected a failed fallback, got {other:?}"),
        }
    }

    #[test]
    fn non_positive_definite_is_signalled() {
        let g = system(&[&[1.0, 2.0], &[2.0, 1.0]], &[1.0, 0.0]);
        assert!(matches!(cholesky_solve(&g), Err(Error::NotPositiveDefinite { index: 1, .. })));
        assert_eq!(condition_estimate(&g), f64::INFINITY);
    }

    #[test]
    fn condition_examples() {
        let id = system(&[&[1.0, 0.0], &[0.0, 1.0]], &[1.0, 0.0]);
        assert!((condition_estimate(&id) - 1.0).abs() < 1e-12);
        let exact = (2.0 + 2f64.sqrt()) / (2.0 - 2f64.sqrt());
        let est = condition_estimate(&tridiagonal());
        assert!(est <= 3.0 * exact && est >= exact / 3.0, "{est} vs {exact}");
    }

    #[test]
    fn ill_conditioned_family_warns() {
        let f = TaylorSeries1D::from_real(&[1.0, -4.0, 6.0, -4.0, 1.0]).unwrap();
        let g = build_system(&f, 60, SpaceParam::HARDY).unwrap();
        let r = solve(&g, SolverChoice::Auto).unwrap();
        assert!(r.cond_estimate > 1e6, "{}", r.cond_estimate);
        assert!(!r.warnings.is_empty());
    }

    #[test]
    fn prefixes_match_individual_solves() {
        let f = TaylorSeries1D::from_real(&[1.0, -0.5, 0.25]).unwrap();
        for s in [SpaceParam::HARDY, SpaceParam::DIRICHLET] {
            let g = build_system(&f, 8, s).unwrap();
            let (_, prefixes) = solve_prefixes(&g, SolverChoice::Auto).unwrap();
            for (m, x) in prefixes.iter().enumerate() {
                let single = solve(&g.leading(m), SolverChoice::Cholesky).unwrap();
                for (a, b) in x.iter().zip(&single.coeffs) {
                    assert!((a - b).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn solver_choice_parses() {
        assert_eq!("levinson".parse::<SolverChoice>().unwrap(), SolverChoice::Levinson);
        assert!("qr".parse::<SolverChoice>().is_err());
    }
}
