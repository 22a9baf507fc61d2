//! Dirichlet-type spaces on the bidisk.
//!
//! `f(z1, z2) = Σ a_{j,k} z1^j z2^k` has norm `Σ |a_{j,k}|² ((j+1)(k+1))^α`.
//! Approximants range over polynomials of total degree at most `n`, indexed
//! in graded lexicographic order: `(0,0), (1,0), (0,1), (2,0), (1,1), …`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::approx::{SolveSummary, DISTANCE_MISMATCH_ABORT};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::series::{weight, SpaceParam};
use crate::solve::{cholesky_solve_dense, SolverKind};

/// Relative tolerance for swap symmetry of coefficients.
pub const SWAP_RTOL: f64 = 1e-10;

/// Dense coefficient array `a[j][k]` of a two-variable polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorSeries2D {
    coeffs: Vec<Vec<Complex64>>,
}

#[derive(Serialize, Deserialize)]
struct Term {
    j: usize,
    k: usize,
    v: Complex64,
}

#[derive(Serialize, Deserialize)]
struct TermsJson {
    coeffs: Vec<Term>,
}

impl TaylorSeries2D {
    /// Builds from `(j, k, value)` triples; repeated indices accumulate.
    pub fn from_terms(terms: impl IntoIterator<Item = (usize, usize, Complex64)>) -> Result<Self> {
        let terms: Vec<_> = terms.into_iter().collect();
        if terms.is_empty() {
            return Err(Error::InvalidSpec("a two-variable series needs at least one term".into()));
        }
        let rows = terms.iter().map(|t| t.0).max().unwrap_or(0) + 1;
        let cols = terms.iter().map(|t| t.1).max().unwrap_or(0) + 1;
        let mut coeffs = vec![vec![Complex64::new(0.0, 0.0); cols]; rows];
        for (j, k, v) in terms {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::InvalidSpec(format!("non-finite coefficient at ({j}, {k})")));
            }
            coeffs[j][k] += v;
        }
        Ok(Self { coeffs })
    }

    pub fn from_real_terms(terms: &[(usize, usize, f64)]) -> Result<Self> {
        Self::from_terms(terms.iter().map(|&(j, k, v)| (j, k, Complex64::new(v, 0.0))))
    }

    pub fn constant(c: Complex64) -> Self {
        Self { coeffs: vec![vec![c]] }
    }

    /// Parses `{"coeffs":[{"j":0,"k":0,"v":[re,im]}, …]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: TermsJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        Self::from_terms(parsed.coeffs.into_iter().map(|t| (t.j, t.k, t.v)))
    }

    pub fn to_json(&self) -> Result<String> {
        let coeffs = self.terms().map(|(j, k, v)| Term { j, k, v }).collect();
        Ok(serde_json::to_string(&TermsJson { coeffs })?)
    }

    pub fn coeff(&self, j: usize, k: usize) -> Complex64 {
        self.coeffs
            .get(j)
            .and_then(|row| row.get(k))
            .copied()
            .unwrap_or_default()
    }

    /// Nonzero terms in row-major order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.coeffs.iter().enumerate().flat_map(|(j, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, v)| **v != Complex64::new(0.0, 0.0))
                .map(move |(k, v)| (j, k, *v))
        })
    }

    /// Array extents `(max j + 1, max k + 1)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.coeffs.len(), self.coeffs.first().map_or(0, Vec::len))
    }

    pub fn is_zero(&self) -> bool {
        self.terms().next().is_none()
    }

    pub fn value_at_origin(&self) -> Complex64 {
        self.coeff(0, 0)
    }

    pub fn eval(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        self.terms()
            .map(|(j, k, v)| v * z1.powu(j as u32) * z2.powu(k as u32))
            .sum()
    }

    /// The series with `z1` and `z2` exchanged.
    pub fn swapped(&self) -> Self {
        let (rows, cols) = self.shape();
        let mut coeffs = vec![vec![Complex64::new(0.0, 0.0); rows]; cols];
        for (j, k, v) in self.terms() {
            coeffs[k][j] = v;
        }
        Self { coeffs }
    }

    pub fn is_swap_invariant(&self) -> bool {
        let scale = self.terms().map(|t| t.2.norm()).fold(0.0, f64::max);
        let (rows, cols) = self.shape();
        let size = rows.max(cols);
        (0..size).all(|j| {
            (0..size).all(|k| (self.coeff(j, k) - self.coeff(k, j)).norm() <= 1e-14 * scale)
        })
    }
}

/// Monomials `z1^j z2^k` with `j + k ≤ n`, in graded lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis2D {
    pub n: usize,
    pub indices: Vec<(usize, usize)>,
}

impl MonomialBasis2D {
    pub fn new(n: usize) -> Self {
        let indices = (0..=n)
            .flat_map(|d| (0..=d).rev().map(move |j| (j, d - j)))
            .collect();
        Self { n, indices }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn position(&self, j: usize, k: usize) -> Option<usize> {
        self.indices.iter().position(|&idx| idx == (j, k))
    }
}

fn product_weight(j: usize, k: usize, s: SpaceParam) -> f64 {
    weight(((j + 1) * (k + 1)) as f64, s.alpha())
}

/// `Σ |a_{j,k}|² ((j+1)(k+1))^α`.
pub fn norm_sq_2d(f: &TaylorSeries2D, s: SpaceParam) -> f64 {
    f.terms().map(|(j, k, v)| v.norm_sqr() * product_weight(j, k, s)).sum()
}

/// `⟨z1^{j1} z2^{k1} f, z1^{j2} z2^{k2} f⟩`.
pub fn moment_2d(f: &TaylorSeries2D, first: (usize, usize), second: (usize, usize), s: SpaceParam) -> Complex64 {
    let (j1, k1) = first;
    let (j2, k2) = second;
    let mut acc = Complex64::new(0.0, 0.0);
    for (a, b, v) in f.terms() {
        let (m1, m2) = (a + j1, b + k1);
        let (Some(r), Some(c)) = (m1.checked_sub(j2), m2.checked_sub(k2)) else {
            continue;
        };
        let w = f.coeff(r, c);
        if w != Complex64::new(0.0, 0.0) {
            acc += v * w.conj() * product_weight(m1, m2, s);
        }
    }
    acc
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimalApproximant2D {
    pub basis: MonomialBasis2D,
    /// Coefficients aligned with `basis.indices`.
    pub coeffs: Vec<Complex64>,
    pub dist_sq: f64,
    /// `1 − Re(p(0,0) f(0,0))`.
    pub dist_sq_formula: f64,
    pub solve: SolveSummary,
    pub alpha: SpaceParam,
}

#[derive(Serialize)]
struct Approximant2DJson {
    alpha: f64,
    n: usize,
    coeffs: Vec<Term>,
    dist_sq: f64,
    dist_sq_formula: f64,
    solver: &'static str,
    residual_inf: f64,
}

impl OptimalApproximant2D {
    pub fn coeff(&self, j: usize, k: usize) -> Complex64 {
        self.basis.position(j, k).map_or(Complex64::new(0.0, 0.0), |i| self.coeffs[i])
    }

    pub fn polynomial(&self) -> TaylorSeries2D {
        TaylorSeries2D::from_terms(self.basis.indices.iter().zip(&self.coeffs).map(|(&(j, k), &v)| (j, k, v)))
            .expect("basis is nonempty")
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&Approximant2DJson {
            alpha: self.alpha.alpha(),
            n: self.basis.n,
            coeffs: self
                .basis
                .indices
                .iter()
                .zip(&self.coeffs)
                .map(|(&(j, k), &v)| Term { j, k, v })
                .collect(),
            dist_sq: self.dist_sq,
            dist_sq_formula: self.dist_sq_formula,
            solver: SolverKind::Cholesky.as_str(),
            residual_inf: self.solve.residual_inf,
        })?)
    }
}

fn multiply_2d(p: &TaylorSeries2D, f: &TaylorSeries2D) -> TaylorSeries2D {
    let mut terms = Vec::new();
    for (a, b, u) in p.terms() {
        for (c, d, v) in f.terms() {
            terms.push((a + c, b + d, u * v));
        }
    }
    if terms.is_empty() {
        return TaylorSeries2D::constant(Complex64::new(0.0, 0.0));
    }
    TaylorSeries2D::from_terms(terms).expect("finite products")
}

/// Gram matrix and right-hand side over the total-degree basis.
pub fn build_system_2d(f: &TaylorSeries2D, basis: &MonomialBasis2D, s: SpaceParam) -> (CMatrix, Vec<Complex64>) {
    let idx = &basis.indices;
    let mut m = CMatrix::zeros(basis.len());
    for r in 0..idx.len() {
        m[(r, r)] = Complex64::new(moment_2d(f, idx[r], idx[r], s).re, 0.0);
        for c in r + 1..idx.len() {
            let v = moment_2d(f, idx[c], idx[r], s);
            m[(r, c)] = v;
            m[(c, r)] = v.conj();
        }
    }
    let rhs = idx
        .iter()
        .map(|&pos| if pos == (0, 0) { f.value_at_origin().conj() } else { Complex64::new(0.0, 0.0) })
        .collect();
    (m, rhs)
}

pub fn optimal_approximant_2d(f: &TaylorSeries2D, n: usize, s: SpaceParam) -> Result<OptimalApproximant2D> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let basis = MonomialBasis2D::new(n);
    let (matrix, rhs) = build_system_2d(f, &basis, s);
    let report = cholesky_solve_dense(&matrix, &rhs)?;
    for w in &report.warnings {
        log::warn!("{w}");
    }
    let (coeffs, summary) = SolveSummary::split(report);

    let p = TaylorSeries2D::from_terms(basis.indices.iter().zip(&coeffs).map(|(&(j, k), &v)| (j, k, v)))?;
    let residual = multiply_2d(&p, f);
    let mut terms: Vec<_> = residual.terms().collect();
    terms.push((0, 0, Complex64::new(-1.0, 0.0)));
    let dist_sq = norm_sq_2d(&TaylorSeries2D::from_terms(terms)?, s);
    let dist_sq_formula = 1.0 - (coeffs[0] * f.value_at_origin()).re;
    if (dist_sq - dist_sq_formula).abs() > DISTANCE_MISMATCH_ABORT {
        return Err(Error::DistanceMismatch { direct: dist_sq, formula: dist_sq_formula, cond: summary.cond_estimate });
    }
    Ok(OptimalApproximant2D { basis, coeffs, dist_sq, dist_sq_formula, solve: summary, alpha: s })
}

/// Whether the approximant of a swap-invariant `f` is itself swap-invariant.
pub fn swap_symmetry_check(f: &TaylorSeries2D, n: usize, s: SpaceParam) -> Result<bool> {
    if !f.is_swap_invariant() {
        return Err(Error::NotSwapInvariant);
    }
    let approx = optimal_approximant_2d(f, n, s)?;
    let scale = approx.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    Ok(approx
        .basis
        .indices
        .iter()
        .zip(&approx.coeffs)
        .all(|(&(j, k), &c)| (c - approx.coeff(k, j)).norm() <= SWAP_RTOL * scale))
}
