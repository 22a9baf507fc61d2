//! Coefficient sequences on the disk and the `D_α` inner product.
//!
//! The inner product is linear in the first argument and conjugate-linear in
//! the second, so that pairing with a reproducing kernel evaluates a function:
//!
//! ```text
//! ⟨f, g⟩_α = Σ_k f_k · conj(g_k) · (k+1)^α
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default truncation degree for non-polynomial functions.
pub const DEFAULT_TRUNCATION: usize = 256;

/// Coefficients smaller than this fraction of the largest one are ignored
/// when computing the effective degree.
pub const EFFECTIVE_DEGREE_RTOL: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The parameter `α` selecting the space `D_α`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpaceParam(f64);

impl SpaceParam {
    /// Bergman space, `α = −1`.
    pub const BERGMAN: SpaceParam = SpaceParam(-1.0);
    /// Hardy space, `α = 0`.
    pub const HARDY: SpaceParam = SpaceParam(0.0);
    /// Dirichlet space, `α = 1`.
    pub const DIRICHLET: SpaceParam = SpaceParam(1.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() {
            Ok(SpaceParam(alpha))
        } else {
            Err(Error::InvalidArgument(format!("alpha must be finite, got {alpha}")))
        }
    }

    pub fn alpha(self) -> f64 {
        self.0
    }

    pub fn is_hardy(self) -> bool {
        self.0 == 0.0
    }

    /// The weight `(k+1)^α` of the `k`-th monomial.
    pub fn weight(self, k: usize) -> f64 {
        weight(k as f64 + 1.0, self.0)
    }
}

/// `base^alpha`, exact for small integer exponents.
pub(crate) fn weight(base: f64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        1.0
    } else if alpha.fract() == 0.0 && alpha.abs() <= 64.0 {
        base.powi(alpha as i32)
    } else {
        base.powf(alpha)
    }
}

/// A finite sequence of Taylor coefficients `a_0, a_1, …`.
///
/// When `truncation` is set, the sequence is the truncation of an infinite
/// series at that degree; every downstream quantity is exact for the
/// truncated polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorSeries1D {
    coeffs: Vec<Complex64>,
    truncation: Option<usize>,
}

impl TaylorSeries1D {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a series needs at least one coefficient".into()));
        }
        if let Some(k) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidArgument(format!("coefficient {k} is not finite")));
        }
        Ok(TaylorSeries1D { coeffs, truncation: None })
    }

    /// Truncation of an infinite series; keeps coefficients up to `degree`.
    pub fn truncated(mut coeffs: Vec<Complex64>, degree: usize) -> Result<Self> {
        coeffs.resize(degree + 1, ZERO);
        let mut s = Self::new(coeffs)?;
        s.truncation = Some(degree);
        Ok(s)
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        TaylorSeries1D { coeffs: vec![c], truncation: None }
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    /// The monomial `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![ZERO; k + 1];
        coeffs[k] = ONE;
        TaylorSeries1D { coeffs, truncation: None }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient `a_k`, zero beyond the stored range.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_truncated(&self) -> bool {
        self.truncation.is_some()
    }

    pub fn truncation_degree(&self) -> Option<usize> {
        self.truncation
    }

    /// Drops the truncation marker: the result is the truncated polynomial
    /// taken at face value.
    pub fn as_polynomial(&self) -> TaylorSeries1D {
        TaylorSeries1D { coeffs: self.coeffs.clone(), truncation: None }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    /// Highest index whose coefficient is not negligible, `None` for the
    /// zero series.
    pub fn effective_degree(&self) -> Option<usize> {
        let max = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return None;
        }
        let cutoff = EFFECTIVE_DEGREE_RTOL * max;
        self.coeffs.iter().rposition(|c| c.norm() > cutoff)
    }

    /// `f(0)`.
    pub fn value_at_zero(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        poly_eval(self, z)
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: usize) -> TaylorSeries1D {
        let mut coeffs = vec![ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        TaylorSeries1D { coeffs, truncation: self.truncation.map(|t| t + k) }
    }

    pub fn scale(&self, c: Complex64) -> TaylorSeries1D {
        TaylorSeries1D {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            truncation: self.truncation,
        }
    }

    /// Coefficientwise difference; the result is as long as the longer input.
    pub fn sub(&self, other: &TaylorSeries1D) -> TaylorSeries1D {
        let len = self.len().max(other.len());
        TaylorSeries1D {
            coeffs: (0..len).map(|k| self.coeff(k) - other.coeff(k)).collect(),
            truncation: min_truncation(self.truncation, other.truncation),
        }
    }
}

fn min_truncation(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// `⟨f, g⟩_α = Σ_k f_k conj(g_k) (k+1)^α` over the shared index range.
pub fn inner_product(f: &TaylorSeries1D, g: &TaylorSeries1D, s: SpaceParam) -> Complex64 {
    f.coeffs
        .iter()
        .zip(&g.coeffs)
        .enumerate()
        .map(|(k, (a, b))| a * b.conj() * s.weight(k))
        .sum()
}

/// `‖f‖²_α`.
pub fn norm_sq(f: &TaylorSeries1D, s: SpaceParam) -> f64 {
    f.coeffs
        .iter()
        .enumerate()
        .map(|(k, a)| a.norm_sqr() * s.weight(k))
        .sum()
}

/// Cauchy product of two coefficient sequences.
///
/// If either input is a truncation, the product is only known up to the
/// smallest truncation degree and is cut there.
pub fn multiply(f: &TaylorSeries1D, g: &TaylorSeries1D) -> TaylorSeries1D {
    let mut coeffs = vec![ZERO; f.len() + g.len() - 1];
    for (i, a) in f.coeffs.iter().enumerate() {
        if *a == ZERO {
            continue;
        }
        for (j, b) in g.coeffs.iter().enumerate() {
            coeffs[i + j] += a * b;
        }
    }
    let truncation = min_truncation(f.truncation, g.truncation);
    if let Some(t) = truncation {
        coeffs.resize(t + 1, ZERO);
    }
    TaylorSeries1D { coeffs, truncation }
}

/// Horner evaluation of `Σ p_k z^k`.
pub fn poly_eval(p: &TaylorSeries1D, z: Complex64) -> Complex64 {
    horner(&p.coeffs, z)
}

pub(crate) fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
}

/// The named function families, as read from JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    #[serde(flatten)]
    pub kind: FunctionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FunctionKind {
    /// Explicit Taylor coefficients.
    Coeffs { values: Vec<Complex64> },
    /// `(1 − z)^a`, `a > 0`.
    OneMinusZPow { a: f64 },
    /// `(1 − z)^β [(z − e^{iθ})(z − e^{−iθ})]^γ`.
    #[serde(rename = "problem6")]
    PointMassFamily { beta: f64, gamma: f64, theta: f64 },
}

impl FunctionSpec {
    pub fn coeffs(values: Vec<Complex64>) -> Self {
        FunctionSpec { kind: FunctionKind::Coeffs { values }, truncation: None }
    }

    pub fn one_minus_z_pow(a: f64) -> Self {
        FunctionSpec { kind: FunctionKind::OneMinusZPow { a }, truncation: None }
    }

    pub fn family(beta: f64, gamma: f64, theta: f64) -> Self {
        FunctionSpec {
            kind: FunctionKind::PointMassFamily { beta, gamma, theta },
            truncation: None,
        }
    }

    pub fn with_truncation(mut self, degree: usize) -> Self {
        self.truncation = Some(degree);
        self
    }

    /// Fills in `degree` when no truncation was given.
    pub fn or_truncation(mut self, degree: usize) -> Self {
        self.truncation.get_or_insert(degree);
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))
    }

    /// Whether the function is an exact polynomial (no truncation needed).
    pub fn is_polynomial(&self) -> bool {
        match self.kind {
            FunctionKind::Coeffs { .. } => true,
            FunctionKind::OneMinusZPow { a } => is_whole(a),
            FunctionKind::PointMassFamily { beta, gamma, .. } => is_whole(beta) && is_whole(gamma),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.truncation == Some(0) {
            return Err(Error::InvalidSpec("truncation must be positive".into()));
        }
        match self.kind {
            FunctionKind::Coeffs { ref values } if values.is_empty() => {
                Err(Error::InvalidSpec("coefficient list is empty".into()))
            }
            FunctionKind::OneMinusZPow { a } if !(a.is_finite() && a > 0.0) => {
                Err(Error::InvalidSpec(format!("exponent a must be positive, got {a}")))
            }
            FunctionKind::PointMassFamily { beta, gamma, theta } => {
                if !(beta.is_finite() && beta >= 0.0 && gamma.is_finite() && gamma >= 0.0) {
                    return Err(Error::InvalidSpec(format!(
                        "beta and gamma must be nonnegative, got beta={beta}, gamma={gamma}"
                    )));
                }
                if !(theta > 0.0 && theta <= PI) {
                    return Err(Error::InvalidSpec(format!("theta must lie in (0, pi], got {theta}")));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

fn is_whole(x: f64) -> bool {
    x.fract() == 0.0 && x >= 0.0 && x <= u32::MAX as f64
}

/// Builds the coefficient sequence described by `spec`.
pub fn materialize(spec: &FunctionSpec) -> Result<TaylorSeries1D> {
    spec.validate()?;
    match spec.kind {
        FunctionKind::Coeffs { ref values } => TaylorSeries1D::new(values.clone()),
        FunctionKind::OneMinusZPow { a } => {
            if is_whole(a) {
                Ok(binomial_polynomial(a as u32, ONE))
            } else {
                let t = spec.truncation.ok_or(Error::MissingTruncation("one_minus_z_pow"))?;
                binomial_series(a, ONE, t)
            }
        }
        FunctionKind::PointMassFamily { beta, gamma, theta } => {
            let polynomial = is_whole(beta) && is_whole(gamma);
            let t = match (polynomial, spec.truncation) {
                (true, _) => None,
                (false, Some(t)) => Some(t),
                (false, None) => return Err(Error::MissingTruncation("problem6")),
            };
            let power = |exponent: f64, root: Complex64| match t {
                _ if is_whole(exponent) => Ok(binomial_polynomial(exponent as u32, root)),
                Some(t) => binomial_series(exponent, root, t),
                None => unreachable!("non-integer exponent implies a truncation"),
            };
            // (z − e^{iθ})(z − e^{−iθ}) = (1 − e^{iθ} z)(1 − e^{−iθ} z)
            let rotation = Complex64::from_polar(1.0, theta);
            let f = multiply(
                &power(beta, ONE)?,
                &multiply(&power(gamma, rotation)?, &power(gamma, rotation.conj())?),
            );
            Ok(f)
        }
    }
}

/// `(1 − ω z)^a` for a nonnegative integer `a`, exactly.
fn binomial_polynomial(a: u32, omega: Complex64) -> TaylorSeries1D {
    let mut coeffs = Vec::with_capacity(a as usize + 1);
    let mut binom: Option<u128> = Some(1);
    let mut approx = 1.0f64;
    let mut omega_pow = ONE;
    for k in 0..=a {
        let magnitude = binom.map_or(approx, |b| b as f64);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        coeffs.push(omega_pow * (sign * magnitude));
        let (num, den) = ((a - k) as u128, (k + 1) as u128);
        binom = binom.and_then(|b| b.checked_mul(num)).map(|b| b / den);
        approx *= num as f64 / den as f64;
        omega_pow *= omega;
    }
    TaylorSeries1D { coeffs, truncation: None }
}

/// Generalized binomial series of `(1 − ω z)^a` up to `degree`.
fn binomial_series(a: f64, omega: Complex64, degree: usize) -> Result<TaylorSeries1D> {
    let mut coeffs = Vec::with_capacity(degree + 1);
    let mut c = ONE;
    coeffs.push(c);
    for k in 1..=degree {
        c *= omega * ((k as f64 - 1.0 - a) / k as f64);
        coeffs.push(c);
    }
    TaylorSeries1D::truncated(coeffs, degree)
}
