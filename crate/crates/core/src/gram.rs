//! Gram systems for the normal equations of the optimal approximant.
//!
//! With `p = Σ c_k z^k`, orthogonality of `p f − 1` to every `z^j f` reads
//!
//! ```text
//! Σ_k ⟨z^k f, z^j f⟩ c_k = ⟨1, z^j f⟩,   j = 0..=n.
//! ```
//!
//! [`GramSystem::matrix`] holds exactly that coefficient matrix, so entry
//! `(j, k)` is `moment(f, k, j)`. For real coefficients this coincides with
//! `moment(f, j, k)`; in general it is its complex conjugate.

use num_complex::Complex64;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::series::{inner_product, SpaceParam, TaylorSeries1D};

/// Relative tolerance for structure detection.
pub const STRUCTURE_RTOL: f64 = 1e-12;

/// Exploitable structure of a Gram matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Structure {
    /// Constant along diagonals (the Hardy-space shape).
    Toeplitz,
    /// Second differences along diagonals vanish (the Dirichlet-space shape).
    TwoIsometry,
    Generic,
}

impl Structure {
    pub fn as_str(self) -> &'static str {
        match self {
            Structure::Toeplitz => "toeplitz",
            Structure::TwoIsometry => "two_isometry",
            Structure::Generic => "generic",
        }
    }
}

impl std::fmt::Display for Structure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `⟨z^j f, z^k f⟩_α = Σ_m a_{m−j} conj(a_{m−k}) (m+1)^α`.
pub fn moment(f: &TaylorSeries1D, j: usize, k: usize, s: SpaceParam) -> Complex64 {
    let a = f.coeffs();
    let start = j.max(k);
    let end = (j + a.len()).min(k + a.len());
    (start..end)
        .map(|m| a[m - j] * a[m - k].conj() * s.weight(m))
        .sum()
}

/// Normal equations `M c = b` for the degree-`n` approximant.
#[derive(Clone, Debug)]
pub struct GramSystem {
    pub n: usize,
    pub alpha: SpaceParam,
    pub matrix: CMatrix,
    pub rhs: Vec<Complex64>,
    pub structure: Structure,
}

impl GramSystem {
    /// Assembles a system from explicit data and tags its structure.
    pub fn from_parts(matrix: CMatrix, rhs: Vec<Complex64>, alpha: SpaceParam) -> Result<Self> {
        if matrix.dim() == 0 || rhs.len() != matrix.dim() {
            return Err(Error::InvalidArgument(format!(
                "matrix of size {} does not match right-hand side of length {}",
                matrix.dim(),
                rhs.len()
            )));
        }
        let structure = detect_structure(&matrix);
        Ok(GramSystem { n: matrix.dim() - 1, alpha, matrix, rhs, structure })
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    /// The system for degree `m ≤ n`: moments do not depend on `n`, so it
    /// is the leading block.
    pub fn leading(&self, m: usize) -> GramSystem {
        assert!(m <= self.n, "degree {m} exceeds assembled degree {}", self.n);
        let matrix = self.matrix.leading(m + 1);
        let structure = if self.structure == Structure::Toeplitz {
            Structure::Toeplitz
        } else {
            detect_structure(&matrix)
        };
        GramSystem {
            n: m,
            alpha: self.alpha,
            matrix,
            rhs: self.rhs[..=m].to_vec(),
            structure,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

impl Serialize for GramSystem {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<&[Complex64]> = self.matrix.rows().collect();
        let mut st = serializer.serialize_struct("GramSystem", 5)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("alpha", &self.alpha.alpha())?;
        st.serialize_field("structure", self.structure.as_str())?;
        st.serialize_field("M", &rows)?;
        st.serialize_field("b", &self.rhs)?;
        st.end()
    }
}

/// Builds the degree-`n` normal equations for `f` in `D_α`.
pub fn build_system(f: &TaylorSeries1D, n: usize, s: SpaceParam) -> Result<GramSystem> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let f = f.as_polynomial();
    let dim = n + 1;
    let mut matrix = CMatrix::zeros(dim);
    for j in 0..dim {
        for k in 0..=j {
            let v = positive_zero(moment(&f, k, j, s));
            matrix[(j, k)] = v;
            matrix[(k, j)] = positive_zero(v.conj());
        }
        // exact Hermitian diagonal
        matrix[(j, j)].im = 0.0;
    }
    let one = TaylorSeries1D::one();
    let rhs = (0..dim)
        .map(|j| positive_zero(inner_product(&one, &f.shift(j), s)))
        .collect();
    let structure = detect_structure(&matrix);
    Ok(GramSystem { n, alpha: s, matrix, rhs, structure })
}

// turns -0.0 into 0.0 so serialized systems read cleanly
fn positive_zero(z: Complex64) -> Complex64 {
    Complex64::new(z.re + 0.0, z.im + 0.0)
}

/// Tags a Hermitian matrix as Toeplitz, 2-isometric, or generic.
///
/// Toeplitz takes precedence when both identities hold.
pub fn detect_structure(m: &CMatrix) -> Structure {
    let scale = m.max_abs();
    let tol = STRUCTURE_RTOL * scale;
    let dim = m.dim();
    let is_toeplitz = (1..dim).all(|j| (1..dim).all(|k| (m[(j, k)] - m[(j - 1, k - 1)]).norm() <= tol));
    if is_toeplitz {
        return Structure::Toeplitz;
    }
    if two_isometry_defect(m) <= tol {
        Structure::TwoIsometry
    } else {
        Structure::Generic
    }
}

/// Largest `|M_{j,k} − 2 M_{j+1,k+1} + M_{j+2,k+2}|` over valid indices.
pub fn two_isometry_defect(m: &CMatrix) -> f64 {
    let dim = m.dim();
    let mut worst: f64 = 0.0;
    for j in 0..dim.saturating_sub(2) {
        for k in 0..dim.saturating_sub(2) {
            let d = m[(j, k)] - 2.0 * m[(j + 1, k + 1)] + m[(j + 2, k + 2)];
            worst = worst.max(d.norm());
        }
    }
    worst
}

/// Binomial coefficient as an exact integer, zero outside `0..=n`.
pub(crate) fn binomial(n: i64, k: i64) -> u128 {
    if k < 0 || k > n || n < 0 {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn sign(e: i64) -> f64 {
    if e.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Hardy-space moments of `(1 − z)^a`: `(−1)^{j−k} C(2a, a+k−j)`.
pub fn hardy_moment_closed_form(a: u32, j: usize, k: usize) -> Complex64 {
    let (a, j, k) = (a as i64, j as i64, k as i64);
    let v = sign(j - k) * binomial(2 * a, a + k - j) as f64;
    Complex64::new(v, 0.0)
}

/// Dirichlet-space moments of `(1 − z)^a`:
/// `(−1)^{j−k} C(2a, a+k−j) (k+j+a+2) / 2`.
pub fn dirichlet_moment_closed_form(a: u32, j: usize, k: usize) -> Complex64 {
    let (a, j, k) = (a as i64, j as i64, k as i64);
    let v = sign(j - k) * binomial(2 * a, a + k - j) as f64 * (k + j + a + 2) as f64 / 2.0;
    Complex64::new(v, 0.0)
}

/// Moments `⟨z^j f, f⟩` for `j = 1..=j_max`.
///
/// In the Hardy space a function is inner exactly when all of these vanish
/// (and `‖f‖ = 1`); other spaces are allowed but flagged.
#[derive(Clone, Debug, PartialEq)]
pub struct InnerMomentProfile {
    pub moments: Vec<Complex64>,
    pub alpha: SpaceParam,
}

impl InnerMomentProfile {
    /// Whether the profile is meaningful as an inner-function test.
    pub fn is_hardy(&self) -> bool {
        self.alpha.is_hardy()
    }

    pub fn max_modulus(&self) -> f64 {
        self.moments.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub fn inner_moment_profile(f: &TaylorSeries1D, j_max: usize, s: SpaceParam) -> InnerMomentProfile {
    if !s.is_hardy() {
        log::warn!("inner-function moment profile requested for alpha = {}", s.alpha());
    }
    InnerMomentProfile {
        moments: (1..=j_max).map(|j| moment(f, j, 0, s)).collect(),
        alpha: s,
    }
}
