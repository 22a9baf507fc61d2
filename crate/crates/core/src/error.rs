use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid function specification: {0}")]
    InvalidSpec(String),

    #[error("function `{0}` requires a truncation degree")]
    MissingTruncation(&'static str),

    #[error("the function is identically zero")]
    ZeroFunction,

    #[error("f(0) = 0, the operation needs a function that does not vanish at the origin")]
    VanishesAtOrigin,

    #[error("matrix is not positive definite (pivot {index} = {value:e})")]
    NotPositiveDefinite { index: usize, value: f64 },

    #[error("Levinson recursion requires a Toeplitz system (detected {0})")]
    NotToeplitz(&'static str),

    #[error("no convergence after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("polynomial has no roots: effective degree is 0")]
    ConstantPolynomial,

    #[error("<f, zf> vanishes: the degree-one approximant has no zero")]
    NoDegreeOneZero,

    #[error(
        "distance mismatch: direct {direct:e} vs 1 - p(0)f(0) = {formula:e} \
         (condition estimate {cond:e})"
    )]
    DistanceMismatch { direct: f64, formula: f64, cond: f64 },

    #[error("closed forms disagree: {0}")]
    OracleMismatch(String),

    #[error("function is not invariant under swapping z1 and z2")]
    NotSwapInvariant,

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotPositiveDefinite { .. }
                | Error::NonConvergence { .. }
                | Error::DistanceMismatch { .. }
                | Error::OracleMismatch(_)
        )
    }
}
