//! Optimal polynomial approximants to `1/f` in Dirichlet-type spaces.
//!
//! A function `f(z) = Σ a_k z^k` on the unit disk lives in `D_α` when
//! `Σ |a_k|² (k+1)^α` is finite. The optimal approximant `p*_n` of degree
//! `n` minimizes `‖p f − 1‖` over polynomials of degree at most `n`; it is
//! obtained from a Hermitian Gram system whose entries are the moments
//! `⟨z^j f, z^k f⟩`.
//!
//! The crate is organized bottom-up:
//!
//! * [`series`] coefficient sequences, the weighted inner product and the
//!   function families used throughout;
//! * [`gram`] moment assembly, structure detection and closed-form moments;
//! * [`solve`] Cholesky and Levinson solvers with conditioning diagnostics;
//! * [`approx`] approximants, distances and cyclicity diagnostics;
//! * [`closedform`] exact formulas for `(1−z)^a` in the Hardy space;
//! * [`zeros`] root finding and zero-location checks;
//! * [`extremal`] lower bounds for the Bergman-space zero extremal problem;
//! * [`bidisk`] the two-variable analog on the bidisk;
//! * [`cli`] the command-line front end.

pub mod approx;
pub mod bidisk;
pub mod cli;
pub mod closedform;
pub mod error;
pub mod extremal;
pub mod gram;
pub mod linalg;
pub mod series;
pub mod solve;
pub mod zeros;

pub use approx::{optimal_approximant, OptimalApproximant};
pub use error::{Error, Result};
pub use gram::{build_system, GramSystem, Structure};
pub use series::{FunctionSpec, SpaceParam, TaylorSeries1D};
pub use solve::{SolveReport, SolverChoice, SolverKind};

pub use num_complex::Complex64;
