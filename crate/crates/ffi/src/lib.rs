//! C ABI over `optapprox`.
//!
//! Objects cross the boundary as opaque handles created by `oa_*_new` and
//! released by the matching `oa_*_free`. Every fallible call returns an
//! [`OaStatus`]; on failure a description is available from
//! [`oa_last_error_message`] on the same thread. Output arrays are caller
//! allocated: pass their capacity and receive the required length, with
//! `OA_STATUS_BUFFER_TOO_SMALL` returned when the capacity is insufficient.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use optapprox::approx::optimal_approximant_with;
use optapprox::extremal::rayleigh_lower_bound;
use optapprox::series::materialize;
use optapprox::zeros::{degree_one_zero, find_roots};
use optapprox::{Error, FunctionSpec, OptimalApproximant, SolverChoice, SpaceParam, TaylorSeries1D};

/// Truncation degree used for non-polynomial specifications without one.
pub const OA_DEFAULT_TRUNCATION: usize = 256;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidSpec = 3,
    ZeroFunction = 4,
    VanishesAtOrigin = 5,
    NotPositiveDefinite = 6,
    NonConvergence = 7,
    NumericalMismatch = 8,
    NoZero = 9,
    BufferTooSmall = 10,
    Panic = 11,
    Internal = 12,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OaSolver {
    Auto = 0,
    Cholesky = 1,
    Levinson = 2,
}

/// A truncated Taylor series.
pub struct OaSeries(TaylorSeries1D);

/// An optimal approximant together with its diagnostics.
pub struct OaApproximant(OptimalApproximant);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> OaStatus {
    match err {
        Error::InvalidArgument(_) | Error::NotToeplitz(_) | Error::NotSwapInvariant => OaStatus::InvalidArgument,
        Error::InvalidSpec(_) | Error::MissingTruncation(_) | Error::Json(_) => OaStatus::InvalidSpec,
        Error::ZeroFunction => OaStatus::ZeroFunction,
        Error::VanishesAtOrigin => OaStatus::VanishesAtOrigin,
        Error::NotPositiveDefinite { .. } => OaStatus::NotPositiveDefinite,
        Error::NonConvergence { .. } => OaStatus::NonConvergence,
        Error::DistanceMismatch { .. } | Error::OracleMismatch(_) => OaStatus::NumericalMismatch,
        Error::ConstantPolynomial | Error::NoDegreeOneZero => OaStatus::NoZero,
        Error::Csv(_) | Error::Io(_) => OaStatus::Internal,
    }
}

struct Failure(OaStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(OaStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> OaStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => OaStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_owned());
            set_last_error(format!("panic: {msg}"));
            OaStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Copies complex values into split real/imaginary buffers.
unsafe fn write_complex(
    values: &[Complex64],
    re: *mut f64,
    im: *mut f64,
    capacity: usize,
    len_out: *mut usize,
) -> Result<(), Failure> {
    write_out(len_out, values.len(), "len_out")?;
    if capacity < values.len() {
        return Err(Failure(
            OaStatus::BufferTooSmall,
            format!("need {} entries, capacity is {capacity}", values.len()),
        ));
    }
    if values.is_empty() {
        return Ok(());
    }
    if re.is_null() || im.is_null() {
        return Err(null("output buffer"));
    }
    for (k, v) in values.iter().enumerate() {
        re.add(k).write(v.re);
        im.add(k).write(v.im);
    }
    Ok(())
}

fn space(alpha: f64) -> Result<SpaceParam, Failure> {
    Ok(SpaceParam::new(alpha)?)
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn oa_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn oa_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a series from `len` coefficients. `im` may be null for real input.
///
/// # Safety
/// `re` (and `im` when non-null) must point to `len` readable doubles and
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oa_series_new(re: *const f64, im: *const f64, len: usize, out: *mut *mut OaSeries) -> OaStatus {
    guard(|| {
        if len > 0 && re.is_null() {
            return Err(null("re"));
        }
        let coeffs = (0..len)
            .map(|k| Complex64::new(*re.add(k), if im.is_null() { 0.0 } else { *im.add(k) }))
            .collect();
        let series = TaylorSeries1D::new(coeffs)?;
        write_out(out, Box::into_raw(Box::new(OaSeries(series))), "out")
    })
}

/// Creates a series from a JSON function specification. Non-polynomial
/// specifications without their own truncation use `truncation`, or
/// [`OA_DEFAULT_TRUNCATION`] when it is 0.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn oa_series_from_json(json: *const c_char, truncation: usize, out: *mut *mut OaSeries) -> OaStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Failure(OaStatus::InvalidSpec, format!("json is not UTF-8: {e}")))?;
        let degree = if truncation == 0 { OA_DEFAULT_TRUNCATION } else { truncation };
        let spec = FunctionSpec::from_json(text)?.or_truncation(degree);
        let series = materialize(&spec)?;
        write_out(out, Box::into_raw(Box::new(OaSeries(series))), "out")
    })
}

/// Releases a series. Null is ignored.
///
/// # Safety
/// `series` must come from `oa_series_new`/`oa_series_from_json` and not be
/// freed twice.
#[no_mangle]
pub unsafe extern "C" fn oa_series_free(series: *mut OaSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Number of stored coefficients, 0 for null.
///
/// # Safety
/// `series` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn oa_series_len(series: *const OaSeries) -> usize {
    series.as_ref().map_or(0, |s| s.0.len())
}

/// Computes the optimal approximant of degree `degree` to `1/f` in `D_alpha`.
///
/// # Safety
/// `series` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn oa_approximant_new(
    series: *const OaSeries,
    degree: usize,
    alpha: f64,
    solver: OaSolver,
    out: *mut *mut OaApproximant,
) -> OaStatus {
    guard(|| {
        let f = deref(series, "series")?;
        let choice = match solver {
            OaSolver::Auto => SolverChoice::Auto,
            OaSolver::Cholesky => SolverChoice::Cholesky,
            OaSolver::Levinson => SolverChoice::Levinson,
        };
        let a = optimal_approximant_with(&f.0, degree, space(alpha)?, choice)?;
        write_out(out, Box::into_raw(Box::new(OaApproximant(a))), "out")
    })
}

/// Releases an approximant. Null is ignored.
///
/// # Safety
/// `approx` must come from `oa_approximant_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn oa_approximant_free(approx: *mut OaApproximant) {
    if !approx.is_null() {
        drop(Box::from_raw(approx));
    }
}

/// Requested degree of the approximant, 0 for null.
///
/// # Safety
/// `approx` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn oa_approximant_degree(approx: *const OaApproximant) -> usize {
    approx.as_ref().map_or(0, |a| a.0.n)
}

/// Copies the `degree + 1` coefficients into `re`/`im`.
///
/// # Safety
/// `approx` must be a live handle, `re` and `im` must hold `capacity`
/// doubles and `len_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oa_approximant_coeffs(
    approx: *const OaApproximant,
    re: *mut f64,
    im: *mut f64,
    capacity: usize,
    len_out: *mut usize,
) -> OaStatus {
    guard(|| write_complex(deref(approx, "approx")?.0.coeffs(), re, im, capacity, len_out))
}

/// Squared distance `‖p f − 1‖²`.
///
/// # Safety
/// `approx` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn oa_approximant_dist_sq(approx: *const OaApproximant, out: *mut f64) -> OaStatus {
    guard(|| write_out(out, deref(approx, "approx")?.0.dist_sq, "out"))
}

/// JSON rendering of the approximant. Free the result with [`oa_string_free`].
///
/// # Safety
/// `approx` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn oa_approximant_to_json(approx: *const OaApproximant, out: *mut *mut c_char) -> OaStatus {
    guard(|| {
        let json = deref(approx, "approx")?.0.to_json()?;
        let s = CString::new(json).map_err(|e| Failure(OaStatus::Internal, e.to_string()))?;
        write_out(out, s.into_raw(), "out")
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn oa_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Zeros of the approximant, one per unit of effective degree.
///
/// # Safety
/// Same contract as [`oa_approximant_coeffs`].
#[no_mangle]
pub unsafe extern "C" fn oa_approximant_zeros(
    approx: *const OaApproximant,
    re: *mut f64,
    im: *mut f64,
    capacity: usize,
    len_out: *mut usize,
) -> OaStatus {
    guard(|| {
        let roots = find_roots(&deref(approx, "approx")?.0.p)?.roots;
        write_complex(&roots, re, im, capacity, len_out)
    })
}

/// Zero `‖z f‖² / ⟨f, z f⟩` of the degree-one approximant.
///
/// # Safety
/// `series` must be a live handle and `re_out`, `im_out` writable.
#[no_mangle]
pub unsafe extern "C" fn oa_degree_one_zero(series: *const OaSeries, alpha: f64, re_out: *mut f64, im_out: *mut f64) -> OaStatus {
    guard(|| {
        let z = degree_one_zero(&deref(series, "series")?.0, space(alpha)?)?;
        write_out(re_out, z.re, "re_out")?;
        write_out(im_out, z.im, "im_out")
    })
}

/// Best Bergman-space extremal quotient over polynomials of degree at most
/// `degree`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oa_extremal_lambda(degree: usize, out: *mut f64) -> OaStatus {
    guard(|| write_out(out, rayleigh_lower_bound(degree)?.lambda, "out"))
}
