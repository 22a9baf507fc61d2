#ifndef OPTAPPROX_H
#define OPTAPPROX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Truncation degree used for non-polynomial specifications without one.
 */
#define OA_DEFAULT_TRUNCATION 256

typedef enum OaSolver {
  OA_SOLVER_AUTO = 0,
  OA_SOLVER_CHOLESKY = 1,
  OA_SOLVER_LEVINSON = 2,
} OaSolver;

typedef enum OaStatus {
  OA_STATUS_OK = 0,
  OA_STATUS_NULL_POINTER = 1,
  OA_STATUS_INVALID_ARGUMENT = 2,
  OA_STATUS_INVALID_SPEC = 3,
  OA_STATUS_ZERO_FUNCTION = 4,
  OA_STATUS_VANISHES_AT_ORIGIN = 5,
  OA_STATUS_NOT_POSITIVE_DEFINITE = 6,
  OA_STATUS_NON_CONVERGENCE = 7,
  OA_STATUS_NUMERICAL_MISMATCH = 8,
  OA_STATUS_NO_ZERO = 9,
  OA_STATUS_BUFFER_TOO_SMALL = 10,
  OA_STATUS_PANIC = 11,
  OA_STATUS_INTERNAL = 12,
} OaStatus;

/*
 An optimal approximant together with its diagnostics.
 */
typedef struct OaApproximant OaApproximant;

/*
 A truncated Taylor series.
 */
typedef struct OaSeries OaSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or null. The pointer is
 valid until the next failing call on the same thread.
 */
const char *oa_last_error_message(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *oa_version(void);

/*
 Creates a series from `len` coefficients. `im` may be null for real input.

 # Safety
 `re` (and `im` when non-null) must point to `len` readable doubles and
 `out` must be writable.
 */
enum OaStatus oa_series_new(const double *re, const double *im, size_t len, struct OaSeries **out);

/*
 Creates a series from a JSON function specification. Non-polynomial
 specifications without their own truncation use `truncation`, or
 [`OA_DEFAULT_TRUNCATION`] when it is 0.

 # Safety
 `json` must be a NUL-terminated string and `out` writable.
 */
enum OaStatus oa_series_from_json(const char *json, size_t truncation, struct OaSeries **out);

/*
 Releases a series. Null is ignored.

 # Safety
 `series` must come from `oa_series_new`/`oa_series_from_json` and not be
 freed twice.
 */
void oa_series_free(struct OaSeries *series);

/*
 Number of stored coefficients, 0 for null.

 # Safety
 `series` must be null or a live handle.
 */
size_t oa_series_len(const struct OaSeries *series);

/*
 Computes the optimal approximant of degree `degree` to `1/f` in `D_alpha`.

 # Safety
 `series` must be a live handle and `out` writable.
 */
enum OaStatus oa_approximant_new(const struct OaSeries *series,
                                 size_t degree,
                                 double alpha,
                                 enum OaSolver solver,
                                 struct OaApproximant **out);

/*
 Releases an approximant. Null is ignored.

 # Safety
 `approx` must come from `oa_approximant_new` and not be freed twice.
 */
void oa_approximant_free(struct OaApproximant *approx);

/*
 Requested degree of the approximant, 0 for null.

 # Safety
 `approx` must be null or a live handle.
 */
size_t oa_approximant_degree(const struct OaApproximant *approx);

/*
 Copies the `degree + 1` coefficients into `re`/`im`.

 # Safety
 `approx` must be a live handle, `re` and `im` must hold `capacity`
 doubles and `len_out` must be writable.
 */
enum OaStatus oa_approximant_coeffs(const struct OaApproximant *approx,
                                    double *re,
                                    double *im,
                                    size_t capacity,
                                    size_t *len_out);

/*
 Squared distance `‖p f − 1‖²`.

 # Safety
 `approx` must be a live handle and `out` writable.
 */
enum OaStatus oa_approximant_dist_sq(const struct OaApproximant *approx, double *out);

/*
 JSON rendering of the approximant. Free the result with [`oa_string_free`].

 # Safety
 `approx` must be a live handle and `out` writable.
 */
enum OaStatus oa_approximant_to_json(const struct OaApproximant *approx, char **out);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not be freed twice.
 */
void oa_string_free(char *s);

/*
 Zeros of the approximant, one per unit of effective degree.

 # Safety
 Same contract as [`oa_approximant_coeffs`].
 */
enum OaStatus oa_approximant_zeros(const struct OaApproximant *approx,
                                   double *re,
                                   double *im,
                                   size_t capacity,
                                   size_t *len_out);

/*
 Zero `‖z f‖² / ⟨f, z f⟩` of the degree-one approximant.

 # Safety
 `series` must be a live handle and `re_out`, `im_out` writable.
 */
enum OaStatus oa_degree_one_zero(const struct OaSeries *series,
                                 double alpha,
                                 double *re_out,
                                 double *im_out);

/*
 Best Bergman-space extremal quotient over polynomials of degree at most
 `degree`.

 # Safety
 `out` must be writable.
 */
enum OaStatus oa_extremal_lambda(size_t degree, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OPTAPPROX_H */
