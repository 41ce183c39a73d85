#ifndef PREMIA_H
#define PREMIA_H

/* Generated from the premia-ffi crate by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every ABI call.
 */
typedef enum {
  PREMIA_OK = 0,
  PREMIA_NULL_POINTER = 1,
  PREMIA_INVALID_ARGUMENT = 2,
  PREMIA_PARSE = 3,
  PREMIA_NUMERIC = 4,
  PREMIA_UNBOUNDED = 5,
} premia_status;

/**
 * Opaque distortion density.
 */
typedef struct premia_distortion premia_distortion;

/**
 * Opaque sorted loss sample.
 */
typedef struct premia_sample premia_sample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *premia_last_error_message(void);

/**
 * Build a sample handle from `len` finite loss values.
 *
 * # Safety
 * `values` must point to `len` readable doubles and `out` must be
 * writable. The handle must be released with `premia_sample_free`.
 */
premia_status premia_sample_new(const double *values, size_t len, premia_sample **out);

/**
 * Release a sample handle. Null is a no-op.
 *
 * # Safety
 * `sample` must be a handle from `premia_sample_new`, not yet freed.
 */
void premia_sample_free(premia_sample *sample);

/**
 * Parse a distortion from its JSON description, e.g.
 * `{"kind":"avar","alpha":0.9}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` must be writable.
 * The handle must be released with `premia_distortion_free`.
 */
premia_status premia_distortion_from_json(const char *json, premia_distortion **out);

/**
 * Release a distortion handle. Null is a no-op.
 *
 * # Safety
 * `distortion` must be a handle from `premia_distortion_from_json`, not
 * yet freed.
 */
void premia_distortion_free(premia_distortion *distortion);

/**
 * Premium of the sample under the distortion.
 *
 * # Safety
 * All pointers must be valid; `out` must be writable.
 */
premia_status premia_distortion_premium(const premia_sample *sample,
                                        const premia_distortion *distortion,
                                        double *out);

/**
 * Left-continuous quantile of the sample at probability `level`.
 *
 * # Safety
 * All pointers must be valid; `out` must be writable.
 */
premia_status premia_quantile(const premia_sample *sample, double level, double *out);

/**
 * Transport distance of the given order between two samples.
 *
 * # Safety
 * All pointers must be valid; `out` must be writable.
 */
premia_status premia_wasserstein(const premia_sample *a,
                                 const premia_sample *b,
                                 double order,
                                 double *out);

/**
 * Worst-case premium over a transport ball of radius `epsilon` and
 * order `order` around the sample. `out_attainment` receives 0 when a
 * worst case exists, 1 when the value is only a supremum, 2 when it is
 * infinite (then `out_value` is +inf).
 *
 * # Safety
 * All pointers must be valid; `out_value` and `out_attainment` must be
 * writable.
 */
premia_status premia_robust_premium(const premia_sample *sample,
                                    const premia_distortion *distortion,
                                    double epsilon,
                                    double order,
                                    double *out_value,
                                    int *out_attainment);

/**
 * Fit a nondecreasing step density on `subintervals` pieces to observed
 * prices. `losses` is row-major with `contracts` rows of `sample_size`
 * losses; `prices` has one price per contract. Writes `subintervals`
 * coefficients to `out_lambda` and the squared residual to
 * `out_objective`.
 *
 * # Safety
 * `losses` must hold `contracts * sample_size` doubles, `prices` must
 * hold `contracts` doubles, `out_lambda` must have room for
 * `subintervals` doubles, and `out_objective` must be writable.
 */
premia_status premia_identify_step(const double *losses,
                                   size_t contracts,
                                   size_t sample_size,
                                   const double *prices,
                                   size_t subintervals,
                                   double *out_lambda,
                                   double *out_objective);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PREMIA_H */
