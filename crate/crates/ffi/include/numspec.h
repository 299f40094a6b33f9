#ifndef NUMSPEC_H
#define NUMSPEC_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

/*
 Result codes. Input errors use 2 and numerical failures 4, matching the
 command-line exit codes.
 */
typedef enum NsStatus {
  NS_STATUS_OK = 0,
  NS_STATUS_INVALID_INPUT = 2,
  NS_STATUS_NUMERICAL = 4,
  NS_STATUS_NULL_POINTER = 5,
  /*
   The output buffer is too small; the required length was written.
   */
  NS_STATUS_BUFFER_TOO_SMALL = 6,
  NS_STATUS_PANIC = 7,
} NsStatus;

/*
 Opaque square complex matrix.
 */
typedef struct NsMatrix NsMatrix;

/*
 Opaque numerical-spectrum region together with its norm.
 */
typedef struct NsRegion NsRegion;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or null. The pointer
 stays valid until the next failing call on the same thread.
 */
const char *ns_last_error_message(void);

/*
 Creates an `n x n` matrix from row-major real and imaginary parts.
 `im` may be null for a real matrix.

 # Safety
 `re` (and `im` when non-null) must point to `n * n` doubles; `out` must
 be writable.
 */
enum NsStatus ns_matrix_new(uintptr_t n, const double *re, const double *im, struct NsMatrix **out);

/*
 # Safety
 `m` must come from [`ns_matrix_new`] and not be used afterwards.
 */
void ns_matrix_free(struct NsMatrix *m);

/*
 Sweeps the support function on `angles` uniform directions and builds
 the region.

 # Safety
 `m` must be a live matrix handle and `out` writable.
 */
enum NsStatus ns_region_build(const struct NsMatrix *m,
                              double p,
                              uintptr_t angles,
                              uint64_t seed,
                              struct NsRegion **out);

/*
 # Safety
 `r` must come from [`ns_region_build`] and not be used afterwards.
 */
void ns_region_free(struct NsRegion *r);

/*
 # Safety
 `r` must be a live region handle and `out` writable.
 */
enum NsStatus ns_region_radius(const struct NsRegion *r, double *out);

/*
 Counter-clockwise vertices of the outer polygon. Call with `capacity` 0
 to query the count.

 # Safety
 `out` must hold `2 * capacity` doubles; `count` must be writable.
 */
enum NsStatus ns_region_outer(const struct NsRegion *r,
                              double *out,
                              uintptr_t capacity,
                              uintptr_t *count);

/*
 Region as a JSON document. Release the string with [`ns_string_free`].

 # Safety
 `r` must be a live region handle and `out` writable.
 */
enum NsStatus ns_region_to_json(const struct NsRegion *r, char **out);

/*
 # Safety
 `s` must come from this library and not be used afterwards.
 */
void ns_string_free(char *s);

/*
 Logarithmic norm: closed form for `p` in {1, 2, inf}, the difference
 quotient otherwise.

 # Safety
 `m` must be a live matrix handle and `out` writable.
 */
enum NsStatus ns_lognorm(const struct NsMatrix *m, double p, double *out);

/*
 Checks the resolvent bound on the half plane `Re(e^{-iθ}λ) > ω` over a
 `distances x tangential` grid. A failed check is not an error: `pass`
 receives 0 and the call returns [`NsStatus::Ok`].

 # Safety
 `m` must be a live matrix handle; `worst_ratio` and `pass` writable.
 */
enum NsStatus ns_certify(const struct NsMatrix *m,
                         double p,
                         double theta,
                         double omega,
                         uintptr_t distances,
                         uintptr_t tangential,
                         double *worst_ratio,
                         int32_t *pass);

/*
 Eigenvalues in the order the solver returns them.

 # Safety
 `out` must hold `2 * capacity` doubles; `count` must be writable.
 */
enum NsStatus ns_eigenvalues(const struct NsMatrix *m,
                             double *out,
                             uintptr_t capacity,
                             uintptr_t *count);

/*
 Library version as a static NUL-terminated string.
 */
const char *ns_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NUMSPEC_H */
