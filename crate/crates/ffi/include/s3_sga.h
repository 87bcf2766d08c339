#ifndef S3_SGA_H
#define S3_SGA_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Number of doubles per trajectory sample: t, x1..x4, p1..p4, H, J12..J34.
 */
#define S3_SAMPLE_WIDTH 16

/*
 Result code of every call.
 */
typedef enum S3Status {
  S3_STATUS_OK = 0,
  /*
   The computation ran but at least one check failed.
   */
  S3_STATUS_CHECK_FAILED = 1,
  S3_STATUS_INVALID_ARGUMENT = 2,
  S3_STATUS_NULL_POINTER = 3,
  S3_STATUS_OFF_CONSTRAINT_SURFACE = 4,
  S3_STATUS_UNDER_RESOLVED_STEP = 5,
  S3_STATUS_NUMERICAL = 6,
  S3_STATUS_INTERNAL = 7,
} S3Status;

/*
 Truncated quantum representation.
 */
typedef struct S3Representation S3Representation;

/*
 Sampled classical trajectory.
 */
typedef struct S3Trajectory S3Trajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or NULL. Owned by the library.
 */
const char *s3_last_error(void);

/*
 Releases a string returned by this library. NULL is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void s3_string_free(char *s);

/*
 `f(h) = 2 Γ(h/2 + 3/4) / Γ(h/2 + 1/4)`.
 */
double s3_f_gamma(double h);

/*
 Builds the representation on harmonic polynomials of degree ≤ `max_level`.

 # Safety
 `out` must be a valid pointer.
 */
enum S3Status s3_representation_new(size_t max_level, struct S3Representation **out);

/*
 # Safety
 `rep` must come from `s3_representation_new` and not have been freed. NULL is ignored.
 */
void s3_representation_free(struct S3Representation *rep);

/*
 Dimension of the truncated space, or 0 for NULL.

 # Safety
 `rep` must be NULL or a live handle.
 */
size_t s3_representation_dim(const struct S3Representation *rep);

/*
 Measured Hamiltonian eigenvalue of each level `0..=N`, written to `out[0..=N]`.
 Returns `CheckFailed` if a level is not `n(n+2)` with multiplicity `(n+1)²`.

 # Safety
 `rep` must be a live handle and `out` must hold `len` doubles.
 */
enum S3Status s3_spectrum(const struct S3Representation *rep, double *out, size_t len);

/*
 Runs the verification suite with shift `c` and returns the JSON report in
 `*out_json`. The report is produced whether or not the checks pass.

 # Safety
 `rep` must be a live handle and `out_json` a valid pointer.
 */
enum S3Status s3_verify_json(const struct S3Representation *rep, double c, char **out_json);

/*
 Closed-form state at time `t` from `(x0, p0)`, written to `x_out`, `p_out`.

 # Safety
 All pointers must reference 4 doubles.
 */
enum S3Status s3_analytic_solution(const double *x0,
                                   const double *p0,
                                   double t,
                                   double *x_out,
                                   double *p_out);

/*
 Integrates from `(x0, p0)` to `t_end` with RK4 step `dt`, or samples the
 closed form when `analytic` is nonzero. The state must lie on the
 constraint surface.

 # Safety
 `x0`, `p0` must reference 4 doubles and `out` must be a valid pointer.
 */
enum S3Status s3_trajectory_new(const double *x0,
                                const double *p0,
                                double t_end,
                                double dt,
                                int32_t analytic,
                                struct S3Trajectory **out);

/*
 # Safety
 `traj` must come from `s3_trajectory_new` and not have been freed. NULL is ignored.
 */
void s3_trajectory_free(struct S3Trajectory *traj);

/*
 Number of samples, or 0 for NULL.

 # Safety
 `traj` must be NULL or a live handle.
 */
size_t s3_trajectory_len(const struct S3Trajectory *traj);

/*
 Writes sample `k` as `S3_SAMPLE_WIDTH` doubles in CSV column order.

 # Safety
 `traj` must be a live handle and `out` must hold `S3_SAMPLE_WIDTH` doubles.
 */
enum S3Status s3_trajectory_sample(const struct S3Trajectory *traj, size_t k, double *out);

/*
 Checks the constants of motion and returns the JSON report. A degenerate
 (`H = 0`) trajectory reports status `degenerate` and returns `Ok`.

 # Safety
 `traj` must be a live handle and `out_json` a valid pointer.
 */
enum S3Status s3_trajectory_check_json(const struct S3Trajectory *traj, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* S3_SGA_H */
