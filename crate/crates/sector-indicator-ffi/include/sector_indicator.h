#ifndef SECTOR_INDICATOR_H
#define SECTOR_INDICATOR_H

/* Generated by cbindgen from sector-indicator-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of a fallible call.
 */
typedef enum SiStatus {
  SI_STATUS_OK = 0,
  /**
   * Malformed argument: bad identifier, angle outside range, null pointer.
   */
  SI_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Structurally valid input outside the mathematical domain.
   */
  SI_STATUS_DOMAIN_ERROR = 2,
  /**
   * The computation could not be certified within budget.
   */
  SI_STATUS_NUMERIC_ERROR = 3,
  /**
   * Result exceeds floating-point range; use the log-magnitude channel.
   */
  SI_STATUS_OVERFLOW = 4,
} SiStatus;

/**
 * A catalog function together with its growth envelope.
 */
typedef struct SiFunction SiFunction;

/**
 * Concatenated Laplace transform handle.
 */
typedef struct SiTransform SiTransform;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version string of the underlying library; static storage, do not free.
 */
const char *si_version(void);

/**
 * Message of the most recent error on this thread, or null when none.
 * The caller owns the returned string; release it with [`si_string_free`].
 */
char *si_last_error_message(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must be a pointer previously returned by [`si_last_error_message`]
 * (or null) that has not been freed yet.
 */
void si_string_free(char *s);

/**
 * Build a catalog function: `exp:a_re,a_im,b_re,b_im` or `cossqrt` on the
 * sector pair (`alpha1`, `alpha2`). Returns null on failure (see
 * [`si_last_error_message`]).
 *
 * # Safety
 * `id` must point to a valid NUL-terminated string.
 */
struct SiFunction *si_function_new(const char *id, double alpha1, double alpha2);

/**
 * Release a function handle.
 *
 * # Safety
 * `f` must come from [`si_function_new`] and not be freed twice.
 */
void si_function_free(struct SiFunction *f);

/**
 * Evaluate the function at a point of the closed sector product.
 *
 * # Safety
 * `f` must be a live handle; `out_re` and `out_im` must be writable.
 */
enum SiStatus si_function_eval(const struct SiFunction *f,
                               double z1_re,
                               double z1_im,
                               double z2_re,
                               double z2_im,
                               double *out_re,
                               double *out_im);

/**
 * Exact `ln |f|` in polar coordinates; overflow-safe for large radii.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum SiStatus si_function_log_magnitude(const struct SiFunction *f,
                                        double r1,
                                        double theta1,
                                        double r2,
                                        double theta2,
                                        double *out);

/**
 * Componentwise convexity bound for `n` coordinates; writes `n` values.
 *
 * # Safety
 * The four input arrays and `out_c` must each hold `n` doubles.
 */
enum SiStatus si_convexity_bound(size_t n,
                                 const double *alphas,
                                 const double *thetas,
                                 const double *a_plus,
                                 const double *a_minus,
                                 double *out_c);

/**
 * One-variable trigonometric-convexity value.
 *
 * # Safety
 * `out` must be writable.
 */
enum SiStatus si_trig_convex_bound_1d(double alpha1,
                                      double alpha2,
                                      double alpha,
                                      double h1,
                                      double h2,
                                      double *out);

/**
 * Corner of the complement wedge for one coordinate.
 *
 * # Safety
 * `out_re` and `out_im` must be writable.
 */
enum SiStatus si_corner_point(double alpha,
                              double a_plus,
                              double a_minus,
                              double *out_re,
                              double *out_im);

/**
 * Support value `-Re(q e^{i theta})`.
 */
double si_support_value(double q_re, double q_im, double theta);

/**
 * Build a transform for a catalog function with default quadrature settings.
 *
 * # Safety
 * `f` must be a live function handle.
 */
struct SiTransform *si_transform_new(const struct SiFunction *f);

/**
 * Release a transform handle.
 *
 * # Safety
 * `t` must come from [`si_transform_new`] and not be freed twice.
 */
void si_transform_free(struct SiTransform *t);

/**
 * Evaluate the transform at `(omega1, omega2)` with automatic branch
 * selection; writes the value and its certified error estimate.
 *
 * # Safety
 * `t` must be a live handle; the out-pointers must be writable.
 */
enum SiStatus si_transform_eval(const struct SiTransform *t,
                                double w1_re,
                                double w1_im,
                                double w2_re,
                                double w2_im,
                                double *out_re,
                                double *out_im,
                                double *out_err);

/**
 * Maximum pairwise deviation of the admissible branch definitions.
 *
 * # Safety
 * `t` must be a live handle; `out_dev` must be writable.
 */
enum SiStatus si_transform_branch_consistency(const struct SiTransform *t,
                                              double w1_re,
                                              double w1_im,
                                              double w2_re,
                                              double w2_im,
                                              double *out_dev);

/**
 * Reconstruct the source by contour inversion at `(z1, z2)` using the
 * default contour plan for the source's type constants.
 *
 * # Safety
 * `t` must be a live handle; the out-pointers must be writable.
 */
enum SiStatus si_invert(const struct SiTransform *t,
                        double z1_re,
                        double z1_im,
                        double z2_re,
                        double z2_im,
                        double *out_re,
                        double *out_im,
                        double *out_err);

/**
 * Growth-set membership of the slope vector `(nu1, nu2)` along the ray pair
 * `(theta1, theta2)`, on the default radius grid.
 *
 * # Safety
 * `f` must be a live handle; the out-pointers must be writable.
 */
enum SiStatus si_membership_test(const struct SiFunction *f,
                                 double theta1,
                                 double theta2,
                                 double nu1,
                                 double nu2,
                                 bool *out_accepted,
                                 double *out_slope,
                                 double *out_offset);

/**
 * Directional growth rate of the function's first-variable section at
 * `z2 = 0`, estimated on the default grid.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum SiStatus si_indicator_section(const struct SiFunction *f, double theta, double *out);

/**
 * Borel transform of a truncated series at `omega`; also reports the
 * truncation-tail estimate.
 *
 * # Safety
 * `coeff_re` and `coeff_im` must hold `n` doubles; out-pointers writable.
 */
enum SiStatus si_borel_eval(const double *coeff_re,
                            const double *coeff_im,
                            size_t n,
                            double type_radius,
                            double omega_re,
                            double omega_im,
                            double *out_re,
                            double *out_im,
                            double *out_tail);

/**
 * Circle reconstruction of the series' function at `z` from its Borel
 * transform.
 *
 * # Safety
 * `coeff_re` and `coeff_im` must hold `n` doubles; out-pointers writable.
 */
enum SiStatus si_polya_reconstruct(const double *coeff_re,
                                   const double *coeff_im,
                                   size_t n,
                                   double type_radius,
                                   double center_re,
                                   double center_im,
                                   double radius,
                                   double z_re,
                                   double z_im,
                                   double *out_re,
                                   double *out_im,
                                   double *out_err);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SECTOR_INDICATOR_H */
