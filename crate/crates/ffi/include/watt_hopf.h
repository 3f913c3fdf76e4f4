#ifndef WATT_HOPF_H
#define WATT_HOPF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WhStatus {
  WH_STATUS_OK = 0,
  WH_STATUS_NULL_POINTER = 1,
  WH_STATUS_DOMAIN = 2,
  WH_STATUS_CONVERGENCE = 3,
  WH_STATUS_NUMERICAL = 4,
  WH_STATUS_INVALID_ARGUMENT = 5,
  WH_STATUS_PANIC = 6,
} WhStatus;

/**
 * Opaque Hopf certificate.
 */
typedef struct WhCertificate WhCertificate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *wh_version(void);

/**
 * Message of the last failed call on this thread, or NULL. Free the result
 * with [`wh_string_free`].
 */
char *wh_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library.
 */
void wh_string_free(char *s);

/**
 * Critical damping `2 alpha beta^{3/2}`.
 *
 * # Safety
 * `out` must point to a writable `double`.
 */
enum WhStatus wh_critical_epsilon(double beta, double alpha, double *out);

/**
 * Closed-form first Lyapunov coefficient on the critical surface.
 *
 * # Safety
 * `out` must point to a writable `double`.
 */
enum WhStatus wh_l1_closed(double beta, double alpha, double *out);

/**
 * Closed-form second Lyapunov coefficient (meaningful where `l1 = 0`).
 *
 * # Safety
 * `out` must point to a writable `double`.
 */
enum WhStatus wh_l2_closed(double beta, double alpha, double *out);

/**
 * Newton search for the point where `l1 = l2 = 0`, from a seed.
 *
 * # Safety
 * `beta`, `alpha` and `epsilon` must point to writable doubles.
 */
enum WhStatus wh_locate_q(double beta_seed,
                          double alpha_seed,
                          double *beta,
                          double *alpha,
                          double *epsilon);

/**
 * Certificate at the Hopf point above `(beta, alpha)`. `exact_forms`
 * selects closed-form derivatives instead of jets.
 *
 * # Safety
 * `out` must point to a writable handle pointer.
 */
enum WhStatus wh_certificate_new(double beta,
                                 double alpha,
                                 bool exact_forms,
                                 struct WhCertificate **out);

/**
 * # Safety
 * `cert` must be NULL or a handle from [`wh_certificate_new`], freed once.
 */
void wh_certificate_free(struct WhCertificate *cert);

/**
 * `l1`, `l2`, `l3` and `omega0` into `out[0..4]`.
 *
 * # Safety
 * `cert` must be a live handle; `out` must hold 4 doubles.
 */
enum WhStatus wh_certificate_coefficients(const struct WhCertificate *cert, double *out);

/**
 * `G21`, `G32` or `G43` (`which` = 21, 32, 43) as `re`, `im`.
 *
 * # Safety
 * `cert` must be a live handle; `re`, `im` must be writable doubles.
 */
enum WhStatus wh_certificate_g(const struct WhCertificate *cert,
                               uint32_t which,
                               double *re,
                               double *im);

/**
 * A named vector (`"q"`, `"p"`, `"h11"` .. `"h33"`) as interleaved
 * `re, im` pairs; `len` must be at least `2 * dimension` (6 for the
 * governor).
 *
 * # Safety
 * `cert` must be a live handle, `name` a NUL-terminated string and `out`
 * must hold `len` doubles.
 */
enum WhStatus wh_certificate_vector(const struct WhCertificate *cert,
                                    const char *name,
                                    double *out,
                                    size_t len);

/**
 * Whether `l2` (`which` = 2) or `l3` (`which` = 3) was computed under the
 * vanishing of the lower coefficients, within tolerance.
 *
 * # Safety
 * `cert` must be a live handle; `out` a writable bool.
 */
enum WhStatus wh_certificate_strict(const struct WhCertificate *cert, uint32_t which, bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WATT_HOPF_H */
