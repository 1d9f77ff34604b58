#ifndef OPTOMECH_H
#define OPTOMECH_H

/* Generated by cbindgen. Do not edit. */

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

typedef enum OmStatus {
  OM_STATUS_OK = 0,
  OM_STATUS_NULL_POINTER = 1,
  OM_STATUS_INVALID_ARGUMENT = 2,
  OM_STATUS_INVALID_PARAMETER = 3,
  OM_STATUS_NO_STABLE_BRANCH = 4,
  OM_STATUS_NO_STATIONARY_STATE = 5,
  OM_STATUS_NOT_APPLICABLE = 6,
  OM_STATUS_COMPUTATION = 7,
  OM_STATUS_BUFFER_TOO_SMALL = 8,
  OM_STATUS_PANIC = 9,
} OmStatus;

typedef enum OmCriticalMethod {
  OM_CRITICAL_METHOD_AUTO = 0,
  OM_CRITICAL_METHOD_EXACT = 1,
  OM_CRITICAL_METHOD_PERTURBATIVE = 2,
  OM_CRITICAL_METHOD_HARMONIC = 3,
} OmCriticalMethod;

typedef enum OmFluctuationMethod {
  OM_FLUCTUATION_METHOD_LYAPUNOV = 0,
  OM_FLUCTUATION_METHOD_SPECTRAL = 1,
} OmFluctuationMethod;

/**
 * Opaque parameter set.
 */
typedef struct OmSystem OmSystem;

/**
 * One steady-state branch; normalized units (ω_m = 1).
 */
typedef struct OmBranch {
  double beta;
  double alpha;
  double intensity;
  double eff_detuning;
  double max_real;
  bool stable;
  bool marginal;
  bool beta_large;
  bool duffing_small;
} OmBranch;

typedef struct OmCritical {
  double beta;
  /**
   * units of ω_m
   */
  double detuning;
  double eps2;
  /**
   * W
   */
  double power;
  /**
   * 1 exact, 2 perturbative, 3 harmonic
   */
  int32_t method;
  bool trusted;
} OmCritical;

typedef struct OmFluctuations {
  uintptr_t branch;
  double var_q;
  double var_p;
  double n_eff;
  /**
   * K
   */
  double t_eff;
  /**
   * dB
   */
  double d_q;
  /**
   * dB
   */
  double d_p;
  double eta;
  double squeeze;
} OmFluctuations;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call on the same thread.
 */
const char *om_last_error(void);

/**
 * Default parameter set (bare cavity, 3 mW, ω_m/2π = 5 MHz).
 */
struct OmSystem *om_system_new_default(void);

/**
 * Builds a system from a JSON object of parameter fields, overlaid on the defaults.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum OmStatus om_system_from_json(const char *json, struct OmSystem **out);

/**
 * # Safety
 * `h` must come from this library and not be used afterwards. Null is ignored.
 */
void om_system_free(struct OmSystem *h);

/**
 * Sets one parameter by key, e.g. "detuning_over_omegam" or "input_power_mw".
 *
 * # Safety
 * `h` must be a live handle and `key` a NUL-terminated string.
 */
enum OmStatus om_system_set(struct OmSystem *h, const char *key, double value);

/**
 * # Safety
 * `h` must be a live handle, `key` a NUL-terminated string, `out` writable.
 */
enum OmStatus om_system_get(const struct OmSystem *h, const char *key, double *out);

/**
 * Writes up to `cap` branches (ascending β) into `out` and their total
 * count into `count`. With `out` null only the count is written.
 * Returns `BufferTooSmall` when `cap` is less than the count.
 *
 * # Safety
 * `h` must be a live handle; `out` must hold `cap` elements or be null; `count` writable.
 */
enum OmStatus om_steady_state(const struct OmSystem *h,
                              struct OmBranch *out,
                              uintptr_t cap,
                              uintptr_t *count);

/**
 * Critical point of the multistability region.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum OmStatus om_critical(const struct OmSystem *h,
                          enum OmCriticalMethod method,
                          struct OmCritical *out);

/**
 * Fluctuations on branch `branch`; a negative index picks the brightest stable branch.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum OmStatus om_fluctuations(const struct OmSystem *h,
                              intptr_t branch,
                              enum OmFluctuationMethod method,
                              struct OmFluctuations *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OPTOMECH_H */
