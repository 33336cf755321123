#ifndef VPMETRO_H
#define VPMETRO_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  VPM_STATUS_OK = 0,
  VPM_STATUS_NULL_POINTER = 1,
  VPM_STATUS_CONFIG = 2,
  VPM_STATUS_NUMERIC = 3,
  VPM_STATUS_PANIC = 4,
} VpmStatus;

typedef enum {
  VPM_NOISE_KIND_DEPOLARIZING = 0,
  VPM_NOISE_KIND_DEPHASING = 1,
  /**
   * Uses `p_x`, `p_y`, `p_z`; `delta` is ignored.
   */
  VPM_NOISE_KIND_CUSTOM = 2,
} VpmNoiseKind;

typedef enum {
  VPM_SCHEME_NOISY = 0,
  VPM_SCHEME_QEC = 1,
  VPM_SCHEME_VP2 = 2,
  VPM_SCHEME_VP3 = 3,
} VpmScheme;

typedef enum {
  VPM_ACCOUNTING_COPIES = 0,
  VPM_ACCOUNTING_SHOTS = 1,
} VpmAccounting;

/**
 * Opaque probe handle with its precomputed response curve.
 */
typedef struct VpmProbe VpmProbe;

/**
 * Single-qubit Pauli noise applied to every qubit.
 */
typedef struct {
  VpmNoiseKind kind;
  double delta;
  double p_x;
  double p_y;
  double p_z;
} VpmNoise;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. Owned by the library.
 */
const char *vpm_last_error(void);

/**
 * Creates a handle for a built-in probe ("ghz5", "twin5", "steane7").
 *
 * # Safety
 * `name` must be a valid C string and `out` a writable pointer.
 */
VpmStatus vpm_probe_new(const char *name, VpmProbe **out);

/**
 * Creates a handle from a JSON probe definition (a single object).
 *
 * # Safety
 * `json` must be a valid C string and `out` a writable pointer.
 */
VpmStatus vpm_probe_from_json(const char *json, VpmProbe **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `probe` must come from a constructor above and not be used afterwards.
 */
void vpm_probe_free(VpmProbe *probe);

/**
 * # Safety
 * `probe` must be a live handle or null.
 */
uintptr_t vpm_probe_num_qubits(const VpmProbe *probe);

/**
 * Lower and upper end of the phase domain.
 *
 * # Safety
 * `probe` must be a live handle; `lo` and `hi` writable.
 */
VpmStatus vpm_probe_domain(const VpmProbe *probe, double *lo, double *hi);

/**
 * Ideal response `<A>` at phase `phi`.
 *
 * # Safety
 * `probe` must be a live handle and `out` writable.
 */
VpmStatus vpm_mu(const VpmProbe *probe, double phi, double *out);

/**
 * Phase estimate for a measured mean `abar`, clamped to the domain.
 *
 * # Safety
 * `probe` must be a live handle and `out` writable.
 */
VpmStatus vpm_invert_mu(const VpmProbe *probe, double abar, double *out);

/**
 * Asymptotic estimator bias in radians.
 *
 * # Safety
 * `probe` must be a live handle, `noise` readable and `out` writable.
 */
VpmStatus vpm_bias(const VpmProbe *probe,
                   double phi,
                   const VpmNoise *noise,
                   VpmScheme scheme_id,
                   double *out);

/**
 * Theoretical estimator variance for a budget of `m` copies.
 *
 * # Safety
 * `probe` must be a live handle, `noise` readable and `out` writable.
 */
VpmStatus vpm_stat_error(const VpmProbe *probe,
                         double phi,
                         const VpmNoise *noise,
                         VpmScheme scheme_id,
                         uint64_t m,
                         VpmAccounting accounting,
                         double *out);

/**
 * Largest eigenvalue of the noisy state.
 *
 * # Safety
 * `probe` must be a live handle, `noise` readable and `out` writable.
 */
VpmStatus vpm_dominant_eigenvalue(const VpmProbe *probe,
                                  double phi,
                                  const VpmNoise *noise,
                                  double *out);

/**
 * Noise strength whose dominant eigenvalue at `phi_ref` equals `target`.
 *
 * # Safety
 * `probe` must be a live handle and `out` writable.
 */
VpmStatus vpm_calibrate(const VpmProbe *probe,
                        VpmNoiseKind kind,
                        double phi_ref,
                        double target,
                        double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VPMETRO_H */
