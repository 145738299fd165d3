#ifndef LINDBLAD_LAB_H
#define LINDBLAD_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LindbladStatus {
  LINDBLAD_STATUS_OK = 0,
  LINDBLAD_STATUS_NULL_POINTER = 1,
  LINDBLAD_STATUS_INVALID_UTF8 = 2,
  LINDBLAD_STATUS_PARSE_ERROR = 3,
  LINDBLAD_STATUS_SCHEMA_ERROR = 4,
  LINDBLAD_STATUS_VALIDATION_ERROR = 5,
  LINDBLAD_STATUS_STEP_REJECTED = 6,
  LINDBLAD_STATUS_OUT_OF_RANGE = 7,
  LINDBLAD_STATUS_PANIC = 8,
} LindbladStatus;

typedef enum LindbladChannelKind {
  LINDBLAD_CHANNEL_KIND_UNITARY = 0,
  LINDBLAD_CHANNEL_KIND_DEPHASING = 1,
  LINDBLAD_CHANNEL_KIND_GENERAL = 2,
} LindbladChannelKind;

/**
 * Opaque model handle.
 */
typedef struct LindbladModelHandle LindbladModelHandle;

/**
 * Opaque trajectory handle.
 */
typedef struct LindbladTrajectoryHandle LindbladTrajectoryHandle;

/**
 * Observables recorded at one sample time.
 */
typedef struct LindbladObservables {
  double t;
  double purity;
  double purity_deviation;
  double renyi2;
  double vn_entropy;
} LindbladObservables;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer stays
 * valid until the next call into this library from the same thread.
 */
const char *lindblad_last_error_message(void);

/**
 * Builds a model from a JSON configuration (the `lindblad-lab` config
 * format); only the model part is kept.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum LindbladStatus lindblad_model_from_json(const char *json, struct LindbladModelHandle **out);

/**
 * Builds a time-independent model from `n_hamiltonians` Hermitian matrices
 * (summed) and `n_lindblad` Lindblad operators.
 *
 * # Safety
 * `hamiltonians` and `lindblad_ops` must hold the stated number of matrices
 * (each may be NULL when its count is zero); `out` must be valid.
 */
enum LindbladStatus lindblad_model_new(size_t dim,
                                       const double *hamiltonians,
                                       size_t n_hamiltonians,
                                       const double *lindblad_ops,
                                       size_t n_lindblad,
                                       struct LindbladModelHandle **out);

/**
 * # Safety
 * `model` must be NULL or a handle from this library that was not yet freed.
 */
void lindblad_model_free(struct LindbladModelHandle *model);

/**
 * # Safety
 * `model` must be a live handle and `out` a valid pointer.
 */
enum LindbladStatus lindblad_model_dim(const struct LindbladModelHandle *model, size_t *out);

/**
 * # Safety
 * `model` must be a live handle and `out` a valid pointer.
 */
enum LindbladStatus lindblad_model_classify(const struct LindbladModelHandle *model,
                                            enum LindbladChannelKind *out);

/**
 * `4 sum_k ||A_k||_F^2` at time `t`.
 *
 * # Safety
 * `model` must be a live handle and `out` a valid pointer.
 */
enum LindbladStatus lindblad_hilbert_rate(const struct LindbladModelHandle *model,
                                          double t,
                                          double *out);

/**
 * Spectral norm of the skew-Hermitian part of the generator at time `t`.
 *
 * # Safety
 * `model` must be a live handle and `out` a valid pointer.
 */
enum LindbladStatus lindblad_liouville_rate(const struct LindbladModelHandle *model,
                                            double t,
                                            double *out);

/**
 * Largest signed eigenvalue of `-i(H_r - H_r^dagger)` at time `t`.
 *
 * # Safety
 * `model` must be a live handle and `out` a valid pointer.
 */
enum LindbladStatus lindblad_cooling_rate(const struct LindbladModelHandle *model,
                                          double t,
                                          double *out);

/**
 * Integrates from `rho0` (one `dim x dim` matrix) with fixed-step RK4.
 *
 * # Safety
 * `model` must be a live handle, `rho0` must hold `2 * dim * dim` doubles and
 * `out` must be valid.
 */
enum LindbladStatus lindblad_integrate(const struct LindbladModelHandle *model,
                                       const double *rho0,
                                       double t_start,
                                       double t_end,
                                       double dt,
                                       size_t sample_stride,
                                       struct LindbladTrajectoryHandle **out);

/**
 * # Safety
 * `trajectory` must be a live handle and `out` a valid pointer.
 */
enum LindbladStatus lindblad_trajectory_len(const struct LindbladTrajectoryHandle *trajectory,
                                            size_t *out);

/**
 * # Safety
 * `trajectory` must be a live handle and `out` a valid pointer.
 */
enum LindbladStatus lindblad_trajectory_observables(const struct LindbladTrajectoryHandle *trajectory,
                                                    size_t index,
                                                    struct LindbladObservables *out);

/**
 * Copies sample `index`'s density matrix into `out` (`2 * dim * dim` doubles).
 *
 * # Safety
 * `trajectory` must be a live handle and `out` must have room for the matrix.
 */
enum LindbladStatus lindblad_trajectory_state(const struct LindbladTrajectoryHandle *trajectory,
                                              size_t index,
                                              double *out);

/**
 * # Safety
 * `trajectory` must be NULL or a handle from this library that was not yet freed.
 */
void lindblad_trajectory_free(struct LindbladTrajectoryHandle *trajectory);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LINDBLAD_LAB_H */
