#ifndef QCOHERENCE_H
#define QCOHERENCE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QcStatus {
  QC_STATUS_OK = 0,
  QC_STATUS_NULL_POINTER = 1,
  QC_STATUS_INVALID_UTF8 = 2,
  /**
   * JSON that does not parse or has the wrong shape.
   */
  QC_STATUS_MALFORMED = 3,
  /**
   * A matrix that is not Hermitian, unit-trace and positive semidefinite.
   */
  QC_STATUS_INVALID_STATE = 4,
  /**
   * Kraus operators that are not trace preserving.
   */
  QC_STATUS_INVALID_CHANNEL = 5,
  QC_STATUS_DIMENSION_MISMATCH = 6,
  QC_STATUS_INVALID_PARAMETER = 7,
  QC_STATUS_PANIC = 8,
} QcStatus;

typedef enum QcMeasure {
  QC_MEASURE_REL_ENTROPY = 0,
  QC_MEASURE_L1 = 1,
} QcMeasure;

/**
 * Opaque Kraus channel.
 */
typedef struct QcChannel QcChannel;

/**
 * Opaque density matrix.
 */
typedef struct QcState QcState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *qc_last_error_message(void);

/**
 * Parses `{"dims": [...], "matrix": [[[re, im], ...], ...]}`.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum QcStatus qc_state_from_json(const char *json, struct QcState **out);

/**
 * # Safety
 * `state` must come from this library and not be used afterwards.
 */
void qc_state_free(struct QcState *state);

/**
 * # Safety
 * `state` must be a live handle and `out` a valid pointer.
 */
enum QcStatus qc_state_to_json(const struct QcState *state, char **out);

/**
 * # Safety
 * `state` must be a live handle and `out` a valid pointer.
 */
enum QcStatus qc_state_dim(const struct QcState *state, size_t *out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void qc_string_free(char *s);

/**
 * Accepts Kraus JSON (`{"dim_in", "dim_out", "kraus"}`) or a named spec
 * such as `{"name": "erasing", "dim": 2}`.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum QcStatus qc_channel_from_json(const char *json, struct QcChannel **out);

/**
 * # Safety
 * `channel` must come from this library and not be used afterwards.
 */
void qc_channel_free(struct QcChannel *channel);

/**
 * Applies `channel` to `state`, or to the first factor of a bipartite
 * `state` whose first dimension matches the channel input.
 *
 * # Safety
 * Handles must be live and `out` a valid pointer.
 */
enum QcStatus qc_channel_apply(const struct QcChannel *channel,
                               const struct QcState *state,
                               struct QcState **out);

/**
 * # Safety
 * `state` must be a live handle and `out` a valid pointer.
 */
enum QcStatus qc_coherence(const struct QcState *state, enum QcMeasure measure, double *out);

/**
 * `S(rho || sigma)` in bits; `+inf` when the support of `rho` is not
 * contained in that of `sigma`.
 *
 * # Safety
 * Handles must be live and `out` a valid pointer.
 */
enum QcStatus qc_relative_entropy(const struct QcState *rho,
                                  const struct QcState *sigma,
                                  double *out);

/**
 * Computes a power described by `request`, e.g.
 * `{"power": "complete-decohering", "measure": "rel-entropy", "kmax": 2}`,
 * and writes the JSON report to `out`. Optional keys: `restarts`,
 * `max_iters`, `seed`.
 *
 * # Safety
 * `channel` must be a live handle, `request` a nul-terminated string and
 * `out` a valid pointer.
 */
enum QcStatus qc_power(const struct QcChannel *channel, const char *request, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCOHERENCE_H */
