#ifndef QMED_H
#define QMED_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QmedStatus {
  QMED_STATUS_OK = 0,
  QMED_STATUS_NULL_POINTER = 1,
  QMED_STATUS_INVALID_ARGUMENT = 2,
  QMED_STATUS_PARSE_ERROR = 3,
  QMED_STATUS_NUMERICAL_ERROR = 4,
  QMED_STATUS_PANIC = 5,
} QmedStatus;

/**
 * Opaque density-matrix handle.
 */
typedef struct QmedState QmedState;

/**
 * Correlations of a three-qubit state; entropic entries in bits.
 */
typedef struct QmedReport {
  double time;
  double neg_a_b;
  double neg_a_mb;
  double neg_am_b;
  double discord_ab_given_m;
  double mutual_info_ab_m;
  double ree_a_b;
  double s_m;
  double s_ab;
  double s_abm;
  /**
   * 1 if the REE optimizer met its stopping rule.
   */
  int32_t ree_converged;
} QmedReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread. Valid until the next
 * failing call on the same thread; never null.
 */
const char *qmed_last_error_message(void);

/**
 * The initial probe–mediator state on `A, B, M`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum QmedStatus qmed_state_initial(struct QmedState **out);

/**
 * Parses the JSON state format (`labels`, `dim`, `re`, `im`).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum QmedStatus qmed_state_from_json(const char *json, struct QmedState **out);

/**
 * Serializes a state; release the string with [`qmed_string_free`].
 *
 * # Safety
 * `state` must come from this library; `out` must be writable.
 */
enum QmedStatus qmed_state_to_json(const struct QmedState *state, char **out);

/**
 * Number of qubits of a state.
 *
 * # Safety
 * `state` must come from this library; `out` must be writable.
 */
enum QmedStatus qmed_state_num_qubits(const struct QmedState *state, size_t *out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void qmed_string_free(char *s);

/**
 * # Safety
 * `state` must be null or a handle from this library, freed once.
 */
void qmed_state_free(struct QmedState *state);

/**
 * Negativity across a cut written as `"A:MB"`; qubits left out of the
 * cut are traced out first.
 *
 * # Safety
 * Pointers must be valid; `cut` NUL-terminated.
 */
enum QmedStatus qmed_negativity(const struct QmedState *state, const char *cut, double *out);

/**
 * Mutual information in bits across a cut written as `"AB:M"`; qubits
 * left out of the cut are traced out first.
 *
 * # Safety
 * Pointers must be valid; `cut` NUL-terminated.
 */
enum QmedStatus qmed_mutual_information(const struct QmedState *state,
                                        const char *cut,
                                        double *out);

/**
 * Discord in bits with projective measurements on qubit `measured`.
 *
 * # Safety
 * Pointers must be valid; `measured` NUL-terminated.
 */
enum QmedStatus qmed_discord(const struct QmedState *state, const char *measured, double *out);

/**
 * Evolves a state on `A, B, M` for time `t` under coupling `omega`; the
 * input handle is left untouched.
 *
 * # Safety
 * `state` must come from this library; `out` must be writable.
 */
enum QmedStatus qmed_evolve(const struct QmedState *state,
                            double omega,
                            double t,
                            struct QmedState **out);

/**
 * Full correlation report of a state on `A, B, M`. `seed` drives the REE
 * multi-start.
 *
 * # Safety
 * `state` must come from this library; `out` must be writable.
 */
enum QmedStatus qmed_measure(const struct QmedState *state,
                             double time,
                             uint64_t seed,
                             struct QmedReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QMED_H */
