#ifndef FUNCQAOA_H
#define FUNCQAOA_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FqStatus {
  FQ_STATUS_OK = 0,
  FQ_STATUS_INVALID_ARGUMENT = 1,
  FQ_STATUS_PRECONDITION = 2,
  FQ_STATUS_RESOURCE = 3,
  FQ_STATUS_INTERNAL = 4,
  FQ_STATUS_NULL_POINTER = 5,
} FqStatus;

typedef enum FqCertificate {
  FQ_CERTIFICATE_MULTIPLICATION = 0,
  FQ_CERTIFICATE_MODULO = 1,
} FqCertificate;

typedef enum FqMixer {
  FQ_MIXER_X = 0,
  FQ_MIXER_GROVER = 1,
} FqMixer;

/**
 * Opaque gate list.
 */
typedef struct FqCircuit FqCircuit;

/**
 * Opaque statevector.
 */
typedef struct FqState FqState;

/**
 * Outcome of [`fq_factor`].
 */
typedef struct FqFactorResult {
  uint64_t p;
  uint64_t q;
  /**
   * Probability of the most likely correct search state.
   */
  double probability;
  double energy;
  uint64_t evaluations;
} FqFactorResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *fq_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *fq_version(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from a function of this library and not be freed twice.
 */
void fq_string_free(char *s);

/**
 * Parses a circuit in the text format into `*out_circuit`.
 *
 * # Safety
 * `source` must be a NUL-terminated string; `out_circuit` must be writable.
 */
enum FqStatus fq_circuit_parse(const char *source, struct FqCircuit **out_circuit);

/**
 * # Safety
 * `circuit` must be NULL or a live handle from [`fq_circuit_parse`].
 */
void fq_circuit_free(struct FqCircuit *circuit);

/**
 * # Safety
 * `circuit` must be a live handle; the out pointers must be writable.
 */
enum FqStatus fq_circuit_shape(const struct FqCircuit *circuit,
                               size_t *out_width,
                               size_t *out_gates);

/**
 * Renders the circuit in the text format; free the result with [`fq_string_free`].
 *
 * # Safety
 * `circuit` must be a live handle; `out_text` must be writable.
 */
enum FqStatus fq_circuit_emit(const struct FqCircuit *circuit, char **out_text);

/**
 * `|0…0⟩` on `n_qubits` qubits, subject to the qubit cap.
 *
 * # Safety
 * `out_state` must be writable.
 */
enum FqStatus fq_state_new(size_t n_qubits, struct FqState **out_state);

/**
 * # Safety
 * `state` must be NULL or a live handle from [`fq_state_new`].
 */
void fq_state_free(struct FqState *state);

/**
 * Applies `circuit` in place; the state is unchanged on failure.
 *
 * # Safety
 * Both handles must be live.
 */
enum FqStatus fq_state_apply(struct FqState *state, const struct FqCircuit *circuit);

/**
 * # Safety
 * `state` must be live; the out pointers must be writable.
 */
enum FqStatus fq_state_amplitude(const struct FqState *state,
                                 size_t index,
                                 double *out_re,
                                 double *out_im);

/**
 * Writes the `2^n` basis probabilities into `buffer`, which must hold `len ≥ 2^n` doubles.
 *
 * # Safety
 * `state` must be live; `buffer` must point to `len` writable doubles.
 */
enum FqStatus fq_state_probabilities(const struct FqState *state, double *buffer, size_t len);

/**
 * Seeded measurement histogram: `counts[k]` shots landed on basis state `k`.
 *
 * # Safety
 * `state` must be live; `counts` must point to `len ≥ 2^n` writable integers.
 */
enum FqStatus fq_state_sample(const struct FqState *state,
                              uint64_t shots,
                              uint64_t seed,
                              uint64_t *counts,
                              size_t len);

/**
 * Optimizes a uniform-init factoring ansatz (hybrid search on the compiled
 * backend) and recovers the factors of `m`.
 *
 * # Safety
 * `out_result` must be writable.
 */
enum FqStatus fq_factor(uint64_t m,
                        enum FqCertificate certificate,
                        size_t layers,
                        enum FqMixer mixer,
                        uint64_t seed,
                        struct FqFactorResult *out_result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FUNCQAOA_H */
