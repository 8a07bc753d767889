/* C interface for the ilsgraph connectivity library. */

#pragma once

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from the ilsgraph-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes, aligned with the CLI exit codes.
 */
typedef enum IlsgStatus {
  /**
   * Success.
   */
  ILSG_STATUS_OK = 0,
  /**
   * Internal invariant failure; indicates a library bug.
   */
  ILSG_STATUS_DEFECT = 1,
  /**
   * The request exceeds an enumeration or search guard.
   */
  ILSG_STATUS_CAPABILITY = 2,
  /**
   * Malformed input: bad JSON, bad dimensions, or a null pointer.
   */
  ILSG_STATUS_INVALID_INPUT = 3,
} IlsgStatus;

/**
 * Witness construction strategy.
 */
typedef enum IlsgWitnessMethod {
  /**
   * Analytic construction first, complete search as fallback.
   */
  ILSG_WITNESS_METHOD_AUTO = 0,
  /**
   * Analytic construction only; yields null when it does not apply.
   */
  ILSG_WITNESS_METHOD_ANALYTIC = 1,
  /**
   * Complete right-hand-side scan.
   */
  ILSG_WITNESS_METHOD_SEARCH = 2,
} IlsgWitnessMethod;

/**
 * Opaque coefficient matrix handle.
 */
typedef struct IlsgMatrix IlsgMatrix;

/**
 * Opaque right-hand-side vector handle.
 */
typedef struct IlsgRhs IlsgRhs;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse a coefficient matrix from its JSON document. On success `*out`
 * owns a new handle; release it with [`ilsg_matrix_free`].
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum IlsgStatus ilsg_matrix_from_json(const char *json, struct IlsgMatrix **out);

/**
 * Release a matrix handle. Null is accepted and ignored.
 *
 * # Safety
 * `matrix` must be null or a pointer returned by [`ilsg_matrix_from_json`]
 * that has not been freed yet.
 */
void ilsg_matrix_free(struct IlsgMatrix *matrix);

/**
 * Parse a right-hand-side vector from its JSON document.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum IlsgStatus ilsg_rhs_from_json(const char *json, struct IlsgRhs **out);

/**
 * Release a vector handle. Null is accepted and ignored.
 *
 * # Safety
 * `rhs` must be null or a pointer returned by [`ilsg_rhs_from_json`] that
 * has not been freed yet.
 */
void ilsg_rhs_free(struct IlsgRhs *rhs);

/**
 * Sign-structure report (sign pattern, greedy reduction, elimination
 * ordering, minimal forbidden pattern) as JSON.
 *
 * # Safety
 * `matrix` must be a live handle and `out_json` a valid pointer.
 */
enum IlsgStatus ilsg_analyze(const struct IlsgMatrix *matrix, char **out_json);

/**
 * Connectivity report of the instance `(A, b, d)` as JSON.
 *
 * # Safety
 * `matrix` and `rhs` must be live handles and `out_json` a valid pointer.
 */
enum IlsgStatus ilsg_check(const struct IlsgMatrix *matrix,
                           const struct IlsgRhs *rhs,
                           uint32_t d,
                           char **out_json);

/**
 * Disconnection witness as JSON, or the JSON literal `null` when the
 * requested method produces none.
 *
 * # Safety
 * `matrix` must be a live handle and `out_json` a valid pointer.
 */
enum IlsgStatus ilsg_witness(const struct IlsgMatrix *matrix,
                             uint32_t d,
                             enum IlsgWitnessMethod method,
                             char **out_json);

/**
 * Universal-connectedness verdict at the given domain bound, as JSON.
 *
 * # Safety
 * `matrix` must be a live handle and `out_json` a valid pointer.
 */
enum IlsgStatus ilsg_decide(const struct IlsgMatrix *matrix, uint32_t d, char **out_json);

/**
 * Permutations mapping a 4x3 matrix onto the canonical sign pattern, as
 * JSON, or `null` when no permutations work.
 *
 * # Safety
 * `matrix` must be a live handle and `out_json` a valid pointer.
 */
enum IlsgStatus ilsg_canonical_match(const struct IlsgMatrix *matrix, char **out_json);

/**
 * Explicit connecting path between two feasible points of a canonical 4x3
 * instance, as JSON.
 *
 * # Safety
 * `matrix` and `rhs` must be live handles; `from`/`to` must point to
 * `from_len`/`to_len` readable `uint32_t` values; `out_json` must be valid.
 */
enum IlsgStatus ilsg_canonical_path(const struct IlsgMatrix *matrix,
                                    const struct IlsgRhs *rhs,
                                    uint32_t d,
                                    const uint32_t *from,
                                    uintptr_t from_len,
                                    const uint32_t *to,
                                    uintptr_t to_len,
                                    char **out_json);

/**
 * Release a string returned by any of the JSON-producing functions. Null
 * is accepted and ignored.
 *
 * # Safety
 * `text` must be null or an unfreed pointer produced by this library.
 */
void ilsg_string_free(char *text);

/**
 * Message of the most recent failure on this thread, as a newly allocated
 * string (release with [`ilsg_string_free`]), or null when the last call
 * succeeded.
 */
char *ilsg_last_error_message(void);

/**
 * Library version as a static string; do not free.
 */
const char *ilsg_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
