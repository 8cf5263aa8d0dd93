#ifndef ENTMON_H
#define ENTMON_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum EntmonStatus {
  ENTMON_STATUS_OK = 0,
  ENTMON_STATUS_NULL_POINTER = 1,
  ENTMON_STATUS_INVALID_UTF8 = 2,
  ENTMON_STATUS_INVALID_ARGUMENT = 3,
  ENTMON_STATUS_BAD_DIMENSION = 4,
  ENTMON_STATUS_BAD_RANK = 5,
  ENTMON_STATUS_PARSE_ERROR = 6,
  ENTMON_STATUS_DIMENSION_MISMATCH = 7,
  ENTMON_STATUS_UNSUPPORTED = 8,
  ENTMON_STATUS_NOT_NORMALIZED = 9,
  ENTMON_STATUS_UNKNOWN_STATE = 10,
  ENTMON_STATUS_IO = 11,
  ENTMON_STATUS_PANIC = 12,
} EntmonStatus;

/**
 * Opaque parsed contraction expression.
 */
typedef struct EntmonExpr EntmonExpr;

/**
 * Opaque pure state.
 */
typedef struct EntmonState EntmonState;

/**
 * Outcome of [`entmon_solve_e`].
 */
typedef struct EntmonSolveResult {
  double value;
  bool converged;
  bool exact;
  size_t restarts_agreeing;
} EntmonSolveResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *entmon_last_error_message(void);

/**
 * Builds a state from `n_parties` dims and `n_amps` interleaved `(re, im)`
 * pairs (`2 * n_amps` doubles).
 *
 * # Safety
 * `dims` and `amps` must point to arrays of the stated lengths and `out`
 * to writable storage for one pointer.
 */
enum EntmonStatus entmon_state_new(const size_t *dims,
                                   size_t n_parties,
                                   const double *amps,
                                   size_t n_amps,
                                   struct EntmonState **out);

/**
 * Looks up a catalog state (`ghz`, `w`, `bell-prod`, `kempe1`, `kempe2`,
 * `haar:D:S`).
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` writable.
 */
enum EntmonStatus entmon_state_catalog(const char *name, struct EntmonState **out);

/**
 * Parses a state from its JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum EntmonStatus entmon_state_from_json(const char *json, struct EntmonState **out);

/**
 * Releases a state. Null is ignored.
 *
 * # Safety
 * `state` must come from this library and not be used afterwards.
 */
void entmon_state_free(struct EntmonState *state);

/**
 * # Safety
 * `state` must be a live handle and `out` writable.
 */
enum EntmonStatus entmon_state_n_parties(const struct EntmonState *state, size_t *out);

/**
 * # Safety
 * `state` must be a live handle and `out` writable.
 */
enum EntmonStatus entmon_state_squared_norm(const struct EntmonState *state, double *out);

/**
 * `E_k` for ranks `ranks[0..n_ranks]` with the default iteration limits.
 *
 * # Safety
 * `state` must be a live handle, `ranks` must hold `n_ranks` entries and
 * `out` must be writable.
 */
enum EntmonStatus entmon_solve_e(const struct EntmonState *state,
                                 const size_t *ranks,
                                 size_t n_ranks,
                                 size_t restarts,
                                 uint64_t seed,
                                 struct EntmonSolveResult *out);

/**
 * Writes `I2, I4_1, I4_2, I4_3, I4_4, I6` of a three-party state to
 * `out[0..6]`.
 *
 * # Safety
 * `state` must be a live handle and `out` must hold 6 doubles.
 */
enum EntmonStatus entmon_builtin_invariants(const struct EntmonState *state, double *out);

/**
 * Residual tangle of a three-qubit state.
 *
 * # Safety
 * `state` must be a live handle and `out` writable.
 */
enum EntmonStatus entmon_tangle(const struct EntmonState *state, double *out);

/**
 * Parses a contraction expression such as `psi[i,j] * psi*[i,j]`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum EntmonStatus entmon_expr_parse(const char *text, struct EntmonExpr **out);

/**
 * Evaluates an expression on a state.
 *
 * # Safety
 * Handles must be live; `out_re` and `out_im` writable.
 */
enum EntmonStatus entmon_expr_eval(const struct EntmonExpr *expr,
                                   const struct EntmonState *state,
                                   double *out_re,
                                   double *out_im);

/**
 * # Safety
 * `expr` must be a live handle and `out` writable.
 */
enum EntmonStatus entmon_expr_is_simple(const struct EntmonExpr *expr, bool *out);

/**
 * Releases an expression. Null is ignored.
 *
 * # Safety
 * `expr` must come from this library and not be used afterwards.
 */
void entmon_expr_free(struct EntmonExpr *expr);

/**
 * Overall success-probability bound for converting `a` into `b` over the
 * default monotone set. `*out_constrained` is false when no monotone
 * restricts the conversion, in which case `*out_bound` is set to 1.
 *
 * # Safety
 * Handles must be live; outputs writable.
 */
enum EntmonStatus entmon_slocc_bound(const struct EntmonState *a,
                                     const struct EntmonState *b,
                                     size_t restarts,
                                     uint64_t seed,
                                     double *out_bound,
                                     bool *out_constrained);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENTMON_H */
