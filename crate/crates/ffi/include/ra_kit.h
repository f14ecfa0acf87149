#ifndef RA_KIT_H
#define RA_KIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of a call. `RA_STATUS_NEGATIVE` is a successful "no" answer.
 */
typedef enum RaStatus {
  RA_STATUS_OK = 0,
  RA_STATUS_NEGATIVE = 1,
  RA_STATUS_PARSE_ERROR = 2,
  RA_STATUS_NULL_POINTER = 3,
  RA_STATUS_INVALID_ARGUMENT = 4,
  RA_STATUS_BUDGET = 5,
  RA_STATUS_INTERNAL = 6,
} RaStatus;

typedef enum RaVerdict {
  RA_VERDICT_YES = 0,
  RA_VERDICT_NO = 1,
  RA_VERDICT_INDETERMINATE = 2,
} RaVerdict;

/**
 * A parsed relation algebra.
 */
typedef struct RaAlgebra RaAlgebra;

/**
 * A constraint network over some algebra.
 */
typedef struct RaNetwork RaNetwork;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread, or "" after a
 * success. Valid until the next call on the same thread.
 */
const char *ra_last_error_message(void);

/**
 * Parses an algebra file.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum RaStatus ra_algebra_parse(const char *text, struct RaAlgebra **out);

/**
 * # Safety
 * `ra` must come from [`ra_algebra_parse`] and not be freed twice.
 */
void ra_algebra_free(struct RaAlgebra *ra);

/**
 * Number of atoms, or 0 for a null handle.
 *
 * # Safety
 * `ra` must be null or a live handle.
 */
size_t ra_algebra_atom_count(const struct RaAlgebra *ra);

/**
 * Checks the algebra laws; `RA_STATUS_NEGATIVE` if any fail, with the
 * number of violations in `out_violations`.
 *
 * # Safety
 * `ra` must be a live handle and `out_violations` writable.
 */
enum RaStatus ra_algebra_validate(const struct RaAlgebra *ra, size_t *out_violations);

/**
 * Parses an element such as `"lt,eq"`, `"0"` or `"1"` into atom bits.
 *
 * # Safety
 * `ra` must be a live handle, `text` NUL-terminated and `out` writable.
 */
enum RaStatus ra_element_parse(const struct RaAlgebra *ra, const char *text, uint64_t *out);

/**
 * Composition of two elements given as atom bitmasks.
 *
 * # Safety
 * `ra` must be a live handle and `out` writable.
 */
enum RaStatus ra_compose(const struct RaAlgebra *ra, uint64_t x, uint64_t y, uint64_t *out);

/**
 * # Safety
 * `ra` must be a live handle and `out` writable.
 */
enum RaStatus ra_converse(const struct RaAlgebra *ra, uint64_t x, uint64_t *out);

/**
 * Parses a network file against `ra`.
 *
 * # Safety
 * `ra` must be a live handle, `text` NUL-terminated and `out` writable.
 */
enum RaStatus ra_network_parse(const struct RaAlgebra *ra,
                               const char *text,
                               struct RaNetwork **out);

/**
 * # Safety
 * `net` must come from this library and not be freed twice.
 */
void ra_network_free(struct RaNetwork *net);

/**
 * Number of nodes, or 0 for a null handle.
 *
 * # Safety
 * `net` must be null or a live handle.
 */
size_t ra_network_node_count(const struct RaNetwork *net);

/**
 * Label of the ordered pair `(x, y)` as atom bits.
 *
 * # Safety
 * `net` must be a live handle and `out` writable.
 */
enum RaStatus ra_network_label(const struct RaNetwork *net, size_t x, size_t y, uint64_t *out);

/**
 * Finds an atomic refinement. On `RA_STATUS_OK` `out` holds a new network;
 * on `RA_STATUS_NEGATIVE` (unsatisfiable) it is set to null.
 *
 * # Safety
 * Handles must be live and `out` writable.
 */
enum RaStatus ra_network_solve(const struct RaAlgebra *ra,
                               const struct RaNetwork *net,
                               struct RaNetwork **out);

/**
 * Normalizes and path-consistency-refines; null on `RA_STATUS_NEGATIVE`.
 *
 * # Safety
 * Handles must be live and `out` writable.
 */
enum RaStatus ra_network_path_consistency(const struct RaAlgebra *ra,
                                          const struct RaNetwork *net,
                                          struct RaNetwork **out);

/**
 * `RA_STATUS_OK` if atomic, `RA_STATUS_NEGATIVE` if not.
 *
 * # Safety
 * Handles must be live.
 */
enum RaStatus ra_network_is_atomic(const struct RaAlgebra *ra, const struct RaNetwork *net);

/**
 * The network in file format, or null on error. Release with
 * [`ra_string_free`].
 *
 * # Safety
 * Handles must be live.
 */
char *ra_network_to_string(const struct RaAlgebra *ra, const struct RaNetwork *net);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void ra_string_free(char *s);

/**
 * Decides the amalgamation property over 2-point diagrams with base size
 * at most `max_base`. Zero for `max_base`, `budget` or `threads` selects
 * the default. `RA_STATUS_BUDGET` goes with `RA_VERDICT_INDETERMINATE`.
 *
 * # Safety
 * `ra` must be a live handle and `out_verdict` writable.
 */
enum RaStatus ra_decide_amalgamation(const struct RaAlgebra *ra,
                                     size_t max_base,
                                     uint64_t budget,
                                     size_t threads,
                                     enum RaVerdict *out_verdict);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RA_KIT_H */
