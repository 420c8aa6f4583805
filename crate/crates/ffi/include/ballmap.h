#ifndef BALLMAP_H
#define BALLMAP_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call; values match the command-line exit codes where they overlap.
 */
typedef enum {
  BALLMAP_STATUS_OK = 0,
  /**
   * The decision procedure did not settle the question.
   */
  BALLMAP_STATUS_UNKNOWN = 1,
  BALLMAP_STATUS_PARSE_ERROR = 2,
  BALLMAP_STATUS_CONSTRAINT_VIOLATION = 3,
  BALLMAP_STATUS_VERIFICATION_FAILED = 4,
  BALLMAP_STATUS_NULL_POINTER = 5,
  BALLMAP_STATUS_INVALID_UTF8 = 6,
  BALLMAP_STATUS_INTERNAL_ERROR = 7,
} BallmapStatus;

typedef enum {
  BALLMAP_VERDICT_EQUIVALENT = 0,
  BALLMAP_VERDICT_NOT_EQUIVALENT = 1,
  BALLMAP_VERDICT_UNDECIDED = 2,
} BallmapVerdict;

/**
 * The outcome of [`ballmap_decide`].
 */
typedef struct BallmapDecision BallmapDecision;

/**
 * A validated rational map.
 */
typedef struct BallmapMap BallmapMap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the next call.
 */
const char *ballmap_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ballmap_string_free(char *s);

/**
 * Parses and validates a map file given as JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
BallmapStatus ballmap_map_from_json(const char *json, uint64_t seed, BallmapMap **out);

/**
 * Releases a map. Null is ignored.
 *
 * # Safety
 * `map` must come from [`ballmap_map_from_json`] and not have been freed.
 */
void ballmap_map_free(BallmapMap *map);

/**
 * Source dimension `n`, target dimension `N` and degree.
 *
 * # Safety
 * All pointers must be valid.
 */
BallmapStatus ballmap_map_info(const BallmapMap *map, size_t *n, size_t *big_n, uint32_t *degree);

/**
 * The map re-serialized as a map file.
 *
 * # Safety
 * `map` and `out` must be valid pointers.
 */
BallmapStatus ballmap_map_to_json(const BallmapMap *map, char **out);

/**
 * Writes whether the map is proper; `VerificationFailed` is not used for an improper map.
 *
 * # Safety
 * `map` and `proper` must be valid pointers.
 */
BallmapStatus ballmap_check_proper(const BallmapMap *map, uint64_t seed, bool *proper);

/**
 * Runs the equivalence decision. An improper map is a constraint violation.
 *
 * # Safety
 * `map` and `out` must be valid pointers.
 */
BallmapStatus ballmap_decide(const BallmapMap *map,
                             size_t budget,
                             uint64_t seed,
                             BallmapDecision **out);

/**
 * # Safety
 * `d` and `verdict` must be valid pointers.
 */
BallmapStatus ballmap_decision_verdict(const BallmapDecision *d, BallmapVerdict *verdict);

/**
 * Witness or certificate as JSON; the pointer is owned by the decision.
 *
 * # Safety
 * `d` must be a valid decision.
 */
const char *ballmap_decision_json(const BallmapDecision *d);

/**
 * Releases a decision. Null is ignored.
 *
 * # Safety
 * `d` must come from [`ballmap_decide`] and not have been freed.
 */
void ballmap_decision_free(BallmapDecision *d);

/**
 * Runs a named example with default parameters and writes its report as JSON. A failing check
 * yields `VerificationFailed` with the report still written.
 *
 * # Safety
 * `id` must be a NUL-terminated string and `report` a valid pointer.
 */
BallmapStatus ballmap_verify_example(const char *id, char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BALLMAP_H */
