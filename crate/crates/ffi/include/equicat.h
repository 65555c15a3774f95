#ifndef EQUICAT_H
#define EQUICAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every function.
 */
typedef enum EquicatStatus {
  EQUICAT_STATUS_OK = 0,
  EQUICAT_STATUS_NULL_POINTER = 1,
  EQUICAT_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed JSON, or JSON describing an invalid object.
   */
  EQUICAT_STATUS_INVALID_INPUT = 3,
  /**
   * Unknown check id, verb, subgroup or point.
   */
  EQUICAT_STATUS_UNKNOWN_NAME = 4,
  EQUICAT_STATUS_SIZE_CAP = 5,
  /**
   * The computation itself failed, for example on a category with loops.
   */
  EQUICAT_STATUS_COMPUTATION = 6,
  /**
   * An internal panic was caught at the boundary.
   */
  EQUICAT_STATUS_PANIC = 7,
} EquicatStatus;

/**
 * The verdict carried by a result.
 */
typedef enum EquicatVerdict {
  /**
   * The command reports data rather than deciding anything.
   */
  EQUICAT_VERDICT_NONE = 0,
  EQUICAT_VERDICT_PASS = 1,
  EQUICAT_VERDICT_FAIL = 2,
  EQUICAT_VERDICT_INCONCLUSIVE = 3,
} EquicatVerdict;

/**
 * Size caps for instance generation and inputs.
 */
typedef struct EquicatCaps EquicatCaps;

/**
 * Owned JSON output of one call.
 */
typedef struct EquicatResult EquicatResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failed call on this thread, or NULL. Valid until
 * the next call on this thread.
 */
const char *equicat_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *equicat_version(void);

/**
 * Default caps, overridden by `EQUICAT_SIZE_CAPS` when set and valid.
 */
struct EquicatCaps *equicat_caps_new(void);

/**
 * Sets one cap: `key` is `group`, `index`, `vertex` or `j`.
 *
 * # Safety
 * `caps` must come from [`equicat_caps_new`]; `key` must be a C string.
 */
enum EquicatStatus equicat_caps_set(struct EquicatCaps *caps, const char *key, size_t value);

/**
 * # Safety
 * `caps` must come from [`equicat_caps_new`] or be NULL.
 */
void equicat_caps_free(struct EquicatCaps *caps);

/**
 * Runs check `id` on `size` instances drawn from `seed`. `caps` may be NULL.
 *
 * # Safety
 * `id` must be a C string, `caps` NULL or a live caps handle, `out` writable.
 */
enum EquicatStatus equicat_run_check(const char *id,
                                     uint64_t seed,
                                     size_t size,
                                     const struct EquicatCaps *caps,
                                     struct EquicatResult **out);

/**
 * Evaluates a connectivity estimate (`bm`, `dual-bm`, `suspension`,
 * `submanifold`, `configuration`, `holim`, `restriction`, `mapspace`).
 *
 * # Safety
 * `verb` and `input` must be C strings, `caps` NULL or live, `out` writable.
 */
enum EquicatStatus equicat_bounds(const char *verb,
                                  const char *input,
                                  const struct EquicatCaps *caps,
                                  struct EquicatResult **out);

/**
 * Builds a categorical model (`grothendieck`, `fixed-grothendieck`, `hom`,
 * `matching`). `subgroup` and `units` (comma-separated) may be NULL.
 *
 * # Safety
 * String arguments must be C strings or NULL where allowed; `out` writable.
 */
enum EquicatStatus equicat_build(const char *verb,
                                 const char *input,
                                 const char *subgroup,
                                 const char *units,
                                 const struct EquicatCaps *caps,
                                 struct EquicatResult **out);

/**
 * Reedy quasi-fibrancy through degree `max_dim`, checked for every
 * subgroup when `equivariant` is true.
 *
 * # Safety
 * `input` must be a C string, `caps` NULL or live, `out` writable.
 */
enum EquicatStatus equicat_quasi_fibrant(const char *input,
                                         size_t max_dim,
                                         bool equivariant,
                                         const struct EquicatCaps *caps,
                                         struct EquicatResult **out);

/**
 * Total-fibre models; `phi < 0` reports every transformation up to the
 * library limit.
 *
 * # Safety
 * `input` must be a C string, `caps` NULL or live, `out` writable.
 */
enum EquicatStatus equicat_total_fiber(const char *input,
                                       int64_t phi,
                                       const struct EquicatCaps *caps,
                                       struct EquicatResult **out);

/**
 * Nerve homology (`nerve`, `equivalence`) through degree `max_dim`.
 *
 * # Safety
 * `verb` and `input` must be C strings, `out` writable.
 */
enum EquicatStatus equicat_homology(const char *verb,
                                    const char *input,
                                    size_t max_dim,
                                    struct EquicatResult **out);

/**
 * The JSON text of a result, valid until the result is freed.
 *
 * # Safety
 * `result` must be a live result or NULL.
 */
const char *equicat_result_json(const struct EquicatResult *result);

/**
 * # Safety
 * `result` must be a live result or NULL.
 */
enum EquicatVerdict equicat_result_verdict(const struct EquicatResult *result);

/**
 * # Safety
 * `result` must come from this library or be NULL, and is invalid afterwards.
 */
void equicat_result_free(struct EquicatResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EQUICAT_H */
