#ifndef ZASSENHAUS_H
#define ZASSENHAUS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Values 3 to 6 match the command-line exit codes.
 */
typedef enum ZsStatus {
  ZS_STATUS_OK = 0,
  ZS_STATUS_NULL_POINTER = 1,
  ZS_STATUS_INVALID_UTF8 = 2,
  ZS_STATUS_PARSE = 3,
  ZS_STATUS_TOO_LARGE = 4,
  ZS_STATUS_UNKNOWN_ID = 5,
  ZS_STATUS_IO = 6,
  ZS_STATUS_INVALID_ARGUMENT = 7,
  ZS_STATUS_INVARIANT_VIOLATION = 8,
  ZS_STATUS_BUFFER_TOO_SMALL = 9,
  ZS_STATUS_PANIC = 10,
} ZsStatus;

/**
 * Opaque group handle.
 */
typedef struct ZsGroup ZsGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *zs_last_error(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void zs_string_free(char *s);

/**
 * Builds a group from a JSON spec such as
 * `{"kind":"magnus","p":2,"d":2,"m":4}`.
 *
 * # Safety
 * `spec_json` must be a nul-terminated string; `out` must be writable.
 */
enum ZsStatus zs_group_new(const char *spec_json, struct ZsGroup **out);

/**
 * Releases a group handle. NULL is ignored.
 *
 * # Safety
 * `g` must come from [`zs_group_new`] and not have been freed.
 */
void zs_group_free(struct ZsGroup *g);

/**
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum ZsStatus zs_group_order(const struct ZsGroup *g, size_t *out);

/**
 * Hex digest of the multiplication table, as a new string.
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum ZsStatus zs_group_digest(const struct ZsGroup *g, char **out);

/**
 * Orders of `G_(1), G_(2), …` down to the trivial term. Writes the number
 * of terms to `len`; if `cap` is too small nothing else is written and
 * `BUFFER_TOO_SMALL` is returned.
 *
 * # Safety
 * `g` must be a live handle, `orders` valid for `cap` writes, `len` writable.
 */
enum ZsStatus zs_filtration_orders(const struct ZsGroup *g,
                                   size_t *orders,
                                   size_t cap,
                                   size_t *len);

/**
 * Element index of a word such as `[x1,x2]*x1^2`.
 *
 * # Safety
 * `g` must be a live handle, `word` nul-terminated, `out` writable.
 */
enum ZsStatus zs_group_element(const struct ZsGroup *g, const char *word, size_t *out);

/**
 * Shortest word for an element, as a new string.
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum ZsStatus zs_group_label(const struct ZsGroup *g, size_t element, char **out);

/**
 * Looks for a rank-`n` representation nontrivial on `element` and writes
 * a JSON object with `outcome` (`found`, `impossible`, `inconclusive`)
 * and, when found, `depth`, `route`, `image` and `representation`.
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum ZsStatus zs_separate(const struct ZsGroup *g, size_t element, size_t n, char **out);

/**
 * Runs the full verification at rank `n` with default catalog settings,
 * writes the report (without timings) as JSON and the report's exit code
 * (0 established, 2 inconclusive, 1 falsified) to `verdict`.
 *
 * # Safety
 * `g` must be a live handle; `report` and `verdict` writable.
 */
enum ZsStatus zs_verify(const struct ZsGroup *g, size_t n, char **report, int *verdict);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZASSENHAUS_H */
