#ifndef DPGRID_H
#define DPGRID_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes.
 */
typedef enum DpStatus {
  DP_OK = 0,
  DP_ERR_NULL = 1,
  DP_ERR_MALFORMED = 2,
  DP_ERR_INVALID_DIAGRAM = 3,
  DP_ERR_INVALID_COLUMN = 4,
  DP_ERR_INVALID_STATE = 5,
  DP_ERR_INVALID_MOVE = 6,
  DP_ERR_OTHER = 7,
} DpStatus;

/**
 * Opaque grid diagram.
 */
typedef struct DpGrid DpGrid;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *dp_last_error(void);

/**
 * Parses `{"n":..,"O":[..],"X":[..]}` into a new handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum DpStatus dp_grid_parse(const char *json, struct DpGrid **out);

/**
 * # Safety
 * `g` must come from this library and not be freed twice; null is ignored.
 */
void dp_grid_free(struct DpGrid *g);

/**
 * Grid number, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t dp_grid_n(const struct DpGrid *g);

/**
 * Serializes a diagram; free the result with `dp_string_free`.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum DpStatus dp_grid_to_json(const struct DpGrid *g, char **out);

/**
 * Maslov and Alexander gradings of the state with `rows[i]` the row of the
 * point on vertical circle `i`.
 *
 * # Safety
 * `rows` must point to `len` bytes; `maslov` and `alexander` must be writable.
 */
enum DpStatus dp_grid_gradings(const struct DpGrid *g,
                               const uint8_t *rows,
                               size_t len,
                               int64_t *maslov,
                               int64_t *alexander);

/**
 * Sets `*passed` to 1 when all three differentials square to zero, else 0.
 *
 * # Safety
 * `g` must be a live handle; `passed` must be writable.
 */
enum DpStatus dp_verify_d2(const struct DpGrid *g, int32_t *passed);

/**
 * Homology table as JSON. `theory` is 0 for GH- and 1 for GH*; `window` is
 * `"d0:d1,s0:s1"` or null for the default. Free with `dp_string_free`.
 *
 * # Safety
 * `g` must be a live handle; `window` null or NUL-terminated; `out` writable.
 */
enum DpStatus dp_homology_json(const struct DpGrid *g,
                               int32_t theory,
                               const char *window,
                               char **out);

/**
 * X:SW stabilization at column `col`; the new diagram goes to `*out`.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum DpStatus dp_stabilize(const struct DpGrid *g, size_t col, struct DpGrid **out);

/**
 * # Safety
 * `s` must come from this library; null is ignored.
 */
void dp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DPGRID_H */
