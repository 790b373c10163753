#ifndef GRAPHCLUST_H
#define GRAPHCLUST_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GcStatus {
  GC_STATUS_OK = 0,
  GC_STATUS_NULL_POINTER = 1,
  GC_STATUS_INVALID_UTF8 = 2,
  GC_STATUS_PARSE = 3,
  GC_STATUS_NOT_PRIME = 4,
  GC_STATUS_NOT_BASIC = 5,
  GC_STATUS_NOT_ADMISSIBLE = 6,
  GC_STATUS_NOT_INVERTIBLE = 7,
  GC_STATUS_INVALID_VERTEX = 8,
  GC_STATUS_INVALID_STRATEGY = 9,
  GC_STATUS_PRECONDITION = 10,
  GC_STATUS_SIZE_CAP = 11,
  GC_STATUS_PANIC = 12,
} GcStatus;

/**
 * Opaque graph handle, optionally carrying a measurement strategy.
 */
typedef struct GcGraph GcGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a JSON graph document. Graph-basis strategy entries are not
 * supported here since they refer to other files.
 *
 * # Safety
 * `json` must be a valid nul-terminated string and `out` a valid pointer.
 */
enum GcStatus gc_graph_parse(const char *json, struct GcGraph **out);

/**
 * Releases a graph. Null is ignored.
 *
 * # Safety
 * `g` must come from this library and not have been freed.
 */
void gc_graph_free(struct GcGraph *g);

/**
 * Canonical JSON document of the graph (and its strategy, if any).
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum GcStatus gc_graph_emit(const struct GcGraph *g, char **out);

/**
 * Field size d and number of vertices.
 *
 * # Safety
 * `g` must be a live handle; `d` and `vertices` valid pointers.
 */
enum GcStatus gc_graph_info(const struct GcGraph *g, uint32_t *d, size_t *vertices);

/**
 * Whether Γ^{KJ}_{IK} is injective.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum GcStatus gc_graph_is_basic(const struct GcGraph *g, bool *out);

/**
 * Admissibility conditions as bits: 1 = G1, 2 = G2, 4 = G3. The graph is
 * admissible when all three are set.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum GcStatus gc_graph_validate_admissible(const struct GcGraph *g, uint32_t *out);

/**
 * Applies the strategy (if any) and removes all measuring vertices in the
 * default order. The result is a new handle.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum GcStatus gc_graph_reduce(const struct GcGraph *g, struct GcGraph **out);

/**
 * Schur complement X_N Γ for the `len` vertices at `vertices`.
 *
 * # Safety
 * `g` must be a live handle, `vertices` must point to `len` values and `out`
 * must be a valid pointer.
 */
enum GcStatus gc_graph_schur_complement(const struct GcGraph *g,
                                        const uint32_t *vertices,
                                        size_t len,
                                        struct GcGraph **out);

/**
 * DOT rendering of the graph.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum GcStatus gc_graph_export_dot(const struct GcGraph *g, char **out);

/**
 * Persistency upper bound of a d = 2 graph state with at most `budget`
 * measurements; `out` is set to -1 if none was found.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum GcStatus gc_graph_persistency(const struct GcGraph *g, size_t budget, int64_t *out);

/**
 * Compensating map Θ = (A | B) of the graph after applying its strategy,
 * as JSON `{"a": {...}, "b": {...}}`.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum GcStatus gc_graph_compensation_json(const struct GcGraph *g, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void gc_string_free(char *s);

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next library call on the same thread.
 */
const char *gc_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GRAPHCLUST_H */
