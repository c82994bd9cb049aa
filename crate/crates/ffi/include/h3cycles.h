#ifndef H3CYCLES_H
#define H3CYCLES_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum H3Status {
  H3_STATUS_OK = 0,
  H3_STATUS_NULL_POINTER = 1,
  H3_STATUS_INVALID_ARGUMENT = 2,
  H3_STATUS_PARSE = 3,
  H3_STATUS_INFEASIBLE = 4,
  H3_STATUS_BUDGET = 5,
  H3_STATUS_INTERNAL = 6,
  H3_STATUS_PANIC = 7,
} H3Status;

/**
 * Which divisibility conditions `h3_check_divisibility` tests.
 */
typedef enum H3Divisibility {
  H3_DIVISIBILITY_VERTEX3 = 0,
  H3_DIVISIBILITY_CYCLE = 1,
  H3_DIVISIBILITY_K43 = 2,
} H3Divisibility;

/**
 * Opaque 3-graph handle.
 */
typedef struct H3Graph H3Graph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *h3_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *h3_version(void);

/**
 * Creates the complete 3-graph on `n` vertices.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum H3Status h3_graph_complete(size_t n, struct H3Graph **out);

/**
 * Creates a graph on `n` vertices from `count` triples stored as `3 * count` vertex indices.
 *
 * # Safety
 * `triples` must point to `3 * count` readable values (or be null when `count` is 0)
 * and `out` must be valid for writes.
 */
enum H3Status h3_graph_from_triples(size_t n,
                                    const size_t *triples,
                                    size_t count,
                                    struct H3Graph **out);

/**
 * Parses a graph in `.3g` text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` valid for writes.
 */
enum H3Status h3_graph_parse(const char *text, struct H3Graph **out);

/**
 * Releases a graph. Null is ignored.
 *
 * # Safety
 * `g` must come from an `h3_graph_*` constructor and not be used afterwards.
 */
void h3_graph_free(struct H3Graph *g);

/**
 * Vertex and edge counts.
 *
 * # Safety
 * `g` must be a live handle; `n_out` and `m_out` valid for writes.
 */
enum H3Status h3_graph_size(const struct H3Graph *g, size_t *n_out, size_t *m_out);

/**
 * Minimum codegree over all pairs of distinct vertices.
 *
 * # Safety
 * `g` must be a live handle and `out` valid for writes.
 */
enum H3Status h3_graph_min_codegree(const struct H3Graph *g, size_t *out);

/**
 * Tests divisibility; `ell` is only read for `H3_DIVISIBILITY_CYCLE`.
 *
 * # Safety
 * `g` must be a live handle and `out` valid for writes.
 */
enum H3Status h3_check_divisibility(const struct H3Graph *g,
                                    enum H3Divisibility kind,
                                    size_t ell,
                                    bool *out);

/**
 * Exact decomposition into tight `ell`-cycles. The report JSON is written to
 * `json_out` for every outcome; the status is `H3_STATUS_INFEASIBLE` or
 * `H3_STATUS_BUDGET` when no decomposition was found.
 *
 * # Safety
 * `g` must be a live handle and `json_out` valid for writes.
 */
enum H3Status h3_exact_decompose(const struct H3Graph *g,
                                 size_t ell,
                                 uint64_t budget,
                                 char **json_out);

/**
 * Greedy packing of tight `ell`-cycles; writes the report JSON.
 *
 * # Safety
 * `g` must be a live handle and `json_out` valid for writes.
 */
enum H3Status h3_greedy_pack(const struct H3Graph *g, size_t ell, uint64_t seed, char **json_out);

/**
 * Euler tour assembled from a spanning trail and spliced `ell`-cycles; writes
 * the tour as a JSON vertex array.
 *
 * # Safety
 * `g` must be a live handle and `json_out` valid for writes.
 */
enum H3Status h3_euler_tour(const struct H3Graph *g, size_t ell, uint64_t seed, char **json_out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void h3_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* H3CYCLES_H */
