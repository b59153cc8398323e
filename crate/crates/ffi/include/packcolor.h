/* C interface for the packcolor library. Generated by cbindgen. */

#ifndef PACKCOLOR_H
#define PACKCOLOR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status of every FFI call. Values 0..=4 match the CLI exit codes.
 */
typedef enum PcStatus {
  /**
   * The call succeeded.
   */
  PC_STATUS_OK = 0,
  /**
   * A coloring failed verification.
   */
  PC_STATUS_INVALID_COLORING = 1,
  /**
   * Unparseable input or a violated precondition.
   */
  PC_STATUS_INPUT_ERROR = 2,
  /**
   * The constructive solver stalled on every restart.
   */
  PC_STATUS_RESTARTS_EXHAUSTED = 3,
  /**
   * An exact search exhausted its node budget.
   */
  PC_STATUS_BUDGET_EXHAUSTED = 4,
  /**
   * The input is the Petersen graph, the one graph the constructive
   * method provably cannot color.
   */
  PC_STATUS_PETERSEN = 5,
  /**
   * A required pointer argument was null.
   */
  PC_STATUS_NULL_POINTER = 6,
  /**
   * An internal invariant failed (a caught panic).
   */
  PC_STATUS_INTERNAL = 7,
} PcStatus;

/**
 * A parsed graph. Opaque; create with `pc_graph_parse_graph6` or
 * `pc_graph_named`, release with `pc_graph_free`.
 */
typedef struct PcGraph PcGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses one graph6 line into a fresh handle.
 *
 * # Safety
 * `line` must be a valid NUL-terminated string and `out` a valid pointer;
 * on `PC_STATUS_OK` the caller owns `*out` and must free it with
 * `pc_graph_free`.
 */
enum PcStatus pc_graph_parse_graph6(const char *line, struct PcGraph **out);

/**
 * Builds a named graph: petersen, k4, k33, cycle(k), path(k), prism(k).
 *
 * # Safety
 * Same contract as `pc_graph_parse_graph6`.
 */
enum PcStatus pc_graph_named(const char *id, struct PcGraph **out);

/**
 * Releases a graph handle. Null is a no-op.
 *
 * # Safety
 * `g` must be a handle from this library, not yet freed.
 */
void pc_graph_free(struct PcGraph *g);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `g` must be a live handle or null.
 */
size_t pc_graph_vertex_count(const struct PcGraph *g);

/**
 * Number of edges, or 0 for a null handle.
 *
 * # Safety
 * `g` must be a live handle or null.
 */
size_t pc_graph_edge_count(const struct PcGraph *g);

/**
 * Writes the graph's graph6 encoding through `out`.
 *
 * # Safety
 * `g` must be a live handle; strings returned through `out` are freed with
 * `pc_string_free`.
 */
enum PcStatus pc_graph_to_graph6(const struct PcGraph *g, char **out);

/**
 * Runs the constructive (1,1,2,2) solver. On `PC_STATUS_OK`, `out_json`
 * receives a certificate document re-verified before emission; on
 * `PC_STATUS_PETERSEN` nothing is written (the sentinel is the answer).
 *
 * # Safety
 * `g` must be a live handle; `out_json` may be null or a valid pointer;
 * returned strings are freed with `pc_string_free`.
 */
enum PcStatus pc_solve_1122(const struct PcGraph *g,
                            uint64_t seed,
                            uint32_t restarts,
                            char **out_json);

/**
 * Checks a certificate JSON document against a graph. Returns
 * `PC_STATUS_OK` when valid; `PC_STATUS_INVALID_COLORING` writes the first
 * violation's description through `out_message` (when non-null).
 *
 * # Safety
 * `g` must be a live handle and `certificate_json` a valid NUL-terminated
 * string; strings returned through `out_message` are freed with
 * `pc_string_free`.
 */
enum PcStatus pc_verify(const struct PcGraph *g, const char *certificate_json, char **out_message);

/**
 * Colors the 1-subdivision of `g` with schedule (1,2,3,4,5) and writes the
 * certificate (lineage included) through `out_json`.
 *
 * # Safety
 * Same contract as `pc_solve_1122`.
 */
enum PcStatus pc_subdivide_color(const struct PcGraph *g,
                                 uint64_t seed,
                                 uint32_t restarts,
                                 uint64_t budget,
                                 char **out_json);

/**
 * Frees a string produced by this library. Null is a no-op.
 *
 * # Safety
 * `s` must come from this library, not yet freed.
 */
void pc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PACKCOLOR_H */
