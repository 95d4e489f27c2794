/* C interface of the eternal vertex cover toolkit. */

#ifndef EVC_H
#define EVC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every entry point.
 */
typedef enum EvcStatus {
  EVC_STATUS_OK = 0,
  /**
   * A pointer was null or an argument out of range.
   */
  EVC_STATUS_INVALID_ARGUMENT = 1,
  /**
   * The input text or edge set is malformed.
   */
  EVC_STATUS_PARSE_ERROR = 2,
  /**
   * The operation needs a melon graph and the input is not one.
   */
  EVC_STATUS_NOT_A_MELON = 3,
  /**
   * The instance exceeds a configured resource limit.
   */
  EVC_STATUS_LIMIT_EXCEEDED = 4,
  /**
   * A strategy class failed its closure check.
   */
  EVC_STATUS_VERIFY_FAILED = 5,
  EVC_STATUS_INTERNAL_ERROR = 6,
} EvcStatus;

/**
 * Graph family of a handle, as recognized at construction.
 */
typedef enum EvcFamily {
  EVC_FAMILY_PATH = 0,
  EVC_FAMILY_CYCLE = 1,
  EVC_FAMILY_MELON = 2,
  EVC_FAMILY_UNRECOGNIZED = 3,
} EvcFamily;

/**
 * Parity case of a melon; `None` when the graph is not a melon.
 */
typedef enum EvcCase {
  EVC_CASE_SINGLE_EDGE = 0,
  EVC_CASE_PATH_CASE = 1,
  EVC_CASE_CYCLE_CASE = 2,
  EVC_CASE_ODD = 3,
  EVC_CASE_EVEN = 4,
  EVC_CASE_MIXED_BOTH = 5,
  EVC_CASE_MIXED_ONE_ODD = 6,
  EVC_CASE_MIXED_ONE_EVEN = 7,
  EVC_CASE_NONE = 8,
} EvcCase;

/**
 * Opaque graph handle; create with one of the `evc_graph_*` constructors
 * and release with [`evc_graph_free`].
 */
typedef struct EvcGraph EvcGraph;

/**
 * Closed-form solver output for a melon handle.
 */
typedef struct EvcSolveResult {
  size_t vertices;
  size_t edge_count;
  enum EvcFamily family;
  enum EvcCase case_tag;
  uint64_t vc;
  uint64_t evc;
  uint64_t class_size;
} EvcSolveResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a graph from `edge_count` vertex pairs laid out as
 * `[u0, v0, u1, v1, ...]`. Writes a handle to `out` on success.
 *
 * # Safety
 * `endpoints` must point to `2 * edge_count` readable elements and `out`
 * must be a valid pointer.
 */
enum EvcStatus evc_graph_from_edges(size_t vertex_count,
                                    const size_t *endpoints,
                                    size_t edge_count,
                                    struct EvcGraph **out);

/**
 * Builds a graph from an edge list document (one `u v` pair per line,
 * `#` comments, optional `n <count>` header).
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum EvcStatus evc_graph_from_edge_list(const char *text, struct EvcGraph **out);

/**
 * Builds the canonical melon with the given path lengths.
 *
 * # Safety
 * `lengths` must point to `count` readable elements and `out` must be a
 * valid pointer.
 */
enum EvcStatus evc_graph_from_melon_lengths(const size_t *lengths,
                                            size_t count,
                                            struct EvcGraph **out);

/**
 * Releases a handle. Passing null is a no-op.
 *
 * # Safety
 * `g` must be a pointer previously returned by a constructor, or null.
 */
void evc_graph_free(struct EvcGraph *g);

/**
 * Number of vertices behind the handle; 0 for null.
 *
 * # Safety
 * `g` must be a live handle or null.
 */
size_t evc_graph_vertex_count(const struct EvcGraph *g);

/**
 * Number of edges behind the handle; 0 for null.
 *
 * # Safety
 * `g` must be a live handle or null.
 */
size_t evc_graph_edge_count(const struct EvcGraph *g);

/**
 * Closed-form melon solver. Fails with `NotAMelon` when the handle does
 * not hold a recognized melon.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum EvcStatus evc_solve(const struct EvcGraph *g, struct EvcSolveResult *out);

/**
 * Exact game solver: writes the eternal vertex cover number and the size
 * of the maximal safe family. `max_vertices` bounds the exhaustive search
 * (pass 0 for the default limit).
 *
 * # Safety
 * `g` must be a live handle; `out_evc` and `out_safe_size` must be valid
 * pointers.
 */
enum EvcStatus evc_oracle(const struct EvcGraph *g,
                          size_t max_vertices,
                          uint64_t *out_evc,
                          uint64_t *out_safe_size);

/**
 * Builds the strategy class of a melon handle and checks the closure
 * property for every configuration/edge pair; writes the number of checked
 * pairs. Returns `VerifyFailed` when any pair fails.
 *
 * # Safety
 * `g` must be a live handle and `out_checked` a valid pointer.
 */
enum EvcStatus evc_verify_strategy(const struct EvcGraph *g, size_t *out_checked);

/**
 * Static description of a status code.
 */
const char *evc_status_message(enum EvcStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EVC_H */
