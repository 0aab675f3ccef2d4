#ifndef RADO_LAB_H
#define RADO_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum RlStatus {
  RL_STATUS_OK = 0,
  RL_STATUS_NULL_POINTER = 1,
  RL_STATUS_INVALID_UTF8 = 2,
  RL_STATUS_INVALID_ARGUMENT = 3,
  RL_STATUS_GEOMETRY = 4,
  RL_STATUS_DECOMPOSITION = 5,
  RL_STATUS_GRAPH = 6,
  RL_STATUS_PANIC = 7,
} RlStatus;

// Opaque unit ball.
typedef struct RlBall RlBall;

// Opaque l_inf-decomposition.
typedef struct RlDecomposition RlDecomposition;

// Opaque random geometric graph.
typedef struct RlGraph RlGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *rl_last_error(void);

// Frees a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void rl_string_free(char *s);

// Library version as a static string.
const char *rl_version(void);

// Looks up a builtin ball such as `"cube_3"` or `"hexagon"`.
//
// # Safety
// `name` must be a NUL-terminated string; `out` must be writable.
enum RlStatus rl_ball_builtin(const char *name, struct RlBall **out);

// Parses `{"dim": d, "vertices": [["p/q", ...], ...]}` and validates it.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum RlStatus rl_ball_from_json(const char *json, struct RlBall **out);

// # Safety
// `ball` must be null or a live handle; `out` must be writable.
enum RlStatus rl_ball_to_json(const struct RlBall *ball, char **out);

// Dimension of the ball, or 0 for a null handle.
//
// # Safety
// `ball` must be null or a live handle.
uintptr_t rl_ball_dim(const struct RlBall *ball);

// Number of vertices, or 0 for a null handle.
//
// # Safety
// `ball` must be null or a live handle.
uintptr_t rl_ball_vertex_count(const struct RlBall *ball);

// Exact norm of the vector with `len` rational coordinates; the result is
// written as a `"p/q"` string.
//
// # Safety
// `coords` must point to `len` NUL-terminated strings; `out` must be writable.
enum RlStatus rl_ball_norm(const struct RlBall *ball,
                           const char *const *coords,
                           uintptr_t len,
                           char **out);

// # Safety
// `ball` must be null or a handle from this library, not yet freed.
void rl_ball_free(struct RlBall *ball);

// Computes and cross-checks the l_inf-decomposition of `ball`.
//
// # Safety
// `ball` must be a live handle; `out` must be writable.
enum RlStatus rl_decompose(const struct RlBall *ball, struct RlDecomposition **out);

// Number of l_inf-directions, or 0 for a null handle.
//
// # Safety
// `dec` must be null or a live handle.
uintptr_t rl_decomposition_linf_dim(const struct RlDecomposition *dec);

// Dimension of the complement `U`, or 0 for a null handle.
//
// # Safety
// `dec` must be null or a live handle.
uintptr_t rl_decomposition_u_dim(const struct RlDecomposition *dec);

// # Safety
// `dec` must be a live handle; `out` must be writable.
enum RlStatus rl_decomposition_to_json(const struct RlDecomposition *dec, char **out);

// # Safety
// `dec` must be null or a handle from this library, not yet freed.
void rl_decomposition_free(struct RlDecomposition *dec);

// Samples `n` typical points in `[-window, window]^d` and keeps each unit
// graph edge with probability `p`. `window` and `p` are rational strings.
//
// # Safety
// `ball` must be a live handle, `window` and `p` NUL-terminated strings,
// and `out` writable.
enum RlStatus rl_graph_sample(const struct RlBall *ball,
                              uintptr_t n,
                              const char *window,
                              const char *p,
                              uint64_t seed,
                              struct RlGraph **out);

// Reads a graph file produced by `rl_graph_to_json` or the CLI.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum RlStatus rl_graph_from_json(const char *json, struct RlGraph **out);

// # Safety
// `graph` must be a live handle; `out` must be writable.
enum RlStatus rl_graph_to_json(const struct RlGraph *graph, char **out);

// # Safety
// `graph` must be null or a live handle.
uintptr_t rl_graph_vertex_count(const struct RlGraph *graph);

// # Safety
// `graph` must be null or a live handle.
uintptr_t rl_graph_edge_count(const struct RlGraph *graph);

// Hop distance against norm distance for `k = 2..=k_max`, as JSON.
//
// # Safety
// `graph` must be a live handle; `out` must be writable.
enum RlStatus rl_graph_bj_audit(const struct RlGraph *graph, uint32_t k_max, char **out);

// # Safety
// `graph` must be null or a handle from this library, not yet freed.
void rl_graph_free(struct RlGraph *graph);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RADO_LAB_H */
