/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef MDMS_H
#define MDMS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible call.
typedef enum MdmsStatus {
  MDMS_STATUS_OK = 0,
  MDMS_STATUS_NULL_POINTER = 1,
  MDMS_STATUS_INVALID_UTF8 = 2,
  MDMS_STATUS_PARSE = 3,
  MDMS_STATUS_PARAMETER = 4,
  MDMS_STATUS_SIZE_GUARD = 5,
  MDMS_STATUS_INDEX_OUT_OF_RANGE = 6,
  MDMS_STATUS_INFEASIBLE = 7,
  MDMS_STATUS_BUFFER_TOO_SMALL = 8,
  MDMS_STATUS_PANIC = 9,
} MdmsStatus;

typedef enum MdmsAlgorithm {
  MDMS_ALGORITHM_GIST = 0,
  MDMS_ALGORITHM_GIST_EXHAUSTIVE = 1,
  MDMS_ALGORITHM_SIMPLE = 2,
  MDMS_ALGORITHM_GREEDY = 3,
  MDMS_ALGORITHM_RANDOM = 4,
  MDMS_ALGORITHM_BRUTE_FORCE = 5,
} MdmsAlgorithm;

// Opaque metric instance.
typedef struct MdmsInstance MdmsInstance;

// Opaque solver result.
typedef struct MdmsSolution MdmsSolution;

// Opaque utility function.
typedef struct MdmsUtility MdmsUtility;

// Solver options. Obtain defaults from [`mdms_options_default`].
typedef struct MdmsOptions {
  // Geometric grid parameter in (0, 1).
  double epsilon;
  // Seed for the random baseline.
  uint64_t seed;
  // Nonzero selects the exhaustive threshold schedule.
  uint8_t exhaustive;
  // Nonzero sweeps GIST thresholds on a thread pool.
  uint8_t parallel;
} MdmsOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static nul-terminated string.
const char *mdms_version(void);

// Message for the last failed call on this thread. Valid until the next
// failing call on the same thread; empty when nothing has failed.
const char *mdms_last_error(void);

struct MdmsOptions mdms_options_default(void);

// Parses instance JSON `{"n", "metric", "points"|"matrix"}`.
//
// # Safety
// `json` must be a nul-terminated string and `out` a writable pointer.
enum MdmsStatus mdms_instance_from_json(const char *json, struct MdmsInstance **out);

// Euclidean instance from `n * dim` row-major coordinates.
//
// # Safety
// `coords` must hold `n * dim` doubles and `out` must be writable.
enum MdmsStatus mdms_instance_euclidean(const double *coords,
                                        size_t n,
                                        size_t dim,
                                        struct MdmsInstance **out);

// Number of points, or 0 for a null handle.
//
// # Safety
// `instance` must be null or a live handle.
size_t mdms_instance_len(const struct MdmsInstance *instance);

// Distance between points `i` and `j`.
//
// # Safety
// `instance` must be a live handle and `out` writable.
enum MdmsStatus mdms_instance_distance(const struct MdmsInstance *instance,
                                       size_t i,
                                       size_t j,
                                       double *out);

// # Safety
// `instance` must be null or a handle not yet freed.
void mdms_instance_free(struct MdmsInstance *instance);

// Parses utility JSON tagged by `"kind"`.
//
// # Safety
// `json` must be a nul-terminated string and `out` writable.
enum MdmsStatus mdms_utility_from_json(const char *json, struct MdmsUtility **out);

// Modular utility `g(S) = sum of weights[i]`.
//
// # Safety
// `weights` must hold `n` doubles and `out` must be writable.
enum MdmsStatus mdms_utility_linear(const double *weights, size_t n, struct MdmsUtility **out);

// Value and marginal queries answered so far by this utility.
//
// # Safety
// `utility` must be null or a live handle.
uint64_t mdms_utility_queries(const struct MdmsUtility *utility);

// # Safety
// `utility` must be null or a handle not yet freed.
void mdms_utility_free(struct MdmsUtility *utility);

// `f(S) = g(S) + lambda * div(S)` for the index set `set[0..len]`.
//
// # Safety
// Handles must be live, `set` must hold `len` indices and `out_f` must be
// writable.
enum MdmsStatus mdms_objective(const struct MdmsInstance *instance,
                               const struct MdmsUtility *utility,
                               double lambda,
                               const size_t *set,
                               size_t len,
                               double *out_f);

// Runs `algorithm` with cardinality `k`. `options` may be null for the
// defaults.
//
// # Safety
// Handles must be live, `options` null or readable, `out` writable.
enum MdmsStatus mdms_solve(const struct MdmsInstance *instance,
                           const struct MdmsUtility *utility,
                           enum MdmsAlgorithm algorithm,
                           double lambda,
                           size_t k,
                           const struct MdmsOptions *options,
                           struct MdmsSolution **out);

// Number of selected points, or 0 for a null handle.
//
// # Safety
// `solution` must be null or a live handle.
size_t mdms_solution_len(const struct MdmsSolution *solution);

// Copies the selected indices (ascending) into `buf`. Fails with
// `BufferTooSmall` when `cap` is below [`mdms_solution_len`].
//
// # Safety
// `solution` must be live and `buf` must have room for `cap` indices.
enum MdmsStatus mdms_solution_selected(const struct MdmsSolution *solution,
                                       size_t *buf,
                                       size_t cap);

// Writes `f`, `g` and `div` of the solution. Any output pointer may be null.
//
// # Safety
// `solution` must be live; non-null outputs must be writable.
enum MdmsStatus mdms_solution_values(const struct MdmsSolution *solution,
                                     double *f,
                                     double *g,
                                     double *div);

// Utility queries issued by the run that produced `solution`.
//
// # Safety
// `solution` must be null or a live handle.
uint64_t mdms_solution_oracle_calls(const struct MdmsSolution *solution);

// Winning GIST threshold, or a negative value when the winner came from the
// `d = 0` pass, the diametrical pair, or another algorithm.
//
// # Safety
// `solution` must be null or a live handle.
double mdms_solution_threshold(const struct MdmsSolution *solution);

// # Safety
// `solution` must be null or a handle not yet freed.
void mdms_solution_free(struct MdmsSolution *solution);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MDMS_H */
