#ifndef SHUFSORT_H
#define SHUFSORT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ShufsortStatus {
  SHUFSORT_STATUS_OK = 0,
  SHUFSORT_STATUS_NULL_POINTER = 1,
  SHUFSORT_STATUS_DUPLICATE_KEY = 2,
  SHUFSORT_STATUS_INVALID_ARGUMENT = 3,
  SHUFSORT_STATUS_OUT_OF_RANGE = 4,
  SHUFSORT_STATUS_BUFFER_TOO_SMALL = 5,
  SHUFSORT_STATUS_INTERNAL = 6,
} ShufsortStatus;

typedef enum ShufsortPolicy {
  SHUFSORT_POLICY_BLIND = 0,
  SHUFSORT_POLICY_GUARDED = 1,
  // Exactly `fixed_swaps` swaps per flagged part.
  SHUFSORT_POLICY_FIXED_COUNT = 2,
} ShufsortPolicy;

// Opaque sequence of distinct keys.
typedef struct ShufsortSequence ShufsortSequence;

typedef struct ShufsortShuffleConfig {
  uintptr_t k;
  uintptr_t z;
  uintptr_t m;
  enum ShufsortPolicy policy;
  uint64_t fixed_swaps;
  uint64_t seed;
} ShufsortShuffleConfig;

typedef struct ShufsortShuffleSummary {
  uintptr_t total_before;
  uintptr_t total_after;
  uintptr_t parts;
  uintptr_t parts_flagged;
  uint64_t swaps_attempted;
  uint64_t swaps_applied;
} ShufsortShuffleSummary;

typedef struct ShufsortSortStats {
  uint64_t comparisons;
  uint64_t moves;
  uint64_t runs_detected;
} ShufsortSortStats;

typedef struct ShufsortImprovement {
  bool holds;
  double ratio;
  double threshold;
} ShufsortImprovement;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer stays
// valid until the next failing call on the same thread.
const char *shufsort_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void shufsort_string_free(char *s);

// Copies `len` keys into a new sequence. Keys must be distinct.
//
// # Safety
// `keys` must point to `len` readable values (it may be null when `len` is 0)
// and `out` must be writable.
enum ShufsortStatus shufsort_sequence_new(const int64_t *keys,
                                          uintptr_t len,
                                          struct ShufsortSequence **out);

// # Safety
// `seq` must be null or a live handle from this library.
void shufsort_sequence_free(struct ShufsortSequence *seq);

// Number of keys, or 0 for a null handle.
//
// # Safety
// `seq` must be null or a live handle.
uintptr_t shufsort_sequence_len(const struct ShufsortSequence *seq);

// Copies the keys into `out`, which must hold at least `capacity` values.
//
// # Safety
// `seq` must be a live handle and `out` writable for `capacity` values.
enum ShufsortStatus shufsort_sequence_copy_keys(const struct ShufsortSequence *seq,
                                                int64_t *out,
                                                uintptr_t capacity);

// Number of adjacent descents.
//
// # Safety
// `seq` must be a live handle and `out` writable.
enum ShufsortStatus shufsort_step_down_runs(const struct ShufsortSequence *seq, uintptr_t *out);

// Change in descents that swapping positions `i < j` would cause.
//
// # Safety
// `seq` must be a live handle and `out` writable.
enum ShufsortStatus shufsort_swap_delta(const struct ShufsortSequence *seq,
                                        uintptr_t i,
                                        uintptr_t j,
                                        int64_t *out);

// Swaps positions `i < j` in place.
//
// # Safety
// `seq` must be a live handle.
enum ShufsortStatus shufsort_sequence_swap(struct ShufsortSequence *seq, uintptr_t i, uintptr_t j);

// Disorder of each of `k` balanced contiguous parts. The number of parts,
// `min(k, len)`, is written to `out_count` even when `capacity` is too small.
//
// # Safety
// `seq` must be a live handle, `out` writable for `capacity` values and
// `out_count` writable.
enum ShufsortStatus shufsort_part_disorders(const struct ShufsortSequence *seq,
                                            uintptr_t k,
                                            uintptr_t *out,
                                            uintptr_t capacity,
                                            uintptr_t *out_count);

// Defaults: 16 parts, threshold 10, budget divisor 2, guarded, seed 0.
struct ShufsortShuffleConfig shufsort_shuffle_config_default(void);

// Shuffles flagged parts of `seq` in place. `out` may be null.
//
// # Safety
// `seq` must be a live handle, `config` readable and `out` null or writable.
enum ShufsortStatus shufsort_preprocess(struct ShufsortSequence *seq,
                                        const struct ShufsortShuffleConfig *config,
                                        struct ShufsortShuffleSummary *out);

// Sorts a copy of `seq` with the run-adaptive merge sort. The sorted copy is
// a new handle; `stats` may be null.
//
// # Safety
// `seq` must be a live handle, `out` writable and `stats` null or writable.
enum ShufsortStatus shufsort_adaptive_sort(const struct ShufsortSequence *seq,
                                           struct ShufsortSequence **out,
                                           struct ShufsortSortStats *stats);

// Sorts a copy of `seq` with the top-down merge sort baseline.
//
// # Safety
// As for [`shufsort_adaptive_sort`].
enum ShufsortStatus shufsort_baseline_sort(const struct ShufsortSequence *seq,
                                           struct ShufsortSequence **out,
                                           struct ShufsortSortStats *stats);

// Number of permutations of `n` keys with exactly `d` descents, as a decimal
// string to be released with [`shufsort_string_free`].
//
// # Safety
// `out` must be writable.
enum ShufsortStatus shufsort_descent_count(uint64_t n, uint64_t d, char **out);

// Probability that a uniform permutation of `n` keys has fewer than `z`
// descents. `out_value`, `out_exceeds_half` and `out_fraction` may each be
// null; the fraction string is exact and must be freed.
//
// # Safety
// Non-null out pointers must be writable.
enum ShufsortStatus shufsort_p_less(uintptr_t n,
                                    int64_t z,
                                    double *out_value,
                                    bool *out_exceeds_half,
                                    char **out_fraction);

// `floor(n / 2) + 1`.
uintptr_t shufsort_claim1_threshold(uintptr_t n);

// Whether lowering the disorder from `before` to `after` pays for a budget
// divisor of `m`, decided exactly.
//
// # Safety
// `out` must be writable.
enum ShufsortStatus shufsort_improvement_condition(uint64_t before,
                                                   uint64_t after,
                                                   uint32_t m,
                                                   struct ShufsortImprovement *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SHUFSORT_H */
