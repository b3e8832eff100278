#ifndef QUADGOLAY_H
#define QUADGOLAY_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * List selectors for [`qg_search_list`].
 */
#define QG_LIST_FIRST_SEQUENCES 0

#define QG_LIST_PAIRS 1

#define QG_LIST_REPRESENTATIVES 2

typedef enum QgStatus {
  QG_STATUS_OK = 0,
  QG_STATUS_NULL_POINTER = 1,
  QG_STATUS_INVALID_ARGUMENT = 2,
  QG_STATUS_PARSE = 3,
  QG_STATUS_IO = 4,
  QG_STATUS_INTERNAL = 5,
} QgStatus;

/**
 * Result of a complete in-memory search.
 */
typedef struct QgSearch QgSearch;

/**
 * Owned list of strings (sequences or pairs).
 */
typedef struct QgStringList QgStringList;

/**
 * Filter parameters; see [`qg_default_schedule`].
 */
typedef struct QgSchedule {
  size_t coarse_points;
  size_t refine_rounds;
  double epsilon;
  size_t final_points;
} QgSchedule;

/**
 * One row of the counts table. `l_odd` is -1 when the odd half is empty.
 */
typedef struct QgCounts {
  size_t n;
  uint64_t l_even;
  int64_t l_odd;
  uint64_t l_a;
  uint64_t seqs;
  uint64_t all;
  uint64_t inequiv;
} QgCounts;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or an empty string.
 * The pointer stays valid until the next library call on this thread.
 */
const char *qg_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void qg_string_free(char *s);

struct QgSchedule qg_default_schedule(void);

/**
 * Writes whether `a` and `b` form a Golay pair.
 *
 * # Safety
 * `a`, `b` must be valid strings and `result` writable.
 */
enum QgStatus qg_is_golay_pair(const char *a, const char *b, bool *result);

/**
 * Nonperiodic autocorrelation of `seq` at shift `s`.
 *
 * # Safety
 * `seq` must be a valid string, `re` and `im` writable.
 */
enum QgStatus qg_autocorrelation(const char *seq, size_t s, int64_t *re, int64_t *im);

/**
 * Normal form of the pair `"<A> <B>"`; `*normalized` receives a new string.
 *
 * # Safety
 * `pair` must be a valid string and `normalized` writable.
 */
enum QgStatus qg_normalize(const char *pair, char **normalized);

/**
 * Every `B` with `b0 = 1` forming a Golay pair with `a`, sorted.
 *
 * # Safety
 * `a` must be a valid string and `list` writable.
 */
enum QgStatus qg_partners(const char *a, struct QgStringList **list);

/**
 * # Safety
 * `list` must be null or a live handle.
 */
size_t qg_string_list_len(const struct QgStringList *list);

/**
 * Borrowed item `index`, or null when out of range. The pointer lives as
 * long as the list.
 *
 * # Safety
 * `list` must be null or a live handle.
 */
const char *qg_string_list_get(const struct QgStringList *list, size_t index);

/**
 * # Safety
 * `list` must be null or a handle not yet freed.
 */
void qg_string_list_free(struct QgStringList *list);

/**
 * Runs every phase for length `n` in memory. `schedule` may be null for
 * the defaults.
 *
 * # Safety
 * `schedule` must be null or readable, `search` writable.
 */
enum QgStatus qg_search_run(size_t n, const struct QgSchedule *schedule, struct QgSearch **search);

/**
 * # Safety
 * `search` must be a live handle and `counts` writable.
 */
enum QgStatus qg_search_counts(const struct QgSearch *search, struct QgCounts *counts);

/**
 * Copies one of the search's lists (a `QG_LIST_*` selector) into a new
 * string list.
 *
 * # Safety
 * `search` must be a live handle and `list` writable.
 */
enum QgStatus qg_search_list(const struct QgSearch *search,
                             uint32_t which,
                             struct QgStringList **list);

/**
 * # Safety
 * `search` must be null or a handle not yet freed.
 */
void qg_search_free(struct QgSearch *search);

/**
 * Compares `counts` with the published pair counts. `*passed` is false when
 * no reference row exists for `counts.n`.
 *
 * # Safety
 * `counts` must be readable and `passed` writable.
 */
enum QgStatus qg_verify_counts(const struct QgCounts *counts, bool *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUADGOLAY_H */
