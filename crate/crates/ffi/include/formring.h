#ifndef FORMRING_H
#define FORMRING_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Answer of an elementary-membership query.
 */
typedef enum FrAnswer {
  FR_ANSWER_NO = 0,
  FR_ANSWER_YES = 1,
  FR_ANSWER_UNKNOWN = 2,
} FrAnswer;

/**
 * Status of a call. Library errors are 100 + their kind.
 */
typedef enum FrStatus {
  FR_STATUS_OK = 0,
  FR_STATUS_NULL_POINTER = 1,
  FR_STATUS_INVALID_UTF8 = 2,
  FR_STATUS_PANIC = 3,
  FR_STATUS_OUT_OF_RANGE = 4,
  FR_STATUS_RING = 101,
  FR_STATUS_PARSE = 102,
  FR_STATUS_MULTIPLIER_INVALID = 103,
  FR_STATUS_INVALID_FORM_PARAMETER = 104,
  FR_STATUS_LOCALIZATION_ZERO = 105,
  FR_STATUS_INVALID_IDEAL = 106,
  FR_STATUS_DESCRIPTOR = 107,
  FR_STATUS_SINGULAR = 108,
  FR_STATUS_DIMENSION = 109,
  FR_STATUS_CONSTRAINT = 110,
  FR_STATUS_PAIRING = 111,
  FR_STATUS_CERTIFICATION = 112,
  FR_STATUS_PRECONDITION = 113,
  FR_STATUS_UNSUPPORTED = 114,
  FR_STATUS_RESOURCE_LIMIT = 115,
  FR_STATUS_IO = 116,
} FrStatus;

typedef struct FrGroup FrGroup;

typedef struct FrMatrix FrMatrix;

typedef struct FrOracle FrOracle;

typedef struct FrWord FrWord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success. Valid until the next call.
 */
const char *fr_last_error(void);

/**
 * Library version as a static string.
 */
const char *fr_version(void);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void fr_string_free(char *s);

/**
 * Parse a group spec such as `zmod:5:lambda=4/quad:3` or `zmod:4:lambda=3/herm:4:a=0`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
enum FrStatus fr_group_parse(const char *spec, struct FrGroup **out);

/**
 * # Safety
 * `g` must come from `fr_group_parse` or be null.
 */
void fr_group_free(struct FrGroup *g);

/**
 * Matrix size 2n, or 0 for a null handle.
 *
 * # Safety
 * `g` must be a live handle or null.
 */
size_t fr_group_dim(const struct FrGroup *g);

/**
 * Number of ring elements; elements are the indices 0..size.
 *
 * # Safety
 * `g` must be a live handle or null.
 */
size_t fr_group_ring_size(const struct FrGroup *g);

/**
 * Canonical spec string of the group; free with `fr_string_free`.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum FrStatus fr_group_spec(const struct FrGroup *g, char **out);

/**
 * A 2n×2n matrix from `len` = (2n)² row-major element indices.
 *
 * # Safety
 * `data` must point to `len` readable values.
 */
enum FrStatus fr_matrix_new(const struct FrGroup *g,
                            const uint32_t *data,
                            size_t len,
                            struct FrMatrix **out);

/**
 * # Safety
 * `m` must come from this library or be null.
 */
void fr_matrix_free(struct FrMatrix *m);

/**
 * Copy the row-major entries into `buf` (capacity `len`); returns the entry count, or 0 if `buf` is
 * too small or a pointer is null.
 *
 * # Safety
 * `buf` must have room for `len` values.
 */
size_t fr_matrix_data(const struct FrMatrix *m, uint32_t *buf, size_t len);

/**
 * Whether the matrix preserves the group's form (and the quadratic condition, for quadratic groups).
 *
 * # Safety
 * Handles must be live; `out` must be valid.
 */
enum FrStatus fr_group_is_member(const struct FrGroup *g,
                                 const struct FrMatrix *m,
                                 bool *out);

/**
 * Parse a JSON word (list of {family, i, j, payload[, inverse]} with 1-based indices).
 *
 * # Safety
 * `json` must be a NUL-terminated string; handles must be live.
 */
enum FrStatus fr_word_from_json(const struct FrGroup *g, const char *json, struct FrWord **out);

/**
 * # Safety
 * Handles must be live; `out` must be valid.
 */
enum FrStatus fr_word_to_json(const struct FrGroup *g, const struct FrWord *w, char **out);

/**
 * # Safety
 * `w` must come from this library or be null.
 */
void fr_word_free(struct FrWord *w);

/**
 * Number of letters, or 0 for a null handle.
 *
 * # Safety
 * `w` must be live or null.
 */
size_t fr_word_len(const struct FrWord *w);

/**
 * # Safety
 * Handles must be live; `out` must be valid.
 */
enum FrStatus fr_word_eval(const struct FrGroup *g, const struct FrWord *w, struct FrMatrix **out);

/**
 * A word carrying the isotropic unimodular vector `v` (length 2n) to e_2n.
 *
 * # Safety
 * `v` must point to `len` readable values; handles must be live.
 */
enum FrStatus fr_reduce_vector(const struct FrGroup *g,
                               const uint32_t *v,
                               size_t len,
                               struct FrWord **out);

/**
 * Enumerate the elementary group breadth-first, keeping at most `cap` elements.
 *
 * # Safety
 * Handles must be live; `out` must be valid.
 */
enum FrStatus fr_oracle_bfs(const struct FrGroup *g, size_t cap, struct FrOracle **out);

/**
 * Greedy constructive oracle: answers yes with a witness, or unknown.
 *
 * # Safety
 * Handles must be live; `out` must be valid.
 */
enum FrStatus fr_oracle_constructive(const struct FrGroup *g,
                                     size_t max_steps,
                                     struct FrOracle **out);

/**
 * # Safety
 * `o` must come from this library or be null.
 */
void fr_oracle_free(struct FrOracle *o);

/**
 * Enumerated elements (0 outside BFS mode).
 *
 * # Safety
 * `o` must be live or null.
 */
size_t fr_oracle_size(const struct FrOracle *o);

/**
 * Whether the enumeration finished within its cap.
 *
 * # Safety
 * `o` must be live or null.
 */
bool fr_oracle_complete(const struct FrOracle *o);

/**
 * Elementary membership of `m`. On yes, `witness` (if not null) receives a word evaluating to `m`, or
 * null when the mode gives none.
 *
 * # Safety
 * Handles must be live; `answer` must be valid; `witness` may be null.
 */
enum FrStatus fr_oracle_contains(const struct FrOracle *o,
                                 const struct FrMatrix *m,
                                 enum FrAnswer *answer,
                                 struct FrWord **witness);

/**
 * Run a named property suite and return its JSON report; `verdict` gets 0 (pass), 1 (fail) or 2
 * (unknowns only).
 *
 * # Safety
 * Strings must be NUL-terminated; out-pointers must be valid.
 */
enum FrStatus fr_run_suite(const char *name,
                           const char *group,
                           uint64_t seed,
                           size_t cases,
                           int32_t *verdict,
                           char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FORMRING_H */
