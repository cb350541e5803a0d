#ifndef NEWSREUSE_H
#define NEWSREUSE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum NrStatus {
  NR_STATUS_OK = 0,
  NR_STATUS_NULL_ARGUMENT = 1,
  NR_STATUS_INVALID_UTF8 = 2,
  NR_STATUS_MISSING_INPUT = 3,
  NR_STATUS_PARSE = 4,
  NR_STATUS_PROVIDER = 5,
  NR_STATUS_INVARIANT = 6,
  NR_STATUS_INVALID_ARGUMENT = 7,
  NR_STATUS_BUFFER_TOO_SMALL = 8,
  NR_STATUS_PANIC = 9,
} NrStatus;

typedef enum NrPositionBin {
  NR_POSITION_BIN_BEGINNING = 0,
  NR_POSITION_BIN_MIDDLE = 1,
  NR_POSITION_BIN_END = 2,
} NrPositionBin;

typedef enum NrRole {
  NR_ROLE_TARGET = 0,
  NR_ROLE_SOURCE = 1,
} NrRole;

/**
 * Opaque corpus handle.
 */
typedef struct NrCorpus NrCorpus;

/**
 * Opaque match set handle.
 */
typedef struct NrMatchSet NrMatchSet;

typedef struct NrChiSquare {
  double statistic;
  uint32_t df;
  double p_value;
} NrChiSquare;

typedef struct NrStageCounts {
  uint64_t target_articles;
  uint64_t source_articles;
  uint64_t target_sentences;
  uint64_t source_sentences;
  uint64_t pairs;
} NrStageCounts;

typedef struct NrAccounting {
  struct NrStageCounts raw;
  struct NrStageCounts true_matches;
  struct NrStageCounts earliest;
  struct NrStageCounts false_positives;
} NrAccounting;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer stays
 * valid until the next call into this library from the same thread.
 */
const char *nr_last_error(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void nr_string_free(char *s);

/**
 * Cleans raw article text. The result is freed with [`nr_string_free`].
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a writable pointer.
 */
enum NrStatus nr_clean_text(const char *text, char **out);

/**
 * Writes the `dim`-dimensional hash embedding of `text` into `out`, which
 * must hold at least `dim` floats.
 *
 * # Safety
 * `text` must be NUL-terminated and `out` must point to `out_len` floats.
 */
enum NrStatus nr_hash_embed(const char *text, size_t dim, float *out, size_t out_len);

/**
 * Cosine similarity of two vectors of length `len`.
 *
 * # Safety
 * `a` and `b` must each point to `len` floats.
 */
enum NrStatus nr_cosine(const float *a, const float *b, size_t len, float *out);

/**
 * Chi-square test of independence on a row-major `rows` x `cols` table.
 *
 * # Safety
 * `counts` must point to `rows * cols` values.
 */
enum NrStatus nr_chi_square(const uint64_t *counts,
                            size_t rows,
                            size_t cols,
                            struct NrChiSquare *out);

/**
 * Position bin of sentence `idx` in an article of `n` sentences.
 *
 * # Safety
 * `out` must be writable.
 */
enum NrStatus nr_position_bin(size_t idx, size_t n, enum NrPositionBin *out);

/**
 * Loads a JSONL corpus. `languages` is a comma-separated list of language
 * codes, or NULL for the default set.
 *
 * # Safety
 * `path` and a non-NULL `languages` must be NUL-terminated; `out` writable.
 */
enum NrStatus nr_corpus_load(const char *path,
                             enum NrRole role,
                             const char *languages,
                             struct NrCorpus **out);

/**
 * Number of articles in the corpus; 0 for NULL.
 *
 * # Safety
 * `corpus` must be NULL or a live handle.
 */
size_t nr_corpus_len(const struct NrCorpus *corpus);

/**
 * # Safety
 * `corpus` must be NULL or a handle from [`nr_corpus_load`], freed once.
 */
void nr_corpus_free(struct NrCorpus *corpus);

/**
 * Runs matching with the built-in hash embedder and heuristic tagger.
 *
 * # Safety
 * `target` and `source` must be live handles; `out` writable.
 */
enum NrStatus nr_match_run(const struct NrCorpus *target,
                           const struct NrCorpus *source,
                           float threshold,
                           size_t dim,
                           size_t parallelism,
                           struct NrMatchSet **out);

/**
 * Number of raw pairs, false positives included; 0 for NULL.
 *
 * # Safety
 * `set` must be NULL or a live handle.
 */
size_t nr_match_set_len(const struct NrMatchSet *set);

/**
 * # Safety
 * `set` must be a live handle and `out` writable.
 */
enum NrStatus nr_match_set_accounting(const struct NrMatchSet *set, struct NrAccounting *out);

/**
 * Writes every record as one JSON object per line.
 *
 * # Safety
 * `set` must be a live handle and `path` NUL-terminated.
 */
enum NrStatus nr_match_set_write_jsonl(const struct NrMatchSet *set, const char *path);

/**
 * # Safety
 * `set` must be NULL or a handle from [`nr_match_run`], freed once.
 */
void nr_match_set_free(struct NrMatchSet *set);

/**
 * Runs the full pipeline from a JSON config file and writes every artifact.
 * Returns the command-line exit code (0 on success).
 *
 * # Safety
 * `config_path` must be NUL-terminated.
 */
int nr_run_config(const char *config_path);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NEWSREUSE_H */
