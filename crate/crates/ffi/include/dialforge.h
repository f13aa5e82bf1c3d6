#ifndef DIALFORGE_H
#define DIALFORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DfStatus {
  DF_STATUS_OK = 0,
  DF_STATUS_NULL_POINTER = 1,
  DF_STATUS_INVALID_UTF8 = 2,
  DF_STATUS_INVALID_ARGUMENT = 3,
  DF_STATUS_IO = 4,
  DF_STATUS_PARSE = 5,
  DF_STATUS_EMPTY_INPUT = 6,
  DF_STATUS_MISMATCH = 7,
  DF_STATUS_PANIC = 8,
} DfStatus;

typedef enum DfLang {
  DF_LANG_EN = 0,
  DF_LANG_KO = 1,
} DfLang;

typedef enum DfKind {
  DF_KIND_DOCUMENT = 0,
  DF_KIND_DIALOGUE = 1,
} DfKind;

// Opaque corpus handle.
typedef struct DfCorpus DfCorpus;

typedef struct DfTransformReport {
  size_t input_pairs;
  size_t output_pairs;
  size_t omitted;
  size_t omit_skipped_single_sentence;
  size_t omit_skipped_zero_overlap;
} DfTransformReport;

typedef struct DfExtractivenessSummary {
  size_t pairs;
  double mean_density;
  double median_density;
  double mean_coverage;
  double median_coverage;
} DfExtractivenessSummary;

typedef struct DfRougeScore {
  double precision;
  double recall;
  double f1;
} DfRougeScore;

typedef struct DfRouge {
  struct DfRougeScore rouge1;
  struct DfRougeScore rouge2;
  struct DfRougeScore rouge_l;
} DfRouge;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failing call on this thread. Never null; owned by
// the library.
const char *df_last_error(void);

// # Safety
// `s` must come from this library, or be null.
void df_string_free(char *s);

// Reads a line-delimited record file.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
enum DfStatus df_corpus_read(const char *path,
                             enum DfLang lang,
                             enum DfKind kind,
                             struct DfCorpus **out);

// # Safety
// `corpus` must be a live handle; `path` a NUL-terminated string.
enum DfStatus df_corpus_write(const struct DfCorpus *corpus, const char *path);

// Number of pairs, or 0 for a null handle.
//
// # Safety
// `corpus` must be a live handle or null.
size_t df_corpus_len(const struct DfCorpus *corpus);

// # Safety
// `corpus` must come from this library, or be null. It is invalid afterwards.
void df_corpus_free(struct DfCorpus *corpus);

// Applies a variant (`D`, `S`, `O`, `D+S`, `D+O`, `S+O`, `D+S+O` or
// `Naive`) to every pair of a document corpus. `report` may be null.
//
// # Safety
// Pointers must be valid as documented; `out` must be writable.
enum DfStatus df_corpus_transform(const struct DfCorpus *corpus,
                                  const char *variant,
                                  uint64_t seed,
                                  size_t workers,
                                  struct DfCorpus **out,
                                  struct DfTransformReport *report);

// Builds a training mix. `regime` is `zero`, `few` or `full`; `k` is read
// only for `few`. `variant` labels the document data (`Original` keeps the
// dialogue data alone).
//
// # Safety
// Pointers must be valid as documented; `out` must be writable.
enum DfStatus df_compose(const struct DfCorpus *newdocset,
                         const struct DfCorpus *dialset,
                         const char *regime,
                         size_t k,
                         uint64_t seed,
                         const char *variant,
                         struct DfCorpus **out);

// # Safety
// `corpus` must be a live handle; `out` must be writable.
enum DfStatus df_corpus_extractiveness(const struct DfCorpus *corpus,
                                       struct DfExtractivenessSummary *out);

// Transforms one document. The result is written to `*out` and must be
// released with `df_string_free`.
//
// # Safety
// String arguments must be NUL-terminated; `out` must be writable.
enum DfStatus df_transform_text(const char *id,
                                const char *text,
                                const char *summary,
                                enum DfLang lang,
                                const char *variant,
                                uint64_t seed,
                                char **out);

// # Safety
// String arguments must be NUL-terminated; `out` must be writable.
enum DfStatus df_rouge(const char *candidate, const char *reference, struct DfRouge *out);

// Extractive fragment density and coverage of `summary` against `source`.
//
// # Safety
// String arguments must be NUL-terminated; outputs must be writable.
enum DfStatus df_extractiveness(const char *summary,
                                const char *source,
                                double *out_density,
                                double *out_coverage);

// Distinct character n-grams shared by `a` and `b`.
//
// # Safety
// String arguments must be NUL-terminated; `out` must be writable.
enum DfStatus df_shared_ngram_count(const char *a, const char *b, size_t n, size_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIALFORGE_H */
