// Copyright 2026 The radiogen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RADIOGEN_RADIOGEN_H_
#define RADIOGEN_RADIOGEN_H_

#include <stddef.h>
#include <stdint.h>

#if defined(RADIOGEN_BUILDING_LIBRARY)
#define RG_API __attribute__((visibility("default")))
#else
#define RG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rg_status {
  RG_OK = 0,
  RG_ERR_VALIDATION = 1, /* bad argument, input or configuration */
  RG_ERR_IO = 2,         /* file could not be read or written */
  RG_ERR_STAGE = 3,      /* a processing stage could not complete */
  RG_ERR_BACKEND = 4,    /* generation backend or trainer unreachable */
  RG_ERR_INTERNAL = 5
} rg_status;

/* Library version, e.g. "0.1.0". Static storage. */
RG_API const char* rg_version(void);

/* Message for the last failing call on this thread; "" after success.
 * Valid until the next call on the same thread. */
RG_API const char* rg_last_error(void);

/* Releases any string returned through a char** out-parameter. */
RG_API void rg_string_free(char* s);

/* Lowercase hex SHA-256 of `len` bytes. */
RG_API rg_status rg_sha256_hex(const void* data, size_t len, char** out_hex);

/* ---- Stage entry points ------------------------------------------------
 * Each takes a JSON object of options (keys mirror the CLI flags) and returns
 * a JSON summary in *summary_json. */
RG_API rg_status rg_stage_ingest(const char* options_json, char** summary_json);
RG_API rg_status rg_stage_clean(const char* options_json, char** summary_json);
RG_API rg_status rg_stage_split(const char* options_json, char** summary_json);
RG_API rg_status rg_stage_prompts(const char* options_json, char** summary_json);
RG_API rg_status rg_stage_infer(const char* options_json, char** summary_json);
RG_API rg_status rg_stage_score(const char* options_json, char** summary_json);
RG_API rg_status rg_stage_select(const char* options_json, char** summary_json);
RG_API rg_status rg_stage_expert_aggregate(const char* options_json, char** summary_json);
RG_API rg_status rg_stage_kernels_selftest(const char* options_json, char** summary_json);
RG_API rg_status rg_stage_report(const char* options_json, char** summary_json);

/* Reads up to `capacity` bytes into `buffer`; returns the count, 0 at end of
 * input. */
typedef size_t (*rg_read_fn)(void* context, char* buffer, size_t capacity);
typedef void (*rg_write_fn)(void* context, const char* data, size_t length);

/* Interactive scoring session; prompts go to `write`, answers come from
 * `read`. With an "import" option no I/O callbacks are used (they may be
 * NULL). */
RG_API rg_status rg_stage_expert_score(const char* options_json, rg_read_fn read,
                                       void* read_context, rg_write_fn write,
                                       void* write_context, char** summary_json);

/* Full pipeline. options: {"config": path, "output_dir"?: path,
 * "seed"?: u64, "parallel"?: n}. Progress lines go to `log` when non-NULL.
 * The summary is the run manifest. */
RG_API rg_status rg_run_pipeline(const char* options_json, rg_write_fn log,
                                 void* log_context, char** summary_json);

/* ---- Corpus ------------------------------------------------------------- */
typedef struct rg_corpus rg_corpus;

/* Canonical JSONL written by the tool. */
RG_API rg_status rg_corpus_load(const char* path, rg_corpus** out);
/* Raw JSONL or CSV ("jsonl" / "csv"); rejected rows are counted. */
RG_API rg_status rg_corpus_ingest(const char* path, const char* format,
                                  rg_corpus** out, size_t* rejected);
RG_API size_t rg_corpus_size(const rg_corpus* corpus);
RG_API rg_status rg_corpus_record_json(const rg_corpus* corpus, size_t index,
                                       char** out_json);
RG_API rg_status rg_corpus_stats_json(const rg_corpus* corpus, char** out_json);
RG_API rg_status rg_corpus_write(const rg_corpus* corpus, const char* path);
RG_API void rg_corpus_free(rg_corpus* corpus);

/* ---- Segmentation and ROUGE --------------------------------------------- */
typedef struct rg_segmenter rg_segmenter;

RG_API rg_status rg_segmenter_character(rg_segmenter** out);
RG_API rg_status rg_segmenter_dictionary(const char* const* words, size_t count,
                                         rg_segmenter** out);
/* Tokens as a JSON array of strings. NULL segmenter = character level. */
RG_API rg_status rg_segment(const rg_segmenter* segmenter, const char* text,
                            char** tokens_json);
RG_API void rg_segmenter_free(rg_segmenter* segmenter);

typedef struct rg_rouge_score {
  double recall;
  double precision;
  double f1;
} rg_rouge_score;

typedef struct rg_rouge_triple {
  rg_rouge_score r1;
  rg_rouge_score r2;
  rg_rouge_score rl;
} rg_rouge_triple;

/* Segments both texts, then scores R-1, R-2 and R-L. */
RG_API rg_status rg_rouge(const rg_segmenter* segmenter, const char* candidate,
                          const char* reference, rg_rouge_triple* out);

/* ---- Guarded generation ------------------------------------------------- */
typedef struct rg_backend rg_backend;

/* Opens backend `backend_id` from a backends file. */
RG_API rg_status rg_backend_open(const char* config_path, const char* backend_id,
                                 rg_backend** out);
/* prompt_json: one prompt object as written by the prompts stage. Returns the
 * outcome object; generation failures are data, not errors. */
RG_API rg_status rg_generate_checked(rg_backend* backend, const char* prompt_json,
                                     char** outcome_json);
RG_API void rg_backend_free(rg_backend* backend);

/* ---- Training jobs ------------------------------------------------------ */
/* config_json may be NULL for the defaults. stage: "small_epoch" or "full".
 * Returns the validated job spec. */
RG_API rg_status rg_training_job_build(const char* config_json,
                                       const char* prompt_set_path,
                                       const char* stage, char** spec_json);

/* ---- Expert scores and kernels ------------------------------------------ */
RG_API rg_status rg_quintile_of(int score, int* band);

RG_API rg_status rg_rms_norm(const double* x, size_t n, double eps, double* y);
RG_API rg_status rg_rope(const double* x, size_t d, int64_t position, double base,
                         double* y);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* RADIOGEN_RADIOGEN_H_ */
