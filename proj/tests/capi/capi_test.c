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

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "radiogen/radiogen.h"

static int failures = 0;

#define CHECK(cond)                                              \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "%s:%d: check failed: %s (last error: %s)\n", \
              __FILE__, __LINE__, #cond, rg_last_error());       \
      ++failures;                                                \
    }                                                            \
  } while (0)

static void TestHashAndVersion(void) {
  char* hex = NULL;
  CHECK(rg_sha256_hex("abc", 3, &hex) == RG_OK);
  CHECK(hex && strcmp(hex, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad") == 0);
  rg_string_free(hex);
  CHECK(strlen(rg_version()) > 0);
}

static void TestRouge(void) {
  rg_rouge_triple t;
  CHECK(rg_rouge(NULL, "右肺结节", "右肺小结节", &t) == RG_OK);
  CHECK(fabs(t.r1.recall - 0.8) < 1e-12);
  CHECK(fabs(t.r1.precision - 1.0) < 1e-12);
  CHECK(fabs(t.r2.recall - 0.5) < 1e-12);
  CHECK(fabs(t.rl.f1 - 2.0 * 0.8 / 1.8) < 1e-12);

  const char* words[] = {"右肺", "结节"};
  rg_segmenter* seg = NULL;
  CHECK(rg_segmenter_dictionary(words, 2, &seg) == RG_OK);
  char* tokens = NULL;
  CHECK(rg_segment(seg, "右肺结节", &tokens) == RG_OK);
  CHECK(tokens && strcmp(tokens, "[\"右肺\",\"结节\"]") == 0);
  rg_string_free(tokens);
  rg_segmenter_free(seg);
  CHECK(rg_rouge(NULL, NULL, "x", &t) == RG_ERR_VALIDATION);
}

static void TestCorpus(void) {
  rg_corpus* corpus = NULL;
  size_t rejected = 99;
  CHECK(rg_corpus_ingest(RADIOGEN_FIXTURE_DIR "/sheets/sheet1.jsonl", "jsonl", &corpus,
                         &rejected) == RG_OK);
  CHECK(rejected == 0);
  CHECK(rg_corpus_size(corpus) == 18);
  char* record = NULL;
  CHECK(rg_corpus_record_json(corpus, 0, &record) == RG_OK);
  CHECK(record && strstr(record, "\"record_id\"") != NULL);
  rg_string_free(record);
  CHECK(rg_corpus_record_json(corpus, 1000, &record) == RG_ERR_VALIDATION);
  char* stats = NULL;
  CHECK(rg_corpus_stats_json(corpus, &stats) == RG_OK);
  rg_string_free(stats);
  rg_corpus_free(corpus);

  corpus = NULL;
  CHECK(rg_corpus_load("/nonexistent/radiogen.jsonl", &corpus) == RG_ERR_IO);
  CHECK(corpus == NULL);
  CHECK(strlen(rg_last_error()) > 0);
}

static void TestBackend(void) {
  rg_backend* backend = NULL;
  CHECK(rg_backend_open(RADIOGEN_FIXTURE_DIR "/backends.json", "llama2-7b-ft", &backend) == RG_OK);
  char* outcome = NULL;
  CHECK(rg_generate_checked(backend,
                            "{\"template_id\":1,\"record_id\":\"q\",\"prompt\":\"F: 肝囊肿\","
                            "\"input\":\"肝囊肿\"}",
                            &outcome) == RG_OK);
  CHECK(outcome && strstr(outcome, "肝囊肿") != NULL);
  rg_string_free(outcome);
  CHECK(rg_generate_checked(backend, "{not json", &outcome) == RG_ERR_VALIDATION);
  rg_backend_free(backend);
  CHECK(rg_backend_open(RADIOGEN_FIXTURE_DIR "/backends.json", "absent", &backend) ==
        RG_ERR_VALIDATION);
}

static void TestKernelsAndBands(void) {
  int band = 0;
  CHECK(rg_quintile_of(80, &band) == RG_OK && band == 5);
  CHECK(rg_quintile_of(101, &band) == RG_ERR_VALIDATION);
  const double x[2] = {3.0, 4.0};
  double y[2];
  CHECK(rg_rms_norm(x, 2, 1e-12, y) == RG_OK);
  CHECK(fabs(y[1] - 4.0 / sqrt(12.5)) < 1e-12);
  const double v[2] = {1.0, 0.0};
  CHECK(rg_rope(v, 2, 2, 10000.0, y) == RG_OK);
  CHECK(fabs(y[0] - cos(2.0)) < 1e-12 && fabs(y[1] - sin(2.0)) < 1e-12);
  CHECK(rg_rope(v, 1, 2, 10000.0, y) == RG_ERR_VALIDATION);
}

static void TestStages(void) {
  char* summary = NULL;
  CHECK(rg_stage_kernels_selftest("{\"seed\":3,\"cases\":20}", &summary) == RG_OK);
  CHECK(summary && strstr(summary, "\"passed\":true") != NULL);
  rg_string_free(summary);
  CHECK(rg_stage_clean("{\"in\":[\"/nonexistent.jsonl\"],\"lexicon\":\"/nonexistent.txt\","
                       "\"out\":\"/tmp/x.jsonl\"}",
                       &summary) != RG_OK);
  CHECK(rg_stage_split("not json", &summary) == RG_ERR_VALIDATION);
}

int main(void) {
  TestHashAndVersion();
  TestRouge();
  TestCorpus();
  TestBackend();
  TestKernelsAndBands();
  TestStages();
  if (failures == 0) printf("capi: all checks passed\n");
  return failures == 0 ? 0 : 1;
}
