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

#include "radiogen/radiogen.h"

#include <cstring>
#include <istream>
#include <memory>
#include <ostream>
#include <streambuf>
#include <string>

#include "common/hash.h"
#include "corpus/corpus.h"
#include "expert/expert.h"
#include "inference/backends.h"
#include "kernels/kernels.h"
#include "pipeline/pipeline.h"
#include "pipeline/stages.h"
#include "rouge/rouge.h"
#include "selection/training_job.h"

struct rg_corpus {
  radiogen::corpus::Corpus corpus;
};

struct rg_segmenter {
  std::unique_ptr<radiogen::inference::Segmenter> impl;
};

struct rg_backend {
  std::unique_ptr<radiogen::inference::Backend> impl;
  radiogen::inference::GenerationConfig generation;
};

namespace {

using radiogen::Json;

thread_local std::string g_last_error;

rg_status StatusFor(radiogen::ErrorKind kind) {
  switch (kind) {
    case radiogen::ErrorKind::kValidation:
      return RG_ERR_VALIDATION;
    case radiogen::ErrorKind::kIo:
      return RG_ERR_IO;
    case radiogen::ErrorKind::kStage:
      return RG_ERR_STAGE;
    case radiogen::ErrorKind::kBackend:
      return RG_ERR_BACKEND;
  }
  return RG_ERR_INTERNAL;
}

template <typename F>
rg_status Guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return RG_OK;
  } catch (const radiogen::Error& e) {
    g_last_error = e.what();
    return StatusFor(e.kind());
  } catch (const Json::exception& e) {
    g_last_error = std::string("invalid JSON: ") + e.what();
    return RG_ERR_VALIDATION;
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return RG_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = std::string("internal error: ") + e.what();
    return RG_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "internal error: unknown exception";
    return RG_ERR_INTERNAL;
  }
}

void RequireArg(bool ok, const char* what) {
  if (!ok) radiogen::ThrowValidation(std::string("null or invalid argument: ") + what);
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

Json ParseOptions(const char* options_json) {
  RequireArg(options_json != nullptr, "options_json");
  Json options = Json::parse(options_json);
  if (!options.is_object()) radiogen::ThrowValidation("options must be a JSON object");
  return options;
}

void Emit(const Json& summary, char** out) {
  if (out != nullptr) *out = CopyString(summary.dump());
}

template <typename Stage>
rg_status RunStage(const char* options_json, char** summary_json, Stage stage) {
  return Guard([&] { Emit(stage(ParseOptions(options_json)), summary_json); });
}

class CallbackInBuf : public std::streambuf {
 public:
  CallbackInBuf(rg_read_fn read, void* context) : read_(read), context_(context) {}

 protected:
  int_type underflow() override {
    if (read_ == nullptr) return traits_type::eof();
    const std::size_t n = read_(context_, buffer_, sizeof(buffer_));
    if (n == 0) return traits_type::eof();
    setg(buffer_, buffer_, buffer_ + std::min(n, sizeof(buffer_)));
    return traits_type::to_int_type(buffer_[0]);
  }

 private:
  rg_read_fn read_;
  void* context_;
  char buffer_[4096];
};

class CallbackOutBuf : public std::streambuf {
 public:
  CallbackOutBuf(rg_write_fn write, void* context) : write_(write), context_(context) {}

 protected:
  std::streamsize xsputn(const char* s, std::streamsize n) override {
    if (write_ != nullptr && n > 0) write_(context_, s, static_cast<std::size_t>(n));
    return n;
  }
  int_type overflow(int_type ch) override {
    if (ch != traits_type::eof()) {
      const char c = traits_type::to_char_type(ch);
      if (write_ != nullptr) write_(context_, &c, 1);
    }
    return ch;
  }

 private:
  rg_write_fn write_;
  void* context_;
};

}  // namespace

extern "C" {

const char* rg_version(void) { return RADIOGEN_VERSION; }

const char* rg_last_error(void) { return g_last_error.c_str(); }

void rg_string_free(char* s) { std::free(s); }

rg_status rg_sha256_hex(const void* data, size_t len, char** out_hex) {
  return Guard([&] {
    RequireArg(out_hex != nullptr && (data != nullptr || len == 0), "data/out_hex");
    const std::string_view bytes(static_cast<const char*>(data), data ? len : 0);
    *out_hex = CopyString(radiogen::Sha256Hex(bytes));
  });
}

rg_status rg_stage_ingest(const char* o, char** s) {
  return RunStage(o, s, radiogen::pipeline::RunIngestStage);
}
rg_status rg_stage_clean(const char* o, char** s) {
  return RunStage(o, s, radiogen::pipeline::RunCleanStage);
}
rg_status rg_stage_split(const char* o, char** s) {
  return RunStage(o, s, radiogen::pipeline::RunSplitStage);
}
rg_status rg_stage_prompts(const char* o, char** s) {
  return RunStage(o, s, radiogen::pipeline::RunPromptsStage);
}
rg_status rg_stage_infer(const char* o, char** s) {
  return RunStage(o, s, radiogen::pipeline::RunInferStage);
}
rg_status rg_stage_score(const char* o, char** s) {
  return RunStage(o, s, radiogen::pipeline::RunScoreStage);
}
rg_status rg_stage_select(const char* o, char** s) {
  return RunStage(o, s, radiogen::pipeline::RunSelectStage);
}
rg_status rg_stage_expert_aggregate(const char* o, char** s) {
  return RunStage(o, s, radiogen::pipeline::RunExpertAggregateStage);
}
rg_status rg_stage_kernels_selftest(const char* o, char** s) {
  return RunStage(o, s, radiogen::pipeline::RunKernelsSelftest);
}
rg_status rg_stage_report(const char* o, char** s) {
  return RunStage(o, s, radiogen::pipeline::RunReportStage);
}

rg_status rg_stage_expert_score(const char* options_json, rg_read_fn read,
                                void* read_context, rg_write_fn write,
                                void* write_context, char** summary_json) {
  return Guard([&] {
    const Json options = ParseOptions(options_json);
    CallbackInBuf in_buf(read, read_context);
    CallbackOutBuf out_buf(write, write_context);
    std::istream in(&in_buf);
    std::ostream out(&out_buf);
    Emit(radiogen::pipeline::RunExpertScoreStage(options, in, out), summary_json);
  });
}

rg_status rg_run_pipeline(const char* options_json, rg_write_fn log, void* log_context,
                          char** summary_json) {
  return Guard([&] {
    const Json options = ParseOptions(options_json);
    if (!options.contains("config") || !options["config"].is_string()) {
      radiogen::ThrowValidation("missing required option 'config'");
    }
    radiogen::pipeline::PipelineConfig config =
        radiogen::pipeline::LoadPipelineConfig(options["config"].get<std::string>());
    if (options.contains("output_dir") && options["output_dir"].is_string()) {
      config.output_dir = options["output_dir"].get<std::string>();
    }
    if (options.contains("seed") && !options["seed"].is_null()) {
      if (!options["seed"].is_number_unsigned()) radiogen::ThrowValidation("seed must be unsigned");
      config.seed = options["seed"].get<std::uint64_t>();
    }
    if (options.contains("parallel") && !options["parallel"].is_null()) {
      config.parallel = options["parallel"].get<std::size_t>();
    }
    CallbackOutBuf log_buf(log, log_context);
    std::ostream log_stream(&log_buf);
    const radiogen::pipeline::Manifest manifest =
        radiogen::pipeline::RunPipeline(config, log != nullptr ? &log_stream : nullptr);
    Emit(radiogen::pipeline::ManifestToJson(manifest), summary_json);
  });
}

rg_status rg_corpus_load(const char* path, rg_corpus** out) {
  return Guard([&] {
    RequireArg(path != nullptr && out != nullptr, "path/out");
    auto handle = std::make_unique<rg_corpus>();
    handle->corpus = radiogen::corpus::LoadCorpus(path);
    *out = handle.release();
  });
}

rg_status rg_corpus_ingest(const char* path, const char* format, rg_corpus** out,
                           size_t* rejected) {
  return Guard([&] {
    RequireArg(path != nullptr && format != nullptr && out != nullptr, "path/format/out");
    const auto fmt = radiogen::corpus::ParseInputFormat(format);
    if (!fmt) radiogen::ThrowValidation(std::string("unknown format '") + format + "'");
    radiogen::corpus::IngestResult result = radiogen::corpus::Ingest(path, *fmt);
    if (rejected != nullptr) *rejected = result.rejects.size();
    auto handle = std::make_unique<rg_corpus>();
    handle->corpus = std::move(result.corpus);
    *out = handle.release();
  });
}

size_t rg_corpus_size(const rg_corpus* corpus) {
  return corpus == nullptr ? 0 : corpus->corpus.size();
}

rg_status rg_corpus_record_json(const rg_corpus* corpus, size_t index, char** out_json) {
  return Guard([&] {
    RequireArg(corpus != nullptr && out_json != nullptr, "corpus/out_json");
    if (index >= corpus->corpus.size()) radiogen::ThrowValidation("record index out of range");
    *out_json = CopyString(radiogen::corpus::ReportToJson(corpus->corpus.records[index]).dump());
  });
}

rg_status rg_corpus_stats_json(const rg_corpus* corpus, char** out_json) {
  return Guard([&] {
    RequireArg(corpus != nullptr && out_json != nullptr, "corpus/out_json");
    *out_json = CopyString(
        radiogen::corpus::StatsToJson(radiogen::corpus::ComputeStats(corpus->corpus)).dump());
  });
}

rg_status rg_corpus_write(const rg_corpus* corpus, const char* path) {
  return Guard([&] {
    RequireArg(corpus != nullptr && path != nullptr, "corpus/path");
    radiogen::Provenance prov;
    prov.config_hash = radiogen::Sha256Hex(corpus->corpus.provenance);
    prov.stage = "write";
    radiogen::corpus::WriteCorpus(path, corpus->corpus, prov);
  });
}

void rg_corpus_free(rg_corpus* corpus) { delete corpus; }

rg_status rg_segmenter_character(rg_segmenter** out) {
  return Guard([&] {
    RequireArg(out != nullptr, "out");
    auto handle = std::make_unique<rg_segmenter>();
    handle->impl = std::make_unique<radiogen::inference::CharacterSegmenter>();
    *out = handle.release();
  });
}

rg_status rg_segmenter_dictionary(const char* const* words, size_t count, rg_segmenter** out) {
  return Guard([&] {
    RequireArg(out != nullptr && (words != nullptr || count == 0), "words/out");
    std::vector<std::string> list;
    for (size_t i = 0; i < count; ++i) {
      RequireArg(words[i] != nullptr, "words[i]");
      list.emplace_back(words[i]);
    }
    auto handle = std::make_unique<rg_segmenter>();
    handle->impl = std::make_unique<radiogen::inference::DictionarySegmenter>(list);
    *out = handle.release();
  });
}

namespace {

const radiogen::inference::Segmenter& SegmenterOrDefault(const rg_segmenter* s) {
  static const radiogen::inference::CharacterSegmenter kDefault;
  return s == nullptr ? static_cast<const radiogen::inference::Segmenter&>(kDefault) : *s->impl;
}

}  // namespace

rg_status rg_segment(const rg_segmenter* segmenter, const char* text, char** tokens_json) {
  return Guard([&] {
    RequireArg(text != nullptr && tokens_json != nullptr, "text/tokens_json");
    Json tokens = SegmenterOrDefault(segmenter).Segment(text);
    *tokens_json = CopyString(tokens.dump());
  });
}

void rg_segmenter_free(rg_segmenter* segmenter) { delete segmenter; }

rg_status rg_rouge(const rg_segmenter* segmenter, const char* candidate,
                   const char* reference, rg_rouge_triple* out) {
  return Guard([&] {
    RequireArg(candidate != nullptr && reference != nullptr && out != nullptr,
               "candidate/reference/out");
    const auto& seg = SegmenterOrDefault(segmenter);
    const radiogen::rouge::RougeTriple t =
        radiogen::rouge::ScoreTriple(seg.Segment(candidate), seg.Segment(reference));
    auto copy = [](const radiogen::rouge::RougeScore& s) {
      return rg_rouge_score{s.recall, s.precision, s.f1};
    };
    out->r1 = copy(t.r1);
    out->r2 = copy(t.r2);
    out->rl = copy(t.rl);
  });
}

rg_status rg_backend_open(const char* config_path, const char* backend_id, rg_backend** out) {
  return Guard([&] {
    RequireArg(config_path != nullptr && backend_id != nullptr && out != nullptr,
               "config_path/backend_id/out");
    const radiogen::inference::InferenceConfig config =
        radiogen::inference::LoadInferenceConfig(config_path);
    auto handle = std::make_unique<rg_backend>();
    handle->impl = radiogen::inference::MakeBackend(
        radiogen::inference::FindBackend(config, backend_id));
    handle->generation = config.generation;
    *out = handle.release();
  });
}

rg_status rg_generate_checked(rg_backend* backend, const char* prompt_json,
                              char** outcome_json) {
  return Guard([&] {
    RequireArg(backend != nullptr && prompt_json != nullptr && outcome_json != nullptr,
               "backend/prompt_json/outcome_json");
    const radiogen::prompt::SynthesizedPrompt prompt =
        radiogen::prompt::PromptFromJson(Json::parse(prompt_json));
    const radiogen::inference::GenerationOutcome outcome =
        radiogen::inference::GenerateChecked(*backend->impl, prompt, backend->generation);
    *outcome_json = CopyString(radiogen::inference::OutcomeToJson(outcome).dump());
  });
}

void rg_backend_free(rg_backend* backend) { delete backend; }

rg_status rg_training_job_build(const char* config_json, const char* prompt_set_path,
                                const char* stage, char** spec_json) {
  return Guard([&] {
    RequireArg(prompt_set_path != nullptr && stage != nullptr && spec_json != nullptr,
               "prompt_set_path/stage/spec_json");
    radiogen::selection::TrainingConfig config;
    if (config_json != nullptr) {
      config = radiogen::selection::TrainingConfigFromJson(Json::parse(config_json));
    }
    const auto parsed = radiogen::selection::ParseStage(stage);
    if (!parsed) radiogen::ThrowValidation("stage must be 'small_epoch' or 'full'");
    const radiogen::selection::TrainingJobSpec spec = radiogen::selection::BuildTrainingJob(
        config, prompt_set_path, *parsed, radiogen::selection::JobOptions{});
    *spec_json = CopyString(radiogen::selection::JobSpecToJson(spec).dump());
  });
}

rg_status rg_quintile_of(int score, int* band) {
  return Guard([&] {
    RequireArg(band != nullptr, "band");
    *band = radiogen::expert::QuintileOf(score);
  });
}

rg_status rg_rms_norm(const double* x, size_t n, double eps, double* y) {
  return Guard([&] {
    RequireArg(x != nullptr && y != nullptr, "x/y");
    const radiogen::kernels::Vector out =
        radiogen::kernels::RmsNorm(std::span<const double>(x, n), eps);
    std::copy(out.begin(), out.end(), y);
  });
}

rg_status rg_rope(const double* x, size_t d, int64_t position, double base, double* y) {
  return Guard([&] {
    RequireArg(x != nullptr && y != nullptr, "x/y");
    const radiogen::kernels::Vector out =
        radiogen::kernels::Rope(std::span<const double>(x, d), position, base);
    std::copy(out.begin(), out.end(), y);
  });
}

}  // extern "C"
