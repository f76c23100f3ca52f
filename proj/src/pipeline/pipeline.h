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

#ifndef RADIOGEN_PIPELINE_PIPELINE_H_
#define RADIOGEN_PIPELINE_PIPELINE_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "common/jsonl.h"
#include "corpus/corpus.h"
#include "inference/generation.h"
#include "rouge/score_table.h"
#include "selection/training_job.h"

namespace radiogen::pipeline {

struct SheetInput {
  std::string path;
  corpus::InputFormat format = corpus::InputFormat::kJsonl;
};

// One declarative run. Relative paths are resolved against `base_dir` (the
// config file's directory) at load time.
struct PipelineConfig {
  std::vector<SheetInput> inputs;
  std::string templates;
  std::string lexicon;
  bool lexicon_regex = false;
  std::string backends;
  // Empty: every backend in the backends file.
  std::vector<std::string> backend_ids;
  int template_id = 1;
  std::uint64_t seed = 0;
  double split_ratio = 0.8;
  corpus::TitleOptions titles;
  // Overrides the backends file's generation block when present.
  std::optional<Json> generation;
  selection::TrainingConfig training;
  std::vector<rouge::Grouping> group_by = {rouge::Grouping::kInstitution,
                                           rouge::Grouping::kSystem};
  rouge::Averaging averaging = rouge::Averaging::kMacro;
  std::size_t parallel = 1;
  std::string backend_info;  // optional
  std::string output_dir = "out";
};

PipelineConfig PipelineConfigFromJson(const Json& document, const std::string& base_dir);
PipelineConfig LoadPipelineConfig(const std::string& path);

// Effective config; `output_dir` is left out so the hash names content, not
// location.
Json PipelineConfigToJson(const PipelineConfig& config);
std::string PipelineConfigHash(const PipelineConfig& config);

// Every referenced input must exist and the numeric fields must be in range.
// Throws Error(kValidation) before any stage runs.
void ValidatePipelineConfig(const PipelineConfig& config);

struct ManifestEntry {
  std::string stage;
  std::string path;  // relative to output_dir
  std::string sha256;
};

struct Manifest {
  std::string config_hash;
  std::uint64_t seed = 0;
  Json effective_config;
  std::vector<ManifestEntry> entries;
  std::string failed_stage;  // empty on success
  std::string error;
};

Json ManifestToJson(const Manifest& manifest);

// ingest -> clean -> split -> prompts -> infer -> score -> report, writing
// <output_dir>/manifest.json at the end (also after a failure, listing the
// stages that finished). A stage failure is rethrown as Error(kStage) naming
// the stage; configuration problems surface as Error(kValidation) first.
Manifest RunPipeline(const PipelineConfig& config, std::ostream* log);

}  // namespace radiogen::pipeline

#endif  // RADIOGEN_PIPELINE_PIPELINE_H_
