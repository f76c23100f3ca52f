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

#ifndef RADIOGEN_SELECTION_TRAINING_JOB_H_
#define RADIOGEN_SELECTION_TRAINING_JOB_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "common/jsonl.h"

namespace radiogen::selection {

inline constexpr int kJobSchemaVersion = 1;
inline constexpr int kDefaultSmallEpoch = 1;

struct TrainingConfig {
  int quantization_bits = 4;
  int lora_r = 64;
  int lora_alpha = 16;
  double learning_rate = 1.41e-5;
  int batch_size = 64;
  int grad_accum_steps = 16;
  int epochs = 3;
  int max_seq_len = 512;

  friend bool operator==(const TrainingConfig&, const TrainingConfig&) = default;
};

void ValidateTrainingConfig(const TrainingConfig& config);
Json TrainingConfigToJson(const TrainingConfig& config);
// Missing keys keep their defaults; unknown keys are rejected.
TrainingConfig TrainingConfigFromJson(const Json& object);

enum class Stage { kSmallEpoch, kFull };
std::string_view StageName(Stage stage);  // small_epoch, full
std::optional<Stage> ParseStage(std::string_view name);

struct TrainingJobSpec {
  int schema_version = kJobSchemaVersion;
  std::string job_id;
  std::string base_model_ref;
  TrainingConfig config;
  std::string prompt_set_ref;
  std::optional<int> epochs_override;
  std::string output_adapter_ref;
  Stage stage = Stage::kSmallEpoch;
  std::optional<int> template_id;
  // Continuation: adapter produced by an earlier stage and the epoch to resume
  // from.
  std::optional<std::string> resume_adapter_ref;
  int start_epoch = 0;
  // "embeddings_only" or "lora"; absent lets the trainer decide.
  std::optional<std::string> freeze_policy;

  friend bool operator==(const TrainingJobSpec&, const TrainingJobSpec&) = default;
};

// Structural checks mirroring schemas/training_job.schema.json, on the JSON
// form. Throws Error(kValidation) naming the first violation.
void ValidateJobSpecJson(const Json& object);
void ValidateJobSpec(const TrainingJobSpec& spec);

Json JobSpecToJson(const TrainingJobSpec& spec);
TrainingJobSpec JobSpecFromJson(const Json& object);
TrainingJobSpec LoadJobSpec(const std::string& path);
// Validates, then writes pretty-printed JSON, optionally headed by a
// "_provenance" key (allowed by the schema and ignored on load).
void WriteJobSpec(const std::string& path, const TrainingJobSpec& spec,
                  const Provenance* provenance = nullptr);

// "job-" + first 16 hex digits of SHA-256 over the spec with job_id blanked.
std::string ComputeJobId(const TrainingJobSpec& spec);

struct JobOptions {
  std::string base_model_ref = "llama2-7b";
  std::string output_dir = "adapters";
  int small_epoch = kDefaultSmallEpoch;
  std::optional<int> template_id;
  std::optional<std::string> freeze_policy;
};

// The prompt set must be a readable prompts JSONL with at least one prompt.
// kSmallEpoch sets epochs_override = options.small_epoch.
TrainingJobSpec BuildTrainingJob(const TrainingConfig& config,
                                 const std::string& prompt_set_ref, Stage stage,
                                 const JobOptions& options);

}  // namespace radiogen::selection

#endif  // RADIOGEN_SELECTION_TRAINING_JOB_H_
