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

#ifndef RADIOGEN_SELECTION_SWEEP_H_
#define RADIOGEN_SELECTION_SWEEP_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corpus/report.h"
#include "inference/generation.h"
#include "prompt/prompt_forge.h"
#include "selection/trainer.h"
#include "selection/training_job.h"

namespace radiogen::selection {

// Mean per-record F1 for each ROUGE variant.
struct MeanF1 {
  double r1 = 0.0;
  double r2 = 0.0;
  double rl = 0.0;
  friend bool operator==(const MeanF1&, const MeanF1&) = default;
};

enum class SelectionKey { kMeanRlF1, kMeanR1F1, kMeanOfThree };
std::string_view SelectionKeyName(SelectionKey key);
std::optional<SelectionKey> ParseSelectionKey(std::string_view name);
double KeyValue(const MeanF1& scores, SelectionKey key);

struct PromptSelectionResult {
  int best_index = 0;
  SelectionKey key = SelectionKey::kMeanRlF1;
  std::map<int, MeanF1> per_template_scores;
  std::optional<int> runner_up;
  // Best minus runner-up under `key`; absent with a single template.
  std::optional<double> margin;
};

// Argmax under `key`, ties to the lowest template id. Throws
// Error(kValidation) on an empty map.
PromptSelectionResult FindBestPrompt(const std::map<int, MeanF1>& scores,
                                     SelectionKey key = SelectionKey::kMeanRlF1);

Json SelectionToJson(const PromptSelectionResult& result);
PromptSelectionResult SelectionFromJson(const Json& object);

struct SweepOptions {
  TrainingConfig config;
  JobOptions job;
  // Prompt sets and job specs are written here.
  std::string work_dir = ".";
  inference::GenerationConfig generation;
  std::size_t parallel = 1;
  // Stamped on every file the sweep writes; stage and label are filled in.
  Provenance provenance;
};

struct TemplateRun {
  TrainingJobSpec job;
  std::string adapter_ref;
  std::string backend_id;
  MeanF1 scores;
  std::size_t n = 0;
  std::size_t failed_generations = 0;
};

struct SweepResult {
  std::map<int, TemplateRun> runs;
  // Template id -> reason its job failed.
  std::map<int, std::string> excluded;
  std::vector<std::string> warnings;

  std::map<int, MeanF1> scores() const;
};

// Per template: render the training prompt set, submit a small-epoch job,
// run guarded generation over the eval records through the returned backend
// and score against their impressions. A failed job excludes its template
// with a warning; Error(kStage) when every job fails.
SweepResult SmallEpochSweep(const std::vector<prompt::PromptTemplate>& templates,
                            Trainer& trainer, const corpus::Corpus& train,
                            const corpus::Corpus& eval, const SweepOptions& options);

struct ContinuationPlan {
  TrainingJobSpec job;
  // True when the small-epoch stage already covered every epoch.
  bool empty = false;
  std::vector<std::string> warnings;
};

// Full-stage job for the winning template resuming from its small-epoch
// adapter at epoch `small_job.epochs_override`. Throws Error(kValidation)
// when the small-epoch job has no adapter ref.
ContinuationPlan FullTrainingPlan(const PromptSelectionResult& result,
                                  const TrainingJobSpec& small_job,
                                  const std::string& adapter_ref,
                                  const TrainingConfig& config);

Json SweepToJson(const SweepResult& sweep);

}  // namespace radiogen::selection

#endif  // RADIOGEN_SELECTION_SWEEP_H_
