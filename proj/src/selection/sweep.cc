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

#include "selection/sweep.h"

#include <algorithm>
#include <filesystem>

#include "rouge/score_table.h"

namespace radiogen::selection {

std::string_view SelectionKeyName(SelectionKey key) {
  switch (key) {
    case SelectionKey::kMeanRlF1:
      return "mean_rl_f1";
    case SelectionKey::kMeanR1F1:
      return "mean_r1_f1";
    case SelectionKey::kMeanOfThree:
      return "mean_of_three";
  }
  return "?";
}

std::optional<SelectionKey> ParseSelectionKey(std::string_view name) {
  if (name == "mean_rl_f1") return SelectionKey::kMeanRlF1;
  if (name == "mean_r1_f1") return SelectionKey::kMeanR1F1;
  if (name == "mean_of_three") return SelectionKey::kMeanOfThree;
  return std::nullopt;
}

double KeyValue(const MeanF1& s, SelectionKey key) {
  switch (key) {
    case SelectionKey::kMeanRlF1:
      return s.rl;
    case SelectionKey::kMeanR1F1:
      return s.r1;
    case SelectionKey::kMeanOfThree:
      return (s.r1 + s.r2 + s.rl) / 3.0;
  }
  return 0.0;
}

PromptSelectionResult FindBestPrompt(const std::map<int, MeanF1>& scores,
                                     SelectionKey key) {
  if (scores.empty()) ThrowValidation("prompt selection needs at least one scored template");
  PromptSelectionResult result;
  result.key = key;
  result.per_template_scores = scores;
  // std::map iterates ids ascending, so strict > keeps the lowest id on ties.
  std::optional<int> best;
  for (const auto& [id, s] : scores) {
    if (!best || KeyValue(s, key) > KeyValue(scores.at(*best), key)) best = id;
  }
  result.best_index = *best;
  for (const auto& [id, s] : scores) {
    if (id == *best) continue;
    if (!result.runner_up ||
        KeyValue(s, key) > KeyValue(scores.at(*result.runner_up), key)) {
      result.runner_up = id;
    }
  }
  if (result.runner_up) {
    result.margin = KeyValue(scores.at(*best), key) -
                    KeyValue(scores.at(*result.runner_up), key);
  }
  return result;
}

namespace {

Json MeanToJson(const MeanF1& m) {
  return Json{{"r1_f1", m.r1}, {"r2_f1", m.r2}, {"rl_f1", m.rl}};
}

MeanF1 MeanFromJson(const Json& j) {
  return {j.at("r1_f1").get<double>(), j.at("r2_f1").get<double>(),
          j.at("rl_f1").get<double>()};
}

}  // namespace

Json SelectionToJson(const PromptSelectionResult& r) {
  Json j;
  j["best_index"] = r.best_index;
  j["key"] = SelectionKeyName(r.key);
  Json per = Json::object();
  for (const auto& [id, s] : r.per_template_scores) per[std::to_string(id)] = MeanToJson(s);
  j["per_template_scores"] = per;
  j["runner_up"] = r.runner_up ? Json(*r.runner_up) : Json(nullptr);
  j["margin"] = r.margin ? Json(*r.margin) : Json(nullptr);
  return j;
}

PromptSelectionResult SelectionFromJson(const Json& j) {
  PromptSelectionResult r;
  try {
    r.best_index = j.at("best_index").get<int>();
    const auto key = ParseSelectionKey(j.at("key").get<std::string>());
    if (!key) ThrowValidation("selection result: unknown key");
    r.key = *key;
    for (const auto& [id, s] : j.at("per_template_scores").items()) {
      r.per_template_scores[std::stoi(id)] = MeanFromJson(s);
    }
    if (j.contains("runner_up") && !j["runner_up"].is_null()) {
      r.runner_up = j["runner_up"].get<int>();
    }
    if (j.contains("margin") && !j["margin"].is_null()) r.margin = j["margin"].get<double>();
  } catch (const Json::exception& e) {
    ThrowValidation(std::string("malformed selection result: ") + e.what());
  }
  if (!r.per_template_scores.contains(r.best_index)) {
    ThrowValidation("selection result: best_index has no score");
  }
  return r;
}

std::map<int, MeanF1> SweepResult::scores() const {
  std::map<int, MeanF1> out;
  for (const auto& [id, run] : runs) out[id] = run.scores;
  return out;
}

SweepResult SmallEpochSweep(const std::vector<prompt::PromptTemplate>& templates,
                            Trainer& trainer, const corpus::Corpus& train,
                            const corpus::Corpus& eval, const SweepOptions& options) {
  if (templates.empty()) ThrowValidation("sweep needs at least one template");
  if (eval.empty()) ThrowValidation("sweep needs a non-empty evaluation corpus");
  std::filesystem::create_directories(options.work_dir);
  const std::filesystem::path dir(options.work_dir);

  SweepResult result;
  for (const prompt::PromptTemplate& t : templates) {
    const std::string tag = "template-" + std::to_string(t.template_id);
    const prompt::PromptBatch train_batch = prompt::SynthesizeBatch(t, train, true);
    std::vector<Json> rows;
    for (const prompt::SynthesizedPrompt& p : train_batch.prompts) {
      rows.push_back(prompt::PromptToJson(p));
    }
    const std::string prompt_path = (dir / ("train_prompts." + tag + ".jsonl")).string();
    Provenance prov = options.provenance;
    prov.stage = "select";
    prov.label = tag;
    WriteJsonl(prompt_path, rows, &prov);

    JobOptions job_options = options.job;
    job_options.template_id = t.template_id;
    TemplateRun run;
    run.job = BuildTrainingJob(options.config, prompt_path, Stage::kSmallEpoch, job_options);
    const std::string spec_path = (dir / ("job." + tag + ".json")).string();
    WriteJobSpec(spec_path, run.job, &prov);

    TrainedModel model;
    try {
      model = trainer.Submit(run.job, spec_path);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kBackend) throw;
      result.excluded[t.template_id] = e.what();
      result.warnings.push_back("template " + std::to_string(t.template_id) +
                                " excluded: " + e.what());
      continue;
    }
    run.adapter_ref = model.adapter_ref;
    run.backend_id = model.backend.backend_id;

    const prompt::PromptBatch eval_batch = prompt::SynthesizeBatch(t, eval, true);
    std::unique_ptr<inference::Backend> backend = inference::MakeBackend(model.backend);
    const std::vector<inference::GenerationOutcome> outcomes = inference::RunInference(
        *backend, eval_batch.prompts, options.generation, options.parallel);
    const std::vector<rouge::RecordScore> scores = rouge::ScorePairs(outcomes, eval);
    for (const rouge::RecordScore& s : scores) {
      run.scores.r1 += s.triple.r1.f1;
      run.scores.r2 += s.triple.r2.f1;
      run.scores.rl += s.triple.rl.f1;
      if (s.failure) ++run.failed_generations;
    }
    run.n = scores.size();
    if (run.n > 0) {
      const double n = static_cast<double>(run.n);
      run.scores.r1 /= n;
      run.scores.r2 /= n;
      run.scores.rl /= n;
    }
    result.runs.emplace(t.template_id, std::move(run));
  }
  if (result.runs.empty()) {
    ThrowStage("every small-epoch job failed; no prompt can be selected");
  }
  return result;
}

ContinuationPlan FullTrainingPlan(const PromptSelectionResult& result,
                                  const TrainingJobSpec& small_job,
                                  const std::string& adapter_ref,
                                  const TrainingConfig& config) {
  ValidateTrainingConfig(config);
  if (adapter_ref.empty()) {
    ThrowValidation("full training plan: small-epoch stage produced no adapter ref");
  }
  if (small_job.template_id && *small_job.template_id != result.best_index) {
    ThrowValidation("full training plan: small-epoch job belongs to template " +
                    std::to_string(*small_job.template_id) + ", winner is " +
                    std::to_string(result.best_index));
  }
  ContinuationPlan plan;
  TrainingJobSpec& spec = plan.job;
  spec.base_model_ref = small_job.base_model_ref;
  spec.config = config;
  spec.prompt_set_ref = small_job.prompt_set_ref;
  spec.stage = Stage::kFull;
  spec.template_id = result.best_index;
  spec.resume_adapter_ref = adapter_ref;
  spec.freeze_policy = small_job.freeze_policy;
  const int done = small_job.epochs_override.value_or(small_job.config.epochs);
  spec.start_epoch = std::min(done, config.epochs);
  if (spec.start_epoch >= config.epochs) {
    plan.empty = true;
    plan.warnings.push_back("small-epoch stage already ran all " +
                            std::to_string(config.epochs) +
                            " epochs; continuation is empty");
  }
  spec.job_id = ComputeJobId(spec);
  const std::filesystem::path adapter_dir =
      std::filesystem::path(small_job.output_adapter_ref).parent_path();
  spec.output_adapter_ref = (adapter_dir / spec.job_id).string();
  ValidateJobSpec(spec);
  return plan;
}

Json SweepToJson(const SweepResult& sweep) {
  Json runs = Json::array();
  for (const auto& [id, run] : sweep.runs) {
    runs.push_back({{"template_id", id},
                    {"job_id", run.job.job_id},
                    {"adapter_ref", run.adapter_ref},
                    {"backend_id", run.backend_id},
                    {"n", run.n},
                    {"failed_generations", run.failed_generations},
                    {"scores", MeanToJson(run.scores)}});
  }
  Json excluded = Json::object();
  for (const auto& [id, reason] : sweep.excluded) excluded[std::to_string(id)] = reason;
  return Json{{"runs", runs}, {"excluded", excluded}, {"warnings", sweep.warnings}};
}

}  // namespace radiogen::selection
