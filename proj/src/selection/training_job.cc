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

#include "selection/training_job.h"

#include <cmath>
#include <filesystem>
#include <set>

#include "common/error.h"
#include "common/hash.h"
#include "prompt/prompt_forge.h"

namespace radiogen::selection {

namespace {

const std::set<std::string>& ConfigKeys() {
  static const std::set<std::string> keys = {
      "quantization_bits", "lora_r",           "lora_alpha", "learning_rate",
      "batch_size",        "grad_accum_steps", "epochs",     "max_seq_len"};
  return keys;
}

const std::set<std::string>& SpecKeys() {
  static const std::set<std::string> keys = {
      "schema_version", "job_id",      "base_model_ref",     "config",
      "prompt_set_ref", "epochs_override", "output_adapter_ref", "stage",
      "template_id",    "resume_adapter_ref", "start_epoch",  "freeze_policy",
      kProvenanceKey};
  return keys;
}

bool IsPositiveInt(const Json& v) {
  return v.is_number_integer() && v.get<long long>() > 0;
}

void Require(bool ok, const std::string& what) {
  if (!ok) ThrowValidation("training job spec: " + what);
}

}  // namespace

void ValidateTrainingConfig(const TrainingConfig& c) {
  auto positive = [](const char* name, double v) {
    if (!(v > 0) || !std::isfinite(v)) {
      ThrowValidation(std::string("training config: ") + name + " must be positive");
    }
  };
  if (c.quantization_bits != 4 && c.quantization_bits != 8 &&
      c.quantization_bits != 16) {
    ThrowValidation("training config: quantization_bits must be 4, 8 or 16");
  }
  positive("lora_r", c.lora_r);
  positive("lora_alpha", c.lora_alpha);
  positive("learning_rate", c.learning_rate);
  positive("batch_size", c.batch_size);
  positive("grad_accum_steps", c.grad_accum_steps);
  positive("epochs", c.epochs);
  positive("max_seq_len", c.max_seq_len);
}

Json TrainingConfigToJson(const TrainingConfig& c) {
  Json j;
  j["quantization_bits"] = c.quantization_bits;
  j["lora_r"] = c.lora_r;
  j["lora_alpha"] = c.lora_alpha;
  j["learning_rate"] = c.learning_rate;
  j["batch_size"] = c.batch_size;
  j["grad_accum_steps"] = c.grad_accum_steps;
  j["epochs"] = c.epochs;
  j["max_seq_len"] = c.max_seq_len;
  return j;
}

TrainingConfig TrainingConfigFromJson(const Json& object) {
  if (!object.is_object()) ThrowValidation("training config must be an object");
  for (const auto& [key, value] : object.items()) {
    if (!ConfigKeys().contains(key)) {
      ThrowValidation("training config: unknown key '" + key + "'");
    }
  }
  TrainingConfig c;
  try {
    auto get_int = [&](const char* key, int& out) {
      if (!object.contains(key)) return;
      if (!object[key].is_number_integer()) {
        ThrowValidation(std::string("training config: ") + key + " must be an integer");
      }
      out = object[key].get<int>();
    };
    get_int("quantization_bits", c.quantization_bits);
    get_int("lora_r", c.lora_r);
    get_int("lora_alpha", c.lora_alpha);
    get_int("batch_size", c.batch_size);
    get_int("grad_accum_steps", c.grad_accum_steps);
    get_int("epochs", c.epochs);
    get_int("max_seq_len", c.max_seq_len);
    if (object.contains("learning_rate")) {
      c.learning_rate = object["learning_rate"].get<double>();
    }
  } catch (const Json::exception& e) {
    ThrowValidation(std::string("training config: ") + e.what());
  }
  ValidateTrainingConfig(c);
  return c;
}

std::string_view StageName(Stage stage) {
  return stage == Stage::kSmallEpoch ? "small_epoch" : "full";
}

std::optional<Stage> ParseStage(std::string_view name) {
  if (name == "small_epoch") return Stage::kSmallEpoch;
  if (name == "full") return Stage::kFull;
  return std::nullopt;
}

void ValidateJobSpecJson(const Json& j) {
  Require(j.is_object(), "must be an object");
  for (const auto& [key, value] : j.items()) {
    Require(SpecKeys().contains(key), "unknown key '" + key + "'");
  }
  for (const char* key : {"schema_version", "job_id", "base_model_ref", "config",
                          "prompt_set_ref", "output_adapter_ref", "stage"}) {
    Require(j.contains(key), std::string("missing '") + key + "'");
  }
  Require(j["schema_version"] == kJobSchemaVersion, "unsupported schema_version");
  for (const char* key : {"job_id", "base_model_ref", "prompt_set_ref",
                          "output_adapter_ref"}) {
    Require(j[key].is_string() && !j[key].get<std::string>().empty(),
            std::string(key) + " must be a non-empty string");
  }
  Require(j["stage"].is_string() && ParseStage(j["stage"].get<std::string>()),
          "stage must be 'small_epoch' or 'full'");

  const Json& c = j["config"];
  Require(c.is_object(), "config must be an object");
  for (const std::string& key : ConfigKeys()) {
    Require(c.contains(key), "config missing '" + key + "'");
    if (key == "learning_rate") {
      Require(c[key].is_number() && c[key].get<double>() > 0,
              "config.learning_rate must be a positive number");
    } else {
      Require(IsPositiveInt(c[key]), "config." + key + " must be a positive integer");
    }
  }
  for (const auto& [key, value] : c.items()) {
    Require(ConfigKeys().contains(key), "config has unknown key '" + key + "'");
  }
  const int bits = c["quantization_bits"].get<int>();
  Require(bits == 4 || bits == 8 || bits == 16, "config.quantization_bits must be 4, 8 or 16");

  if (j.contains("epochs_override") && !j["epochs_override"].is_null()) {
    Require(IsPositiveInt(j["epochs_override"]), "epochs_override must be a positive integer");
    Require(j["epochs_override"].get<int>() <= c["epochs"].get<int>(),
            "epochs_override exceeds config.epochs");
  }
  if (j.contains("template_id") && !j["template_id"].is_null()) {
    Require(j["template_id"].is_number_integer() && j["template_id"].get<int>() >= 1 &&
                j["template_id"].get<int>() <= prompt::kMaxTemplates,
            "template_id must be an integer in 1..5");
  }
  if (j.contains("resume_adapter_ref") && !j["resume_adapter_ref"].is_null()) {
    Require(j["resume_adapter_ref"].is_string() &&
                !j["resume_adapter_ref"].get<std::string>().empty(),
            "resume_adapter_ref must be a non-empty string");
  }
  if (j.contains("start_epoch")) {
    Require(j["start_epoch"].is_number_integer() && j["start_epoch"].get<int>() >= 0 &&
                j["start_epoch"].get<int>() <= c["epochs"].get<int>(),
            "start_epoch must be an integer in 0..config.epochs");
  }
  if (j.contains("freeze_policy") && !j["freeze_policy"].is_null()) {
    Require(j["freeze_policy"] == "embeddings_only" || j["freeze_policy"] == "lora",
            "freeze_policy must be 'embeddings_only' or 'lora'");
  }
}

Json JobSpecToJson(const TrainingJobSpec& s) {
  Json j;
  j["schema_version"] = s.schema_version;
  j["job_id"] = s.job_id;
  j["base_model_ref"] = s.base_model_ref;
  j["config"] = TrainingConfigToJson(s.config);
  j["prompt_set_ref"] = s.prompt_set_ref;
  j["epochs_override"] = s.epochs_override ? Json(*s.epochs_override) : Json(nullptr);
  j["output_adapter_ref"] = s.output_adapter_ref;
  j["stage"] = StageName(s.stage);
  j["template_id"] = s.template_id ? Json(*s.template_id) : Json(nullptr);
  j["resume_adapter_ref"] =
      s.resume_adapter_ref ? Json(*s.resume_adapter_ref) : Json(nullptr);
  j["start_epoch"] = s.start_epoch;
  j["freeze_policy"] = s.freeze_policy ? Json(*s.freeze_policy) : Json(nullptr);
  return j;
}

TrainingJobSpec JobSpecFromJson(const Json& j) {
  ValidateJobSpecJson(j);
  TrainingJobSpec s;
  s.schema_version = j["schema_version"].get<int>();
  s.job_id = j["job_id"].get<std::string>();
  s.base_model_ref = j["base_model_ref"].get<std::string>();
  s.config = TrainingConfigFromJson(j["config"]);
  s.prompt_set_ref = j["prompt_set_ref"].get<std::string>();
  if (j.contains("epochs_override") && !j["epochs_override"].is_null()) {
    s.epochs_override = j["epochs_override"].get<int>();
  }
  s.output_adapter_ref = j["output_adapter_ref"].get<std::string>();
  s.stage = *ParseStage(j["stage"].get<std::string>());
  if (j.contains("template_id") && !j["template_id"].is_null()) {
    s.template_id = j["template_id"].get<int>();
  }
  if (j.contains("resume_adapter_ref") && !j["resume_adapter_ref"].is_null()) {
    s.resume_adapter_ref = j["resume_adapter_ref"].get<std::string>();
  }
  if (j.contains("start_epoch")) s.start_epoch = j["start_epoch"].get<int>();
  if (j.contains("freeze_policy") && !j["freeze_policy"].is_null()) {
    s.freeze_policy = j["freeze_policy"].get<std::string>();
  }
  return s;
}

void ValidateJobSpec(const TrainingJobSpec& spec) {
  ValidateJobSpecJson(JobSpecToJson(spec));
}

TrainingJobSpec LoadJobSpec(const std::string& path) {
  return JobSpecFromJson(ParseJsonFile(path));
}

void WriteJobSpec(const std::string& path, const TrainingJobSpec& spec,
                  const Provenance* provenance) {
  const Json j = JobSpecToJson(spec);
  ValidateJobSpecJson(j);
  WriteFile(path, RenderJsonDocument(j, provenance));
}

std::string ComputeJobId(const TrainingJobSpec& spec) {
  TrainingJobSpec copy = spec;
  copy.job_id.clear();
  copy.output_adapter_ref.clear();
  return "job-" + Sha256Hex(JobSpecToJson(copy).dump()).substr(0, 16);
}

TrainingJobSpec BuildTrainingJob(const TrainingConfig& config,
                                 const std::string& prompt_set_ref, Stage stage,
                                 const JobOptions& options) {
  ValidateTrainingConfig(config);
  if (prompt_set_ref.empty()) ThrowValidation("training job: empty prompt set path");
  if (prompt::LoadPrompts(prompt_set_ref).empty()) {
    ThrowValidation("training job: prompt set '" + prompt_set_ref + "' is empty");
  }
  if (options.base_model_ref.empty()) ThrowValidation("training job: empty base_model_ref");
  TrainingJobSpec spec;
  spec.base_model_ref = options.base_model_ref;
  spec.config = config;
  spec.prompt_set_ref = prompt_set_ref;
  spec.stage = stage;
  spec.template_id = options.template_id;
  spec.freeze_policy = options.freeze_policy;
  if (stage == Stage::kSmallEpoch) {
    if (options.small_epoch < 1 || options.small_epoch > config.epochs) {
      ThrowValidation("training job: small epoch must be in 1..epochs");
    }
    spec.epochs_override = options.small_epoch;
  }
  spec.job_id = ComputeJobId(spec);
  spec.output_adapter_ref =
      (std::filesystem::path(options.output_dir) / spec.job_id).string();
  ValidateJobSpec(spec);
  return spec;
}

}  // namespace radiogen::selection
