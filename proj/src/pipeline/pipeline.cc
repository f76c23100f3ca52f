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

#include "pipeline/pipeline.h"

#include <filesystem>
#include <ostream>
#include <set>

#include "common/hash.h"
#include "inference/backends.h"
#include "pipeline/stages.h"
#include "prompt/prompt_forge.h"

namespace radiogen::pipeline {

namespace {

namespace fs = std::filesystem;

const std::set<std::string>& ConfigKeys() {
  static const std::set<std::string> keys = {
      "inputs",      "templates",   "lexicon",          "lexicon_regex", "backends",
      "backend_ids", "template_id", "seed",             "split_ratio",   "title_threshold",
      "title_min_support", "generation", "training",    "group_by",      "averaging",
      "parallel",    "backend_info", "output_dir"};
  return keys;
}

}  // namespace

PipelineConfig PipelineConfigFromJson(const Json& doc, const std::string& base_dir) {
  if (!doc.is_object()) ThrowValidation("pipeline config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!ConfigKeys().contains(key) && key != kProvenanceKey) {
      ThrowValidation("pipeline config: unknown key '" + key + "'");
    }
  }
  auto path = [&](const std::string& p) { return inference::ResolvePath(base_dir, p); };
  PipelineConfig c;
  try {
    for (const Json& in : doc.at("inputs")) {
      SheetInput sheet;
      if (in.is_string()) {
        sheet.path = path(in.get<std::string>());
      } else {
        sheet.path = path(in.at("path").get<std::string>());
        const std::string fmt = in.value("format", std::string("jsonl"));
        const auto parsed = corpus::ParseInputFormat(fmt);
        if (!parsed) ThrowValidation("pipeline config: unknown input format '" + fmt + "'");
        sheet.format = *parsed;
      }
      if (fs::path(sheet.path).extension() == ".csv" && in.is_string()) {
        sheet.format = corpus::InputFormat::kCsv;
      }
      c.inputs.push_back(std::move(sheet));
    }
    c.templates = path(doc.at("templates").get<std::string>());
    c.lexicon = path(doc.at("lexicon").get<std::string>());
    c.lexicon_regex = doc.value("lexicon_regex", false);
    c.backends = path(doc.at("backends").get<std::string>());
    if (doc.contains("backend_ids")) {
      c.backend_ids = doc["backend_ids"].get<std::vector<std::string>>();
    }
    c.template_id = doc.value("template_id", 1);
    if (!doc.contains("seed") || !doc["seed"].is_number_unsigned()) {
      ThrowValidation("pipeline config: 'seed' must be an unsigned integer");
    }
    c.seed = doc["seed"].get<std::uint64_t>();
    c.split_ratio = doc.value("split_ratio", 0.8);
    c.titles.threshold = doc.value("title_threshold", 0.8);
    c.titles.min_support = doc.value("title_min_support", std::size_t{2});
    if (doc.contains("generation")) {
      inference::GenerationConfigFromJson(doc["generation"]);
      c.generation = doc["generation"];
    }
    if (doc.contains("training")) c.training = selection::TrainingConfigFromJson(doc["training"]);
    if (doc.contains("group_by")) {
      c.group_by.clear();
      for (const Json& g : doc["group_by"]) {
        const auto grouping = rouge::ParseGrouping(g.get<std::string>());
        if (!grouping) ThrowValidation("pipeline config: unknown grouping " + g.dump());
        c.group_by.push_back(*grouping);
      }
    }
    const std::string averaging = doc.value("averaging", std::string("macro"));
    if (averaging != "macro" && averaging != "micro") {
      ThrowValidation("pipeline config: averaging must be 'macro' or 'micro'");
    }
    c.averaging = averaging == "micro" ? rouge::Averaging::kMicro : rouge::Averaging::kMacro;
    c.parallel = doc.value("parallel", std::size_t{1});
    if (doc.contains("backend_info")) c.backend_info = path(doc["backend_info"].get<std::string>());
    c.output_dir = path(doc.value("output_dir", std::string("out")));
  } catch (const Json::exception& e) {
    ThrowValidation(std::string("pipeline config: ") + e.what());
  }
  return c;
}

PipelineConfig LoadPipelineConfig(const std::string& path) {
  return PipelineConfigFromJson(ParseJsonFile(path), inference::DirectoryOf(path));
}

Json PipelineConfigToJson(const PipelineConfig& c) {
  // Inputs are identified by content hash so the effective config does not
  // depend on where the files live.
  Json inputs = Json::array();
  for (const SheetInput& s : c.inputs) {
    inputs.push_back({{"name", fs::path(s.path).filename().string()},
                      {"format", s.format == corpus::InputFormat::kCsv ? "csv" : "jsonl"},
                      {"sha256", fs::is_regular_file(s.path) ? Sha256File(s.path) : ""}});
  }
  auto file_ref = [](const std::string& p) -> Json {
    if (p.empty()) return nullptr;
    return Json{{"name", fs::path(p).filename().string()},
                {"sha256", fs::is_regular_file(p) ? Sha256File(p) : ""}};
  };
  Json j;
  j["inputs"] = inputs;
  j["templates"] = file_ref(c.templates);
  j["lexicon"] = file_ref(c.lexicon);
  j["lexicon_regex"] = c.lexicon_regex;
  j["backends"] = file_ref(c.backends);
  j["backend_ids"] = c.backend_ids;
  j["template_id"] = c.template_id;
  j["seed"] = c.seed;
  j["split_ratio"] = c.split_ratio;
  j["title_threshold"] = c.titles.threshold;
  j["title_min_support"] = c.titles.min_support;
  j["generation"] = c.generation ? *c.generation : Json(nullptr);
  j["training"] = selection::TrainingConfigToJson(c.training);
  Json groups = Json::array();
  for (rouge::Grouping g : c.group_by) groups.push_back(rouge::GroupingName(g));
  j["group_by"] = groups;
  j["averaging"] = c.averaging == rouge::Averaging::kMicro ? "micro" : "macro";
  j["parallel"] = c.parallel;
  j["backend_info"] = file_ref(c.backend_info);
  return j;
}

std::string PipelineConfigHash(const PipelineConfig& config) {
  return Sha256Hex(PipelineConfigToJson(config).dump());
}

void ValidatePipelineConfig(const PipelineConfig& c) {
  if (c.inputs.empty()) ThrowValidation("pipeline config: no inputs");
  auto require = [](const std::string& p, const char* what) {
    if (p.empty() || !fs::is_regular_file(p)) {
      ThrowValidation(std::string("pipeline config: ") + what + " '" + p + "' does not exist");
    }
  };
  for (const SheetInput& s : c.inputs) require(s.path, "input");
  require(c.templates, "templates");
  require(c.lexicon, "lexicon");
  require(c.backends, "backends");
  if (!c.backend_info.empty()) require(c.backend_info, "backend_info");
  if (!(c.split_ratio > 0 && c.split_ratio < 1)) {
    ThrowValidation("pipeline config: split_ratio must be in (0, 1)");
  }
  if (!(c.titles.threshold > 0 && c.titles.threshold <= 1)) {
    ThrowValidation("pipeline config: title_threshold must be in (0, 1]");
  }
  if (c.parallel == 0) ThrowValidation("pipeline config: parallel must be >= 1");
  if (c.group_by.empty()) ThrowValidation("pipeline config: group_by is empty");
  selection::ValidateTrainingConfig(c.training);
  const auto templates = prompt::LoadTemplates(c.templates);
  prompt::FindTemplate(templates, c.template_id);
  const inference::InferenceConfig backends = inference::LoadInferenceConfig(c.backends);
  for (const std::string& id : c.backend_ids) inference::FindBackend(backends, id);
  if (backends.backends.empty()) ThrowValidation("pipeline config: backends file lists none");
}

Json ManifestToJson(const Manifest& m) {
  Json entries = Json::array();
  for (const ManifestEntry& e : m.entries) {
    entries.push_back({{"stage", e.stage}, {"path", e.path}, {"sha256", e.sha256}});
  }
  Json j;
  j["config_hash"] = m.config_hash;
  j["seed"] = m.seed;
  j["status"] = m.failed_stage.empty() ? "ok" : "failed";
  if (!m.failed_stage.empty()) {
    j["failed_stage"] = m.failed_stage;
    j["error"] = m.error;
  }
  j["effective_config"] = m.effective_config;
  j["outputs"] = entries;
  return j;
}

Manifest RunPipeline(const PipelineConfig& config, std::ostream* log) {
  ValidatePipelineConfig(config);
  Manifest manifest;
  manifest.effective_config = PipelineConfigToJson(config);
  manifest.config_hash = Sha256Hex(manifest.effective_config.dump());
  manifest.seed = config.seed;
  const fs::path out(config.output_dir);
  fs::create_directories(out);
  const Json prov{{"config_hash", manifest.config_hash}, {"seed", config.seed}};

  auto record = [&](const std::string& stage, const std::string& path) {
    manifest.entries.push_back(
        {stage, fs::relative(path, out).generic_string(), Sha256File(path)});
  };
  auto write_manifest = [&] {
    Provenance p{manifest.config_hash, config.seed, "run", "manifest"};
    WriteFile((out / "manifest.json").string(), RenderJsonDocument(ManifestToJson(manifest), &p));
  };
  std::string current;
  auto stage = [&](const std::string& name, Json options) {
    current = name;
    options[kProvenanceKey] = prov;
    if (log != nullptr) *log << "[" << name << "] running\n";
    return options;
  };

  try {
    // ingest
    std::vector<std::string> sheets;
    for (std::size_t i = 0; i < config.inputs.size(); ++i) {
      const SheetInput& in = config.inputs[i];
      const std::string path = (out / ("ingest." + std::to_string(i) + ".jsonl")).string();
      RunIngestStage(stage("ingest", {{"in", in.path},
                                      {"format", in.format == corpus::InputFormat::kCsv ? "csv" : "jsonl"},
                                      {"out", path},
                                      {"label", "sheet-" + std::to_string(i)}}));
      record("ingest", path);
      record("ingest", corpus::RejectsPathFor(path));
      sheets.push_back(path);
    }

    const std::string cleaned = (out / "clean.jsonl").string();
    RunCleanStage(stage("clean", {{"in", sheets},
                                  {"lexicon", config.lexicon},
                                  {"regex", config.lexicon_regex},
                                  {"title_threshold", config.titles.threshold},
                                  {"title_min_support", config.titles.min_support},
                                  {"out", cleaned}}));
    record("clean", cleaned);
    record("clean", corpus::RejectsPathFor(cleaned));

    const fs::path split_dir = out / "split";
    RunSplitStage(stage("split", {{"in", cleaned},
                                  {"ratio", config.split_ratio},
                                  {"seed", config.seed},
                                  {"out_dir", split_dir.string()}}));
    for (const char* name : {"train.jsonl", "eval.jsonl", "external.jsonl", "test.jsonl",
                             "stats.json", "stats.md"}) {
      record("split", (split_dir / name).string());
    }

    const std::string test_prompts = (out / "prompts.test.jsonl").string();
    RunPromptsStage(stage("prompts", {{"templates", config.templates},
                                      {"corpus", (split_dir / "test.jsonl").string()},
                                      {"with_labels", true},
                                      {"template_ids", {config.template_id}},
                                      {"out", test_prompts}}));
    record("prompts", test_prompts);
    const std::string train_prompts = (out / "prompts.train.jsonl").string();
    RunPromptsStage(stage("prompts", {{"templates", config.templates},
                                      {"corpus", (split_dir / "train.jsonl").string()},
                                      {"with_labels", true},
                                      {"template_ids", {config.template_id}},
                                      {"out", train_prompts}}));
    record("prompts", train_prompts);
    selection::JobOptions job_options;
    job_options.template_id = config.template_id;
    job_options.output_dir = "adapters";
    const selection::TrainingJobSpec job = selection::BuildTrainingJob(
        config.training, train_prompts, selection::Stage::kFull, job_options);
    const std::string job_path = (out / "training_job.json").string();
    Provenance job_prov{manifest.config_hash, config.seed, "prompts", "training-job"};
    // The spec names the prompt set relative to the output directory.
    selection::TrainingJobSpec portable = job;
    portable.prompt_set_ref = fs::path(train_prompts).filename().string();
    portable.job_id = selection::ComputeJobId(portable);
    portable.output_adapter_ref = "adapters/" + portable.job_id;
    selection::WriteJobSpec(job_path, portable, &job_prov);
    record("prompts", job_path);

    std::vector<std::string> backend_ids = config.backend_ids;
    if (backend_ids.empty()) {
      for (const auto& b : inference::LoadInferenceConfig(config.backends).backends) {
        backend_ids.push_back(b.backend_id);
      }
    }
    std::vector<std::string> outcome_files;
    for (const std::string& id : backend_ids) {
      const std::string path = (out / ("outcomes." + id + ".jsonl")).string();
      Json options = {{"config", config.backends}, {"backend", id},
                      {"prompts", test_prompts},   {"parallel", config.parallel},
                      {"out", path}};
      if (config.generation) options["generation"] = *config.generation;
      RunInferStage(stage("infer", options));
      record("infer", path);
      outcome_files.push_back(path);
    }

    Json groups = Json::array();
    for (rouge::Grouping g : config.group_by) groups.push_back(rouge::GroupingName(g));
    const std::string table = (out / "scores.json").string();
    const std::string table_csv = (out / "scores.csv").string();
    const std::string records = (out / "scores.records.jsonl").string();
    RunScoreStage(stage("score", {{"outcomes", outcome_files},
                                  {"refs", (split_dir / "test.jsonl").string()},
                                  {"group_by", groups},
                                  {"averaging", config.averaging == rouge::Averaging::kMicro
                                                    ? "micro" : "macro"},
                                  {"out", table},
                                  {"csv", table_csv},
                                  {"records_out", records}}));
    record("score", table);
    record("score", table_csv);
    record("score", records);

    const rouge::ScoreTable loaded = rouge::LoadScoreTable(table);
    std::set<std::string> scopes;
    for (const rouge::TableRow& r : loaded.rows) scopes.insert(r.scope);
    auto has_prefix = [&](const std::string& prefix, bool with_slash) {
      for (const std::string& s : scopes) {
        if (s.rfind(prefix, 0) == 0 && (s.find('/') != std::string::npos) == with_slash) return true;
      }
      return false;
    };
    std::vector<std::string> layouts;
    if (has_prefix("institution-", false)) layouts.push_back("cross_institution");
    bool any_system = false;
    for (corpus::BodySystem s : corpus::kAllSystems) {
      any_system |= scopes.contains(std::string(corpus::SystemName(s)));
    }
    if (any_system) layouts.push_back("per_system");
    if (has_prefix("institution-", true)) layouts.push_back("mixed");
    for (const std::string& layout : layouts) {
      for (const char* format : {"markdown", "csv"}) {
        const std::string ext = std::string(format) == "csv" ? ".csv" : ".md";
        const std::string path = (out / ("report." + layout + ext)).string();
        RunReportStage(stage("report", {{"kind", "table"}, {"table", table},
                                        {"layout", layout}, {"format", format},
                                        {"out", path}, {"backend_order", backend_ids}}));
        record("report", path);
      }
    }
    const std::string utility = (out / "report.utility.md").string();
    Json utility_options = {{"kind", "utility"}, {"outcomes", outcome_files},
                            {"format", "markdown"}, {"out", utility}};
    if (!config.backend_info.empty()) utility_options["info"] = config.backend_info;
    RunReportStage(stage("report", utility_options));
    record("report", utility);
  } catch (const Error& e) {
    manifest.failed_stage = current;
    manifest.error = e.what();
    write_manifest();
    throw Error(ErrorKind::kStage, "stage '" + current + "' failed: " + e.what());
  } catch (const std::exception& e) {
    manifest.failed_stage = current;
    manifest.error = e.what();
    write_manifest();
    throw Error(ErrorKind::kStage, "stage '" + current + "' failed: " + e.what());
  }
  write_manifest();
  if (log != nullptr) *log << "[run] " << manifest.entries.size() << " outputs hashed\n";
  return manifest;
}

}  // namespace radiogen::pipeline
