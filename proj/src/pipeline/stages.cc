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

#include "pipeline/stages.h"

#include <cmath>
#include <filesystem>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <type_traits>

#include "common/hash.h"
#include "common/text.h"
#include "corpus/corpus.h"
#include "expert/expert.h"
#include "inference/backends.h"
#include "kernels/kernels.h"
#include "pipeline/report_tables.h"
#include "pipeline/utility.h"
#include "prompt/prompt_forge.h"
#include "rouge/score_table.h"
#include "selection/sweep.h"

namespace radiogen::pipeline {

namespace {

namespace fs = std::filesystem;

std::string RequireString(const Json& options, const char* key) {
  if (!options.contains(key) || !options[key].is_string() ||
      options[key].get<std::string>().empty()) {
    ThrowValidation(std::string("missing required option '") + key + "'");
  }
  return options[key].get<std::string>();
}

std::string OptString(const Json& options, const char* key, std::string fallback = "") {
  if (!options.contains(key) || options[key].is_null()) return fallback;
  if (!options[key].is_string()) ThrowValidation(std::string("option '") + key + "' must be a string");
  return options[key].get<std::string>();
}

template <typename T>
T OptNumber(const Json& options, const char* key, T fallback) {
  if (!options.contains(key) || options[key].is_null()) return fallback;
  if (!options[key].is_number()) ThrowValidation(std::string("option '") + key + "' must be a number");
  if constexpr (std::is_integral_v<T>) {
    if (!options[key].is_number_integer()) {
      ThrowValidation(std::string("option '") + key + "' must be an integer");
    }
    if constexpr (std::is_unsigned_v<T>) {
      if (options[key].is_number_integer() && !options[key].is_number_unsigned()) {
        ThrowValidation(std::string("option '") + key + "' must not be negative");
      }
    }
  }
  return options[key].get<T>();
}

bool OptBool(const Json& options, const char* key, bool fallback) {
  if (!options.contains(key) || options[key].is_null()) return fallback;
  if (!options[key].is_boolean()) ThrowValidation(std::string("option '") + key + "' must be a boolean");
  return options[key].get<bool>();
}

std::vector<std::string> PathList(const Json& options, const char* key) {
  if (!options.contains(key)) ThrowValidation(std::string("missing required option '") + key + "'");
  std::vector<std::string> out;
  const Json& v = options[key];
  if (v.is_string()) {
    out.push_back(v.get<std::string>());
  } else if (v.is_array()) {
    for (const Json& e : v) {
      if (!e.is_string()) ThrowValidation(std::string("option '") + key + "' must list paths");
      out.push_back(e.get<std::string>());
    }
  }
  if (out.empty()) ThrowValidation(std::string("option '") + key + "' names no paths");
  return out;
}

void RequireFile(const std::string& path, const char* what) {
  if (!fs::is_regular_file(path)) {
    ThrowValidation(std::string(what) + " '" + path + "' does not exist");
  }
}

Provenance StageProvenance(const Json& options, std::string stage, std::string label = "") {
  Provenance p;
  if (options.contains(kProvenanceKey)) {
    const Json& j = options[kProvenanceKey];
    p.config_hash = j.value("config_hash", std::string());
    if (j.contains("seed") && !j["seed"].is_null()) p.seed = j["seed"].get<std::uint64_t>();
  } else {
    p.config_hash = Sha256Hex(options.dump());
    if (options.contains("seed") && options["seed"].is_number_unsigned()) {
      p.seed = options["seed"].get<std::uint64_t>();
    }
  }
  p.stage = std::move(stage);
  p.label = std::move(label);
  return p;
}

std::string Stem(const std::string& path) { return fs::path(path).stem().string(); }

}  // namespace

Json RunIngestStage(const Json& options) {
  const std::string in = RequireString(options, "in");
  const std::string out = RequireString(options, "out");
  std::string format_name = OptString(options, "format");
  if (format_name.empty()) {
    format_name = text::ToLowerAscii(fs::path(in).extension().string()) == ".csv" ? "csv" : "jsonl";
  }
  const auto format = corpus::ParseInputFormat(format_name);
  if (!format) ThrowValidation("unknown input format '" + format_name + "'");
  RequireFile(in, "input file");

  corpus::IngestResult result = corpus::Ingest(in, *format);
  const std::string label = OptString(options, "label", Stem(in));
  result.corpus.provenance = label;
  const Provenance prov = StageProvenance(options, "ingest", label);
  corpus::WriteCorpus(out, result.corpus, prov);
  const std::string rejects_path = corpus::RejectsPathFor(out);
  corpus::WriteRejects(rejects_path, result.rejects, prov);
  return Json{{"records", result.corpus.size()},
              {"rejects", result.rejects.size()},
              {"out", out},
              {"rejects_out", rejects_path},
              {"stats", corpus::StatsToJson(corpus::ComputeStats(result.corpus))}};
}

Json RunCleanStage(const Json& options) {
  const std::vector<std::string> inputs = PathList(options, "in");
  const std::string lexicon = RequireString(options, "lexicon");
  const std::string out = RequireString(options, "out");
  RequireFile(lexicon, "lexicon");
  for (const std::string& p : inputs) RequireFile(p, "input corpus");
  corpus::CleanOptions clean_options;
  clean_options.titles.threshold = OptNumber(options, "title_threshold", 0.8);
  clean_options.titles.min_support = OptNumber<std::size_t>(options, "title_min_support", 2);
  if (!(clean_options.titles.threshold > 0 && clean_options.titles.threshold <= 1)) {
    ThrowValidation("title threshold must be in (0, 1]");
  }
  const corpus::WordSet words = corpus::LoadWordSet(lexicon, OptBool(options, "regex", false));

  // Per sheet: repeated values, then repeated titles; then the sheets are
  // merged and the whole chain runs to a fixed point.
  std::vector<corpus::Corpus> parts;
  std::size_t input_records = 0;
  std::size_t after_values = 0;
  for (const std::string& p : inputs) {
    corpus::Corpus c = corpus::LoadCorpus(p);
    input_records += c.size();
    c = corpus::RemoveRepeatedValues(c);
    after_values += c.size();
    parts.push_back(corpus::RemoveRepeatedTitles(c, clean_options.titles));
  }
  corpus::Corpus merged = corpus::SynthesizeMultiSheet(parts);
  merged.provenance = "cleaned";
  corpus::CleanResult cleaned = corpus::CleanCorpus(merged, words, clean_options);
  cleaned.corpus.provenance = "cleaned";

  const Provenance prov = StageProvenance(options, "clean", "cleaned");
  corpus::WriteCorpus(out, cleaned.corpus, prov);
  const std::string rejects_path = corpus::RejectsPathFor(out);
  corpus::WriteRejects(rejects_path, cleaned.rejects, prov);
  return Json{{"input_records", input_records},
              {"duplicates_removed", input_records - after_values},
              {"records", cleaned.corpus.size()},
              {"rejects", cleaned.rejects.size()},
              {"lexicon_entries", words.entries.size()},
              {"out", out},
              {"rejects_out", rejects_path}};
}

Json RunSplitStage(const Json& options) {
  const std::string in = RequireString(options, "in");
  const std::string out_dir = RequireString(options, "out_dir");
  if (!options.contains("seed") || !options["seed"].is_number_unsigned()) {
    ThrowValidation("missing required option 'seed' (unsigned integer)");
  }
  const std::uint64_t seed = options["seed"].get<std::uint64_t>();
  const double ratio = OptNumber(options, "ratio", 0.8);
  RequireFile(in, "input corpus");

  const corpus::Corpus all = corpus::LoadCorpus(in);
  const corpus::Partition part = corpus::PartitionByInstitution(all);
  corpus::TrainEvalSplit split = corpus::SplitTrainEval(part.train_source, ratio, seed);
  split.train.provenance = "institution-1-train";
  split.eval.provenance = "institution-1-eval";
  corpus::Corpus external = part.external_test;
  external.provenance = "external-test";
  corpus::Corpus test = split.eval;
  test.records.insert(test.records.end(), external.records.begin(), external.records.end());
  test.provenance = "test";

  Provenance prov = StageProvenance(options, "split");
  prov.seed = seed;
  const fs::path dir(out_dir);
  Json files = Json::object();
  for (const corpus::Corpus* c : {&split.train, &split.eval, &external, &test}) {
    std::string name = c == &split.train ? "train" : c == &split.eval ? "eval"
                     : c == &external    ? "external" : "test";
    const std::string path = (dir / (name + ".jsonl")).string();
    corpus::WriteCorpus(path, *c, prov);
    files[name] = {{"path", path}, {"records", c->size()}};
  }

  const int pct = static_cast<int>(std::lround(ratio * 100));
  std::vector<StatsColumn> columns;
  columns.push_back({"Institution 1 (" + std::to_string(pct) + "%)", corpus::ComputeStats(split.train)});
  columns.push_back({"Institution 1 (" + std::to_string(100 - pct) + "%)", corpus::ComputeStats(split.eval)});
  for (int inst = corpus::kMinInstitution + 1; inst <= corpus::kMaxInstitution; ++inst) {
    corpus::Corpus only;
    for (const corpus::RadiologyReport& r : external.records) {
      if (r.institution == inst) only.records.push_back(r);
    }
    columns.push_back({"Institution " + std::to_string(inst), corpus::ComputeStats(only)});
  }
  columns.push_back({"All Set", corpus::ComputeStats(all)});
  Json stats = Json::object();
  for (const StatsColumn& c : columns) stats[c.caption] = corpus::StatsToJson(c.stats);
  prov.label = "statistics";
  const std::string stats_json = (dir / "stats.json").string();
  const std::string stats_md = (dir / "stats.md").string();
  WriteFile(stats_json, RenderJsonDocument(stats, &prov));
  WriteFile(stats_md, RenderStatsTable(columns, TableFormat::kMarkdown, &prov));
  files["stats"] = {{"path", stats_json}};
  files["stats_table"] = {{"path", stats_md}};
  return Json{{"seed", seed}, {"ratio", ratio}, {"files", files}};
}

Json RunPromptsStage(const Json& options) {
  const std::string templates_path = RequireString(options, "templates");
  const std::string corpus_path = RequireString(options, "corpus");
  const std::string out = RequireString(options, "out");
  RequireFile(templates_path, "template file");
  RequireFile(corpus_path, "corpus");
  const std::vector<prompt::PromptTemplate> templates = prompt::LoadTemplates(templates_path);
  std::vector<int> ids;
  if (options.contains("template_ids") && !options["template_ids"].is_null()) {
    for (const Json& id : options["template_ids"]) ids.push_back(id.get<int>());
  } else {
    for (const prompt::PromptTemplate& t : templates) ids.push_back(t.template_id);
  }
  const corpus::Corpus c = corpus::LoadCorpus(corpus_path);
  const bool with_labels = OptBool(options, "with_labels", false);

  std::vector<Json> rows;
  std::vector<corpus::Reject> rejects;
  for (int id : ids) {
    const prompt::PromptBatch batch =
        prompt::SynthesizeBatch(prompt::FindTemplate(templates, id), c, with_labels);
    for (const prompt::SynthesizedPrompt& p : batch.prompts) rows.push_back(prompt::PromptToJson(p));
    rejects.insert(rejects.end(), batch.rejects.begin(), batch.rejects.end());
  }
  if (rows.empty()) ThrowStage("no prompt could be synthesized");
  const Provenance prov = StageProvenance(options, "prompts", Stem(corpus_path));
  WriteJsonl(out, rows, &prov);
  const std::string rejects_path = corpus::RejectsPathFor(out);
  corpus::WriteRejects(rejects_path, rejects, prov);
  return Json{{"prompts", rows.size()}, {"rejects", rejects.size()},
              {"templates", ids}, {"out", out}};
}

Json RunInferStage(const Json& options) {
  const std::string config_path = RequireString(options, "config");
  const std::string backend_id = RequireString(options, "backend");
  const std::string prompts_path = RequireString(options, "prompts");
  const std::string out = RequireString(options, "out");
  RequireFile(config_path, "backend config");
  RequireFile(prompts_path, "prompt file");
  const std::size_t parallel = OptNumber<std::size_t>(options, "parallel", 1);
  if (parallel == 0) ThrowValidation("parallel must be >= 1");

  const inference::InferenceConfig config = inference::LoadInferenceConfig(config_path);
  inference::GenerationConfig generation = config.generation;
  if (options.contains("generation") && !options["generation"].is_null()) {
    Json merged = inference::GenerationConfigToJson(generation);
    for (const auto& [k, v] : options["generation"].items()) merged[k] = v;
    generation = inference::GenerationConfigFromJson(merged);
  }
  const std::unique_ptr<inference::Backend> backend =
      inference::MakeBackend(inference::FindBackend(config, backend_id));
  const std::vector<prompt::SynthesizedPrompt> prompts = prompt::LoadPrompts(prompts_path);
  if (prompts.empty()) ThrowValidation("prompt file '" + prompts_path + "' is empty");

  const std::vector<inference::GenerationOutcome> outcomes =
      inference::RunInference(*backend, prompts, generation, parallel);
  std::vector<Json> rows;
  std::map<std::string, std::size_t> failures;
  std::size_t attempts = 0;
  for (const inference::GenerationOutcome& o : outcomes) {
    rows.push_back(inference::OutcomeToJson(o));
    attempts += static_cast<std::size_t>(o.attempts);
    if (o.failure) ++failures[std::string(inference::FailureName(*o.failure))];
  }
  const Provenance prov = StageProvenance(options, "infer", backend_id);
  WriteJsonl(out, rows, &prov);
  return Json{{"backend", backend_id}, {"outcomes", rows.size()}, {"attempts", attempts},
              {"failures", failures}, {"out", out}};
}

Json RunScoreStage(const Json& options) {
  const std::vector<std::string> outcome_paths = PathList(options, "outcomes");
  const std::string refs_path = RequireString(options, "refs");
  const std::string out = RequireString(options, "out");
  RequireFile(refs_path, "reference corpus");
  std::vector<rouge::Grouping> groupings;
  if (options.contains("group_by") && !options["group_by"].is_null()) {
    const Json& g = options["group_by"];
    for (const Json& name : g.is_array() ? g : Json::array({g})) {
      const auto grouping = rouge::ParseGrouping(name.get<std::string>());
      if (!grouping) ThrowValidation("unknown grouping '" + name.get<std::string>() + "'");
      groupings.push_back(*grouping);
    }
  } else {
    groupings.push_back(rouge::Grouping::kInstitution);
  }
  const std::string averaging_name = OptString(options, "averaging", "macro");
  if (averaging_name != "macro" && averaging_name != "micro") {
    ThrowValidation("averaging must be 'macro' or 'micro'");
  }
  const rouge::Averaging averaging =
      averaging_name == "micro" ? rouge::Averaging::kMicro : rouge::Averaging::kMacro;

  std::vector<inference::GenerationOutcome> outcomes;
  for (const std::string& p : outcome_paths) {
    RequireFile(p, "outcome file");
    std::vector<inference::GenerationOutcome> part = inference::LoadOutcomes(p);
    outcomes.insert(outcomes.end(), part.begin(), part.end());
  }
  if (outcomes.empty()) ThrowValidation("no outcomes to score");
  const corpus::Corpus refs = corpus::LoadCorpus(refs_path);

  std::unique_ptr<inference::Segmenter> segmenter;
  const std::string dictionary = OptString(options, "dictionary");
  if (dictionary.empty()) {
    segmenter = std::make_unique<inference::CharacterSegmenter>();
  } else {
    RequireFile(dictionary, "segmentation dictionary");
    segmenter = std::make_unique<inference::DictionarySegmenter>(
        corpus::LoadWordSet(dictionary).entries);
  }
  const std::vector<rouge::RecordScore> scores = rouge::ScorePairs(outcomes, refs, *segmenter);
  const rouge::ScoreTable table = rouge::AggregateScores(scores, refs, groupings, averaging);

  const Provenance prov = StageProvenance(options, "score", averaging_name);
  WriteFile(out, RenderJsonDocument(rouge::ScoreTableToJson(table), &prov));
  Json summary{{"records", scores.size()}, {"rows", table.rows.size()},
               {"warnings", table.warnings}, {"out", out}};
  if (const std::string csv_path = OptString(options, "csv"); !csv_path.empty()) {
    WriteFile(csv_path, rouge::ScoreTableToCsv(table, &prov));
    summary["csv"] = csv_path;
  }
  if (const std::string records_path = OptString(options, "records_out"); !records_path.empty()) {
    std::vector<Json> rows;
    for (const rouge::RecordScore& s : scores) rows.push_back(rouge::RecordScoreToJson(s));
    WriteJsonl(records_path, rows, &prov);
    summary["records_out"] = records_path;
  }
  return summary;
}

Json RunSelectStage(const Json& options) {
  const std::string templates_path = RequireString(options, "templates");
  const std::string trainer_handle = RequireString(options, "trainer");
  const std::string eval_path = RequireString(options, "eval");
  const std::string out = RequireString(options, "out");
  RequireFile(templates_path, "template file");
  RequireFile(eval_path, "evaluation corpus");
  const std::string key_name = OptString(options, "key", "mean_rl_f1");
  const auto key = selection::ParseSelectionKey(key_name);
  if (!key) ThrowValidation("unknown selection key '" + key_name + "'");

  selection::SweepOptions sweep_options;
  if (options.contains("training") && !options["training"].is_null()) {
    sweep_options.config = selection::TrainingConfigFromJson(options["training"]);
  }
  sweep_options.job.small_epoch = OptNumber(options, "small_epoch", selection::kDefaultSmallEpoch);
  sweep_options.job.base_model_ref = OptString(options, "base_model", sweep_options.job.base_model_ref);
  if (const std::string fp = OptString(options, "freeze_policy"); !fp.empty()) {
    sweep_options.job.freeze_policy = fp;
  }
  sweep_options.work_dir = OptString(options, "work_dir", "select_work");
  sweep_options.job.output_dir = (fs::path(sweep_options.work_dir) / "adapters").string();
  if (options.contains("generation") && !options["generation"].is_null()) {
    sweep_options.generation = inference::GenerationConfigFromJson(options["generation"]);
  }
  sweep_options.parallel = OptNumber<std::size_t>(options, "parallel", 1);
  if (sweep_options.parallel == 0) ThrowValidation("parallel must be >= 1");
  sweep_options.provenance = StageProvenance(options, "select");

  const std::vector<prompt::PromptTemplate> templates = prompt::LoadTemplates(templates_path);
  const corpus::Corpus eval = corpus::LoadCorpus(eval_path);
  std::vector<std::string> warnings;
  corpus::Corpus train;
  if (const std::string train_path = OptString(options, "train"); !train_path.empty()) {
    RequireFile(train_path, "training corpus");
    train = corpus::LoadCorpus(train_path);
  } else {
    train = eval;
    warnings.push_back("no training corpus given; prompt sets are rendered from the evaluation corpus");
  }
  const std::unique_ptr<selection::Trainer> trainer = selection::MakeTrainer(trainer_handle);

  const selection::SweepResult sweep =
      selection::SmallEpochSweep(templates, *trainer, train, eval, sweep_options);
  warnings.insert(warnings.end(), sweep.warnings.begin(), sweep.warnings.end());
  const selection::PromptSelectionResult result = selection::FindBestPrompt(sweep.scores(), *key);

  Provenance prov = sweep_options.provenance;
  prov.label = "selection";
  Json doc = selection::SelectionToJson(result);
  doc["sweep"] = selection::SweepToJson(sweep);
  doc["warnings"] = warnings;
  WriteFile(out, RenderJsonDocument(doc, &prov));

  Json summary = selection::SelectionToJson(result);
  summary["excluded"] = selection::SweepToJson(sweep)["excluded"];
  const std::string plan_out =
      OptString(options, "plan_out", (fs::path(sweep_options.work_dir) / "full_job.json").string());
  const selection::TemplateRun& winner = sweep.runs.at(result.best_index);
  const selection::ContinuationPlan plan =
      selection::FullTrainingPlan(result, winner.job, winner.adapter_ref, sweep_options.config);
  prov.label = "full-training-plan";
  selection::WriteJobSpec(plan_out, plan.job, &prov);
  warnings.insert(warnings.end(), plan.warnings.begin(), plan.warnings.end());
  summary["plan_out"] = plan_out;
  summary["continuation_empty"] = plan.empty;
  summary["warnings"] = warnings;
  summary["out"] = out;
  return summary;
}

Json RunExpertScoreStage(const Json& options, std::istream& in, std::ostream& out) {
  const std::string session = RequireString(options, "session");
  const std::string import_path = OptString(options, "import");
  if (!import_path.empty()) {
    RequireFile(import_path, "TSV file");
    const std::vector<expert::ExpertScoreCard> imported = expert::ImportTsv(import_path);
    const expert::Journal journal = expert::LoadJournal(session);
    std::size_t appended = 0;
    for (const expert::ExpertScoreCard& card : imported) {
      bool present = false;
      for (const expert::ExpertScoreCard& c : journal.cards) present |= c == card;
      if (present) continue;
      expert::AppendCard(session, card);
      ++appended;
    }
    return Json{{"imported", imported.size()}, {"appended", appended}, {"session", session}};
  }

  const std::string outcomes_path = RequireString(options, "outcomes");
  RequireFile(outcomes_path, "outcome file");
  expert::RaterIdentity rater;
  rater.rater_id = RequireString(options, "rater_id");
  const auto level = expert::ParseRaterLevel(RequireString(options, "rater_level"));
  if (!level) ThrowValidation("rater level must be junior, intermediate or senior");
  rater.level = *level;

  std::map<std::string, std::string> findings;
  if (const std::string corpus_path = OptString(options, "corpus"); !corpus_path.empty()) {
    RequireFile(corpus_path, "corpus");
    for (const corpus::RadiologyReport& r : corpus::LoadCorpus(corpus_path).records) {
      findings[r.record_id] = r.finding;
    }
  }
  std::vector<expert::ScoringItem> items;
  for (const inference::GenerationOutcome& o : inference::LoadOutcomes(outcomes_path)) {
    const auto it = findings.find(o.record_id);
    items.push_back({o.record_id, o.backend_id, it == findings.end() ? "" : it->second,
                     o.impression_text});
  }
  const expert::SessionResult result =
      expert::RunScoringSession(items, rater, session, in, out);
  return Json{{"items", items.size()},     {"replayed", result.replayed},
              {"entered", result.entered}, {"remaining", result.remaining},
              {"session", session}};
}

Json RunExpertAggregateStage(const Json& options) {
  const std::vector<std::string> journals = PathList(options, "journals");
  const std::string corpus_path = RequireString(options, "corpus");
  const std::string out = RequireString(options, "out");
  RequireFile(corpus_path, "corpus");
  const std::string scope_name = OptString(options, "scope", "all");
  std::vector<expert::Scope> scopes;
  if (scope_name == "all") {
    scopes = {expert::Scope::kOg, expert::Scope::kIhg, expert::Scope::kOhg};
  } else {
    const auto scope = expert::ParseScope(scope_name);
    if (!scope) ThrowValidation("scope must be og, ihg, ohg or all");
    scopes.push_back(*scope);
  }
  std::vector<expert::ExpertScoreCard> cards;
  for (const std::string& p : journals) {
    RequireFile(p, "journal");
    const expert::Journal j = expert::LoadJournal(p);
    cards.insert(cards.end(), j.cards.begin(), j.cards.end());
  }
  const corpus::Corpus metadata = corpus::LoadCorpus(corpus_path);
  const std::vector<expert::RecordMeans> means = expert::AverageRaters(cards);

  expert::ScopeReport combined;
  for (expert::Scope s : scopes) {
    expert::ScopeReport r = expert::ScopeAggregate(means, s, metadata);
    combined.aggregates.insert(combined.aggregates.end(), r.aggregates.begin(), r.aggregates.end());
    combined.warnings.insert(combined.warnings.end(), r.warnings.begin(), r.warnings.end());
  }
  const Provenance prov = StageProvenance(options, "expert", scope_name);
  WriteFile(out, expert::RadarCsv(combined, &prov));
  Json summary{{"cards", cards.size()}, {"records", means.size()},
               {"rows", combined.aggregates.size()}, {"warnings", combined.warnings},
               {"out", out}};
  if (const std::string json_out = OptString(options, "json_out"); !json_out.empty()) {
    WriteFile(json_out, RenderJsonDocument(expert::ScopeReportToJson(combined), &prov));
    summary["json_out"] = json_out;
  }
  return summary;
}

Json RunKernelsSelftest(const Json& options) {
  const std::uint64_t seed = OptNumber<std::uint64_t>(options, "seed", 1);
  const std::size_t cases = OptNumber<std::size_t>(options, "cases", 1000);
  if (cases == 0) ThrowValidation("cases must be >= 1");
  bool passed = true;
  Json checks = Json::array();
  for (const kernels::SelftestCheck& c : kernels::RunSelftest(seed, cases)) {
    passed &= c.passed;
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"worst", c.worst},
                      {"tolerance", c.tolerance}, {"cases", c.cases}});
  }
  return Json{{"passed", passed}, {"seed", seed}, {"checks", checks}};
}

Json RunReportStage(const Json& options) {
  const std::string kind = OptString(options, "kind", "table");
  const std::string out = RequireString(options, "out");
  const std::string format_name = OptString(options, "format", "markdown");
  const auto format = ParseTableFormat(format_name);
  if (!format) ThrowValidation("format must be csv or markdown");

  if (kind == "table") {
    const std::string table_path = RequireString(options, "table");
    RequireFile(table_path, "score table");
    const std::string layout_name = OptString(options, "layout", "cross_institution");
    const auto layout = ParseLayout(layout_name);
    if (!layout) ThrowValidation("unknown layout '" + layout_name + "'");
    ReportOptions report_options;
    if (options.contains("backend_order") && !options["backend_order"].is_null()) {
      report_options.backend_order = options["backend_order"].get<std::vector<std::string>>();
    }
    const rouge::ScoreTable table = rouge::LoadScoreTable(table_path);
    const Provenance prov = StageProvenance(options, "report", layout_name);
    WriteFile(out, RenderReportTable(table, *layout, *format, &prov, report_options));
    return Json{{"kind", kind}, {"layout", layout_name}, {"out", out}};
  }
  if (kind == "utility") {
    std::vector<inference::GenerationOutcome> outcomes;
    for (const std::string& p : PathList(options, "outcomes")) {
      RequireFile(p, "outcome file");
      std::vector<inference::GenerationOutcome> part = inference::LoadOutcomes(p);
      outcomes.insert(outcomes.end(), part.begin(), part.end());
    }
    std::map<std::string, BackendInfo> info;
    if (const std::string info_path = OptString(options, "info"); !info_path.empty()) {
      RequireFile(info_path, "backend info");
      info = BackendInfoFromJson(ParseJsonFile(info_path));
    }
    const std::vector<UtilityRecord> records = UtilityMetrics(outcomes, info);
    const Provenance prov = StageProvenance(options, "report", "utility");
    WriteFile(out, RenderUtilityTable(records, *format, &prov));
    return Json{{"kind", kind}, {"backends", records.size()}, {"out", out}};
  }
  ThrowValidation("report kind must be 'table' or 'utility'");
}

}  // namespace radiogen::pipeline
