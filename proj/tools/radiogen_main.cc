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

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "radiogen/radiogen.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitStage = 2;

int ExitCodeFor(rg_status status) {
  switch (status) {
    case RG_OK:
      return kExitOk;
    case RG_ERR_VALIDATION:
    case RG_ERR_IO:
      return kExitValidation;
    default:
      return kExitStage;
  }
}

const char* StatusName(rg_status status) {
  switch (status) {
    case RG_OK:
      return "ok";
    case RG_ERR_VALIDATION:
      return "validation error";
    case RG_ERR_IO:
      return "i/o error";
    case RG_ERR_STAGE:
      return "stage failure";
    case RG_ERR_BACKEND:
      return "backend failure";
    default:
      return "internal error";
  }
}

int Finish(rg_status status, char* summary, bool quiet) {
  if (status != RG_OK) {
    std::cerr << "radiogen: " << StatusName(status) << ": " << rg_last_error() << "\n";
    rg_string_free(summary);
    return ExitCodeFor(status);
  }
  if (summary != nullptr && !quiet) {
    std::cout << Json::parse(summary).dump(2) << "\n";
  }
  rg_string_free(summary);
  return kExitOk;
}

using StageFn = rg_status (*)(const char*, char**);

int CallStage(StageFn fn, const Json& options, bool quiet) {
  char* summary = nullptr;
  const rg_status status = fn(options.dump().c_str(), &summary);
  return Finish(status, summary, quiet);
}

template <typename T>
void SetIf(Json& options, const char* key, const std::optional<T>& value) {
  if (value) options[key] = *value;
}

void SetIf(Json& options, const char* key, const std::string& value) {
  if (!value.empty()) options[key] = value;
}

void SetIf(Json& options, const char* key, const std::vector<std::string>& values) {
  if (!values.empty()) options[key] = values;
}

std::optional<Json> ParseJsonFlag(const std::string& text, const char* flag) {
  if (text.empty()) return std::nullopt;
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw CLI::ValidationError(flag, std::string("not valid JSON: ") + e.what());
  }
}

std::size_t ReadStdin(void*, char* buffer, std::size_t capacity) {
  return std::fread(buffer, 1, capacity, stdin);
}

void WriteStream(void* context, const char* data, std::size_t len) {
  std::FILE* stream = static_cast<std::FILE*>(context);
  std::fwrite(data, 1, len, stream);
  std::fflush(stream);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radiology report impression generation toolkit", "radiogen"};
  app.set_version_flag("--version", std::string(rg_version()));
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Do not print the JSON summary");

  int exit_code = kExitOk;

  // ingest
  struct {
    std::string in, format, out, label;
  } ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Parse raw report exports into a canonical corpus");
  ingest_cmd->add_option("--in", ingest.in, "Input file")->required();
  ingest_cmd->add_option("--format", ingest.format, "jsonl or csv (default: by extension)")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  ingest_cmd->add_option("--out", ingest.out, "Output corpus JSONL")->required();
  ingest_cmd->add_option("--label", ingest.label, "Source label recorded in provenance");
  ingest_cmd->callback([&] {
    Json o = {{"in", ingest.in}, {"out", ingest.out}};
    SetIf(o, "format", ingest.format);
    SetIf(o, "label", ingest.label);
    exit_code = CallStage(rg_stage_ingest, o, quiet);
  });

  // clean
  struct {
    std::vector<std::string> in;
    std::string lexicon, out;
    bool regex = false;
    std::optional<double> threshold;
    std::optional<std::size_t> min_support;
  } clean;
  auto* clean_cmd = app.add_subcommand("clean", "Deduplicate and filter a corpus");
  clean_cmd->add_option("--in", clean.in, "Input corpus (one per sheet)")->required();
  clean_cmd->add_option("--lexicon", clean.lexicon, "Meaningless-content word list")->required();
  clean_cmd->add_flag("--regex", clean.regex, "Treat lexicon entries as regular expressions");
  clean_cmd->add_option("--title-threshold", clean.threshold, "Header frequency threshold")
      ->check(CLI::Range(0.0, 1.0));
  clean_cmd->add_option("--title-min-support", clean.min_support, "Minimum repeats for a header");
  clean_cmd->add_option("--out", clean.out, "Output corpus JSONL")->required();
  clean_cmd->callback([&] {
    Json o = {{"in", clean.in}, {"lexicon", clean.lexicon}, {"out", clean.out}};
    if (clean.regex) o["regex"] = true;
    SetIf(o, "title_threshold", clean.threshold);
    SetIf(o, "title_min_support", clean.min_support);
    exit_code = CallStage(rg_stage_clean, o, quiet);
  });

  // split
  struct {
    std::string in, out_dir;
    std::optional<double> ratio;
    std::uint64_t seed = 0;
  } split;
  auto* split_cmd = app.add_subcommand("split", "Partition by institution and split train/eval");
  split_cmd->add_option("--in", split.in, "Cleaned corpus")->required();
  split_cmd->add_option("--out-dir", split.out_dir, "Output directory")->required();
  split_cmd->add_option("--ratio", split.ratio, "Training fraction")->check(CLI::Range(0.0, 1.0));
  split_cmd->add_option("--seed", split.seed, "Shuffle seed")->required();
  split_cmd->callback([&] {
    Json o = {{"in", split.in}, {"out_dir", split.out_dir}, {"seed", split.seed}};
    SetIf(o, "ratio", split.ratio);
    exit_code = CallStage(rg_stage_split, o, quiet);
  });

  // prompts
  struct {
    std::string templates, corpus, out;
    bool with_labels = false;
    std::vector<int> ids;
  } prompts;
  auto* prompts_cmd = app.add_subcommand("prompts", "Render prompt templates over a corpus");
  prompts_cmd->add_option("--templates", prompts.templates, "Template file")->required();
  prompts_cmd->add_option("--corpus", prompts.corpus, "Corpus JSONL")->required();
  prompts_cmd->add_option("--out", prompts.out, "Output prompt JSONL")->required();
  prompts_cmd->add_flag("--with-labels", prompts.with_labels, "Attach reference impressions");
  prompts_cmd->add_option("--template-id", prompts.ids, "Restrict to these template ids");
  prompts_cmd->callback([&] {
    Json o = {{"templates", prompts.templates}, {"corpus", prompts.corpus}, {"out", prompts.out},
              {"with_labels", prompts.with_labels}};
    if (!prompts.ids.empty()) o["template_ids"] = prompts.ids;
    exit_code = CallStage(rg_stage_prompts, o, quiet);
  });

  // infer
  struct {
    std::string backend, prompts, config, out, generation;
    std::optional<std::size_t> parallel;
    std::optional<int> max_retries;
    std::optional<long long> timeout_ms;
  } infer;
  auto* infer_cmd = app.add_subcommand("infer", "Generate impressions with a backend");
  infer_cmd->add_option("--backend", infer.backend, "Backend id")->required();
  infer_cmd->add_option("--prompts", infer.prompts, "Prompt JSONL")->required();
  infer_cmd->add_option("--config", infer.config, "Backend config file")->required();
  infer_cmd->add_option("--out", infer.out, "Output outcome JSONL")->required();
  infer_cmd->add_option("--parallel", infer.parallel, "Concurrent requests")
      ->check(CLI::PositiveNumber);
  infer_cmd->add_option("--max-retries", infer.max_retries, "Retries after a failed attempt")
      ->check(CLI::NonNegativeNumber);
  infer_cmd->add_option("--timeout-ms", infer.timeout_ms, "Per-request timeout")
      ->check(CLI::PositiveNumber);
  infer_cmd->add_option("--generation", infer.generation, "Generation overrides as JSON");
  infer_cmd->callback([&] {
    Json o = {{"config", infer.config}, {"backend", infer.backend}, {"prompts", infer.prompts},
              {"out", infer.out}};
    SetIf(o, "parallel", infer.parallel);
    Json generation = ParseJsonFlag(infer.generation, "--generation").value_or(Json::object());
    SetIf(generation, "max_retries", infer.max_retries);
    SetIf(generation, "request_timeout_ms", infer.timeout_ms);
    if (!generation.empty()) o["generation"] = generation;
    exit_code = CallStage(rg_stage_infer, o, quiet);
  });

  // score
  struct {
    std::vector<std::string> outcomes, group_by;
    std::string refs, out, csv, records_out, averaging, dictionary;
  } score;
  auto* score_cmd = app.add_subcommand("score", "Compute ROUGE score tables");
  score_cmd->add_option("--outcomes", score.outcomes, "Outcome JSONL files")->required();
  score_cmd->add_option("--refs", score.refs, "Reference corpus")->required();
  score_cmd->add_option("--group-by", score.group_by, "institution, system, both or all")
      ->check(CLI::IsMember({"all", "overall", "institution", "system", "both"}));
  score_cmd->add_option("--averaging", score.averaging, "macro or micro")
      ->check(CLI::IsMember({"macro", "micro"}));
  score_cmd->add_option("--dictionary", score.dictionary, "Word list for dictionary segmentation");
  score_cmd->add_option("--out", score.out, "Output score JSON")->required();
  score_cmd->add_option("--csv", score.csv, "Also write the table as CSV");
  score_cmd->add_option("--records-out", score.records_out, "Per-record scores JSONL");
  score_cmd->callback([&] {
    Json o = {{"outcomes", score.outcomes}, {"refs", score.refs}, {"out", score.out}};
    SetIf(o, "group_by", score.group_by);
    SetIf(o, "averaging", score.averaging);
    SetIf(o, "dictionary", score.dictionary);
    SetIf(o, "csv", score.csv);
    SetIf(o, "records_out", score.records_out);
    exit_code = CallStage(rg_stage_score, o, quiet);
  });

  // select
  struct {
    std::string templates, trainer, eval, train, out, key, base_model, freeze_policy, work_dir,
        plan_out, training, generation;
    std::optional<int> small_epoch;
    std::optional<std::size_t> parallel;
  } select;
  auto* select_cmd = app.add_subcommand("select", "Small-epoch prompt sweep and selection");
  select_cmd->add_option("--templates", select.templates, "Template file")->required();
  select_cmd->add_option("--trainer", select.trainer, "Trainer command, URL or stub:<path>")
      ->required();
  select_cmd->add_option("--eval", select.eval, "Evaluation corpus")->required();
  select_cmd->add_option("--train", select.train, "Training corpus");
  select_cmd->add_option("--out", select.out, "Selection result JSON")->required();
  select_cmd->add_option("--key", select.key, "Selection key")
      ->check(CLI::IsMember({"mean_rl_f1", "mean_r1_f1", "mean_of_three"}));
  select_cmd->add_option("--small-epoch", select.small_epoch, "Epochs per sweep job")
      ->check(CLI::PositiveNumber);
  select_cmd->add_option("--base-model", select.base_model, "Base model reference");
  select_cmd->add_option("--freeze-policy", select.freeze_policy, "embeddings_only or lora")
      ->check(CLI::IsMember({"embeddings_only", "lora"}));
  select_cmd->add_option("--work-dir", select.work_dir, "Directory for job specs and outputs");
  select_cmd->add_option("--plan-out", select.plan_out, "Continuation job spec path");
  select_cmd->add_option("--training", select.training, "Training config overrides as JSON");
  select_cmd->add_option("--generation", select.generation, "Generation overrides as JSON");
  select_cmd->add_option("--parallel", select.parallel, "Concurrent requests")
      ->check(CLI::PositiveNumber);
  select_cmd->callback([&] {
    Json o = {{"templates", select.templates}, {"trainer", select.trainer},
              {"eval", select.eval}, {"out", select.out}};
    SetIf(o, "train", select.train);
    SetIf(o, "key", select.key);
    SetIf(o, "small_epoch", select.small_epoch);
    SetIf(o, "base_model", select.base_model);
    SetIf(o, "freeze_policy", select.freeze_policy);
    SetIf(o, "work_dir", select.work_dir);
    SetIf(o, "plan_out", select.plan_out);
    SetIf(o, "parallel", select.parallel);
    if (auto j = ParseJsonFlag(select.training, "--training")) o["training"] = *j;
    if (auto j = ParseJsonFlag(select.generation, "--generation")) o["generation"] = *j;
    exit_code = CallStage(rg_stage_select, o, quiet);
  });

  // expert
  auto* expert_cmd = app.add_subcommand("expert", "Clinical expert scoring");
  expert_cmd->require_subcommand(1);
  struct {
    std::string session, import_path, rater_id, rater_level, corpus;
    std::vector<std::string> outcomes;
  } expert_score;
  auto* es_cmd = expert_cmd->add_subcommand("score", "Interactive or imported scoring session");
  es_cmd->add_option("--session", expert_score.session, "Journal JSONL (resumed if present)")
      ->required();
  es_cmd->add_option("--outcomes", expert_score.outcomes, "Outcome JSONL files to score");
  es_cmd->add_option("--import", expert_score.import_path, "Import scores from a TSV file");
  es_cmd->add_option("--rater-id", expert_score.rater_id, "Rater identifier");
  es_cmd->add_option("--rater-level", expert_score.rater_level, "junior, intermediate or senior")
      ->check(CLI::IsMember({"junior", "intermediate", "senior"}));
  es_cmd->add_option("--corpus", expert_score.corpus, "Corpus providing findings for display");
  es_cmd->callback([&] {
    Json o = {{"session", expert_score.session}};
    SetIf(o, "outcomes", expert_score.outcomes);
    SetIf(o, "import", expert_score.import_path);
    SetIf(o, "rater_id", expert_score.rater_id);
    SetIf(o, "rater_level", expert_score.rater_level);
    SetIf(o, "corpus", expert_score.corpus);
    char* summary = nullptr;
    const rg_status status = rg_stage_expert_score(o.dump().c_str(), ReadStdin, nullptr,
                                                   WriteStream, stderr, &summary);
    exit_code = Finish(status, summary, quiet);
  });
  struct {
    std::vector<std::string> journals;
    std::string corpus, scope, out, json_out;
  } expert_agg;
  auto* ea_cmd = expert_cmd->add_subcommand("aggregate", "Aggregate journals into radar tables");
  ea_cmd->add_option("--journals", expert_agg.journals, "Journal JSONL files")->required();
  ea_cmd->add_option("--corpus", expert_agg.corpus, "Corpus with institution metadata")
      ->required();
  ea_cmd->add_option("--scope", expert_agg.scope, "og, ihg, ohg or all")
      ->check(CLI::IsMember({"og", "ihg", "ohg", "all"}));
  ea_cmd->add_option("--out", expert_agg.out, "Radar CSV")->required();
  ea_cmd->add_option("--json-out", expert_agg.json_out, "Also write JSON");
  ea_cmd->callback([&] {
    Json o = {{"journals", expert_agg.journals}, {"corpus", expert_agg.corpus},
              {"out", expert_agg.out}};
    SetIf(o, "scope", expert_agg.scope);
    SetIf(o, "json_out", expert_agg.json_out);
    exit_code = CallStage(rg_stage_expert_aggregate, o, quiet);
  });

  // kernels
  auto* kernels_cmd = app.add_subcommand("kernels", "Foundation kernel utilities");
  kernels_cmd->require_subcommand(1);
  struct {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> cases;
  } selftest;
  auto* st_cmd = kernels_cmd->add_subcommand("selftest", "Run the kernel property suite");
  st_cmd->add_option("--seed", selftest.seed, "Random seed");
  st_cmd->add_option("--cases", selftest.cases, "Random cases per property")
      ->check(CLI::PositiveNumber);
  st_cmd->callback([&] {
    Json o = Json::object();
    SetIf(o, "seed", selftest.seed);
    SetIf(o, "cases", selftest.cases);
    char* summary = nullptr;
    const rg_status status = rg_stage_kernels_selftest(o.dump().c_str(), &summary);
    const bool passed = status == RG_OK && Json::parse(summary)["passed"].get<bool>();
    exit_code = Finish(status, summary, quiet);
    if (status == RG_OK && !passed) {
      std::cerr << "radiogen: kernel selftest failed\n";
      exit_code = kExitStage;
    }
  });

  // report
  auto* report_cmd = app.add_subcommand("report", "Render comparison and utility tables");
  report_cmd->require_subcommand(1);
  struct {
    std::string table, layout, format, out;
    std::vector<std::string> backend_order;
  } report_table;
  auto* rt_cmd = report_cmd->add_subcommand("table", "ROUGE comparison table");
  rt_cmd->add_option("--table", report_table.table, "Score table JSON")->required();
  rt_cmd->add_option("--layout", report_table.layout, "cross_institution, per_system or mixed")
      ->check(CLI::IsMember({"cross_institution", "per_system", "mixed"}));
  rt_cmd->add_option("--format", report_table.format, "markdown or csv")
      ->check(CLI::IsMember({"markdown", "md", "csv"}));
  rt_cmd->add_option("--backend-order", report_table.backend_order, "Row order");
  rt_cmd->add_option("--out", report_table.out, "Output file")->required();
  rt_cmd->callback([&] {
    Json o = {{"kind", "table"}, {"table", report_table.table}, {"out", report_table.out}};
    SetIf(o, "layout", report_table.layout);
    SetIf(o, "format", report_table.format);
    SetIf(o, "backend_order", report_table.backend_order);
    exit_code = CallStage(rg_stage_report, o, quiet);
  });
  struct {
    std::vector<std::string> outcomes;
    std::string info, format, out;
  } report_utility;
  auto* ru_cmd = report_cmd->add_subcommand("utility", "Practical utility table");
  ru_cmd->add_option("--outcomes", report_utility.outcomes, "Outcome JSONL files")->required();
  ru_cmd->add_option("--info", report_utility.info, "Backend info JSON");
  ru_cmd->add_option("--format", report_utility.format, "markdown or csv")
      ->check(CLI::IsMember({"markdown", "md", "csv"}));
  ru_cmd->add_option("--out", report_utility.out, "Output file")->required();
  ru_cmd->callback([&] {
    Json o = {{"kind", "utility"}, {"outcomes", report_utility.outcomes},
              {"out", report_utility.out}};
    SetIf(o, "info", report_utility.info);
    SetIf(o, "format", report_utility.format);
    exit_code = CallStage(rg_stage_report, o, quiet);
  });

  // run
  struct {
    std::string config, output_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> parallel;
    bool verbose = false;
  } run;
  auto* run_cmd = app.add_subcommand("run", "Run the full pipeline from a config file");
  run_cmd->add_option("--config", run.config, "Pipeline config JSON")->required();
  run_cmd->add_option("--output-dir", run.output_dir, "Override the output directory");
  run_cmd->add_option("--seed", run.seed, "Override the seed");
  run_cmd->add_option("--parallel", run.parallel, "Override the parallelism bound")
      ->check(CLI::PositiveNumber);
  run_cmd->add_flag("-v,--verbose", run.verbose, "Log stage progress to stderr");
  run_cmd->callback([&] {
    Json o = {{"config", run.config}};
    SetIf(o, "output_dir", run.output_dir);
    SetIf(o, "seed", run.seed);
    SetIf(o, "parallel", run.parallel);
    char* summary = nullptr;
    const rg_status status = rg_run_pipeline(
        o.dump().c_str(), run.verbose ? WriteStream : nullptr, stderr, &summary);
    exit_code = Finish(status, summary, quiet);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }
  return exit_code;
}
