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

#ifndef RADIOGEN_ROUGE_SCORE_TABLE_H_
#define RADIOGEN_ROUGE_SCORE_TABLE_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "common/jsonl.h"
#include "corpus/report.h"
#include "inference/generation.h"
#include "rouge/rouge.h"

namespace radiogen::rouge {

struct RecordScore {
  std::string record_id;
  std::string backend_id;
  int template_id = 0;
  RougeTriple triple;
  // Failed generations score zero on every variant and carry the reason.
  std::optional<inference::FailureKind> failure;
};

// Segments impression and reference with `segmenter` and scores each outcome.
// Throws Error(kValidation) when an outcome's record_id has no reference.
std::vector<RecordScore> ScorePairs(
    const std::vector<inference::GenerationOutcome>& outcomes,
    const corpus::Corpus& references, const inference::Segmenter& segmenter);

std::vector<RecordScore> ScorePairs(
    const std::vector<inference::GenerationOutcome>& outcomes,
    const corpus::Corpus& references);

enum class Grouping {
  kOverall,      // scope "all"
  kInstitution,  // "institution-<k>"
  kSystem,       // "<system>"
  kBoth,         // "institution-<k>/<system>"
};

std::optional<Grouping> ParseGrouping(std::string_view name);
std::string_view GroupingName(Grouping g);

enum class Averaging {
  kMacro,  // mean of per-record scores
  kMicro,  // scores from summed counts
};

struct TableRow {
  std::string backend_id;
  std::string scope;
  Variant variant = Variant::kR1;
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  std::size_t n = 0;
};

struct ScoreTable {
  std::vector<TableRow> rows;
  std::vector<std::string> warnings;
};

std::string InstitutionScope(int institution);
std::string SystemScope(corpus::BodySystem system);
std::string MixedScope(int institution, corpus::BodySystem system);

// Groups records by (backend_id, scope) using `metadata` for institution and
// system, and averages per variant. Rows are ordered by backend_id, then
// scope (institutions 1..6, systems chest..maxillofacial_neck), then variant.
ScoreTable AggregateScores(const std::vector<RecordScore>& scores,
                           const corpus::Corpus& metadata,
                           const std::vector<Grouping>& groupings,
                           Averaging averaging = Averaging::kMacro);

Json RecordScoreToJson(const RecordScore& score);

Json ScoreTableToJson(const ScoreTable& table);
ScoreTable ScoreTableFromJson(const Json& document);
ScoreTable LoadScoreTable(const std::string& path);

// Header `backend_id,scope,variant,recall,precision,f1,n`.
std::string ScoreTableToCsv(const ScoreTable& table, const Provenance* provenance);

// Shortest round-trip decimal.
std::string FormatNumber(double value);

}  // namespace radiogen::rouge

#endif  // RADIOGEN_ROUGE_SCORE_TABLE_H_
