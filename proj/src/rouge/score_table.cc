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

#include "rouge/score_table.h"

#include <array>
#include <charconv>
#include <map>
#include <tuple>
#include <unordered_map>

#include "common/csv.h"

namespace radiogen::rouge {

std::vector<RecordScore> ScorePairs(
    const std::vector<inference::GenerationOutcome>& outcomes,
    const corpus::Corpus& references, const inference::Segmenter& segmenter) {
  std::unordered_map<std::string, const corpus::RadiologyReport*> by_id;
  for (const corpus::RadiologyReport& r : references.records) by_id[r.record_id] = &r;

  std::vector<RecordScore> scores;
  scores.reserve(outcomes.size());
  for (const inference::GenerationOutcome& o : outcomes) {
    const auto it = by_id.find(o.record_id);
    if (it == by_id.end()) {
      ThrowValidation("outcome record_id '" + o.record_id +
                      "' has no reference impression");
    }
    RecordScore s;
    s.record_id = o.record_id;
    s.backend_id = o.backend_id;
    s.template_id = o.template_id;
    s.failure = o.failure;
    const TokenSeq reference = segmenter.Segment(it->second->impression);
    if (o.failure) {
      // Zero matches against the real reference length.
      s.triple.c1.reference_total = reference.size();
      s.triple.c2.reference_total = reference.size() > 0 ? reference.size() - 1 : 0;
      s.triple.cl.reference_total = reference.size();
    } else {
      s.triple = ScoreTriple(segmenter.Segment(o.impression_text), reference);
    }
    scores.push_back(std::move(s));
  }
  return scores;
}

std::vector<RecordScore> ScorePairs(
    const std::vector<inference::GenerationOutcome>& outcomes,
    const corpus::Corpus& references) {
  static const inference::CharacterSegmenter segmenter;
  return ScorePairs(outcomes, references, segmenter);
}

std::optional<Grouping> ParseGrouping(std::string_view name) {
  if (name == "all" || name == "overall") return Grouping::kOverall;
  if (name == "institution") return Grouping::kInstitution;
  if (name == "system") return Grouping::kSystem;
  if (name == "both") return Grouping::kBoth;
  return std::nullopt;
}

std::string_view GroupingName(Grouping g) {
  switch (g) {
    case Grouping::kOverall:
      return "all";
    case Grouping::kInstitution:
      return "institution";
    case Grouping::kSystem:
      return "system";
    case Grouping::kBoth:
      return "both";
  }
  return "?";
}

std::string InstitutionScope(int institution) {
  return "institution-" + std::to_string(institution);
}

std::string SystemScope(corpus::BodySystem system) {
  return std::string(corpus::SystemName(system));
}

std::string MixedScope(int institution, corpus::BodySystem system) {
  return InstitutionScope(institution) + "/" + SystemScope(system);
}

namespace {

// Sort key placing scopes in reporting order.
struct ScopeKey {
  int group = 0;  // grouping kind
  int institution = 0;
  int system = 0;
  std::string label;

  auto tie() const { return std::tie(group, institution, system); }
  bool operator<(const ScopeKey& o) const { return tie() < o.tie(); }
};

ScopeKey KeyFor(Grouping g, const corpus::RadiologyReport& r) {
  const int sys = static_cast<int>(r.system);
  switch (g) {
    case Grouping::kOverall:
      return {0, 0, 0, "all"};
    case Grouping::kInstitution:
      return {1, r.institution, 0, InstitutionScope(r.institution)};
    case Grouping::kSystem:
      return {2, 0, sys, SystemScope(r.system)};
    case Grouping::kBoth:
      return {3, r.institution, sys, MixedScope(r.institution, r.system)};
  }
  return {};
}

struct Accumulator {
  std::size_t n = 0;
  std::array<double, 3> recall{};
  std::array<double, 3> precision{};
  std::array<double, 3> f1{};
  std::array<MatchCounts, 3> counts{};
};

}  // namespace

ScoreTable AggregateScores(const std::vector<RecordScore>& scores,
                           const corpus::Corpus& metadata,
                           const std::vector<Grouping>& groupings,
                           Averaging averaging) {
  std::unordered_map<std::string, const corpus::RadiologyReport*> by_id;
  for (const corpus::RadiologyReport& r : metadata.records) by_id[r.record_id] = &r;

  std::map<std::pair<std::string, ScopeKey>, Accumulator> groups;
  ScoreTable table;
  for (const RecordScore& s : scores) {
    const auto it = by_id.find(s.record_id);
    if (it == by_id.end()) {
      ThrowValidation("scored record '" + s.record_id + "' has no metadata");
    }
    for (Grouping g : groupings) {
      Accumulator& acc = groups[{s.backend_id, KeyFor(g, *it->second)}];
      ++acc.n;
      for (std::size_t v = 0; v < 3; ++v) {
        const RougeScore& sc = s.triple.get(kAllVariants[v]);
        acc.recall[v] += sc.recall;
        acc.precision[v] += sc.precision;
        acc.f1[v] += sc.f1;
        const MatchCounts& mc = s.triple.counts(kAllVariants[v]);
        acc.counts[v].matches += mc.matches;
        acc.counts[v].candidate_total += mc.candidate_total;
        acc.counts[v].reference_total += mc.reference_total;
      }
    }
  }
  for (const auto& [key, acc] : groups) {
    if (acc.n == 0) {
      table.warnings.push_back("empty group " + key.first + "/" + key.second.label +
                               " suppressed");
      continue;
    }
    for (std::size_t v = 0; v < 3; ++v) {
      TableRow row;
      row.backend_id = key.first;
      row.scope = key.second.label;
      row.variant = kAllVariants[v];
      row.n = acc.n;
      if (averaging == Averaging::kMacro) {
        const double n = static_cast<double>(acc.n);
        row.recall = acc.recall[v] / n;
        row.precision = acc.precision[v] / n;
        row.f1 = acc.f1[v] / n;
      } else {
        const RougeScore sc = ScoreFromCounts(kAllVariants[v], acc.counts[v]);
        row.recall = sc.recall;
        row.precision = sc.precision;
        row.f1 = sc.f1;
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

Json RecordScoreToJson(const RecordScore& s) {
  Json j;
  j["record_id"] = s.record_id;
  j["backend_id"] = s.backend_id;
  j["template_id"] = s.template_id;
  for (Variant v : kAllVariants) {
    const RougeScore& sc = s.triple.get(v);
    j[std::string(VariantName(v))] = {
        {"recall", sc.recall}, {"precision", sc.precision}, {"f1", sc.f1}};
  }
  if (s.failure) j["failure"] = inference::FailureName(*s.failure);
  return j;
}

Json ScoreTableToJson(const ScoreTable& table) {
  Json rows = Json::array();
  for (const TableRow& r : table.rows) {
    Json j;
    j["backend_id"] = r.backend_id;
    j["scope"] = r.scope;
    j["variant"] = VariantName(r.variant);
    j["recall"] = r.recall;
    j["precision"] = r.precision;
    j["f1"] = r.f1;
    j["n"] = r.n;
    rows.push_back(std::move(j));
  }
  Json doc;
  doc["rows"] = rows;
  doc["warnings"] = table.warnings;
  return doc;
}

ScoreTable ScoreTableFromJson(const Json& document) {
  ScoreTable table;
  const Json& rows = document.is_array() ? document : document.at("rows");
  try {
    for (const Json& j : rows) {
      TableRow r;
      r.backend_id = j.at("backend_id").get<std::string>();
      r.scope = j.at("scope").get<std::string>();
      const auto v = ParseVariant(j.at("variant").get<std::string>());
      if (!v) ThrowValidation("unknown variant in score table");
      r.variant = *v;
      r.recall = j.at("recall").get<double>();
      r.precision = j.at("precision").get<double>();
      r.f1 = j.at("f1").get<double>();
      r.n = j.at("n").get<std::size_t>();
      if (r.n == 0) ThrowValidation("score table row with n = 0");
      table.rows.push_back(std::move(r));
    }
    if (document.is_object() && document.contains("warnings")) {
      table.warnings = document["warnings"].get<std::vector<std::string>>();
    }
  } catch (const Json::exception& e) {
    ThrowValidation(std::string("malformed score table: ") + e.what());
  }
  return table;
}

ScoreTable LoadScoreTable(const std::string& path) {
  return ScoreTableFromJson(ParseJsonFile(path));
}

std::string FormatNumber(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return ec == std::errc() ? std::string(buf, ptr) : std::to_string(value);
}

std::string ScoreTableToCsv(const ScoreTable& table, const Provenance* provenance) {
  std::string out;
  if (provenance != nullptr) {
    out += "# " + ProvenanceToJson(*provenance).dump() + "\n";
  }
  out += "backend_id,scope,variant,recall,precision,f1,n\n";
  for (const TableRow& r : table.rows) {
    out += csv::JoinRow({r.backend_id, r.scope, std::string(VariantName(r.variant)),
                         FormatNumber(r.recall), FormatNumber(r.precision),
                         FormatNumber(r.f1), std::to_string(r.n)});
    out += '\n';
  }
  return out;
}

}  // namespace radiogen::rouge
