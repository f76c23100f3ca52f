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

#include "expert/expert.h"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <tuple>
#include <unordered_map>

#include "common/csv.h"
#include "common/text.h"

namespace radiogen::expert {

std::string_view MetricName(ClinicalMetric m) {
  switch (m) {
    case ClinicalMetric::kUnderstandability:
      return "understandability";
    case ClinicalMetric::kCoherence:
      return "coherence";
    case ClinicalMetric::kRelevance:
      return "relevance";
    case ClinicalMetric::kConciseness:
      return "conciseness";
    case ClinicalMetric::kClinicalUtility:
      return "clinical_utility";
    case ClinicalMetric::kMissedDiagnosis:
      return "missed_diagnosis";
    case ClinicalMetric::kOverdiagnosis:
      return "overdiagnosis";
  }
  return "?";
}

std::string_view MetricQuestion(ClinicalMetric m) {
  switch (m) {
    case ClinicalMetric::kUnderstandability:
      return "Understandability: is the impression easy to read and interpret?";
    case ClinicalMetric::kCoherence:
      return "Coherence: does it follow logically from the finding?";
    case ClinicalMetric::kRelevance:
      return "Relevance: does it address the clinically relevant observations?";
    case ClinicalMetric::kConciseness:
      return "Conciseness: is it free of redundant content?";
    case ClinicalMetric::kClinicalUtility:
      return "Clinical utility: would it support a clinical decision?";
    case ClinicalMetric::kMissedDiagnosis:
      return "Missed diagnosis (100 = nothing missed, 0 = key diagnoses missed)";
    case ClinicalMetric::kOverdiagnosis:
      return "Overdiagnosis (100 = nothing unsupported, 0 = many unsupported diagnoses)";
  }
  return "?";
}

std::string_view RaterLevelName(RaterLevel level) {
  switch (level) {
    case RaterLevel::kJunior:
      return "junior";
    case RaterLevel::kIntermediate:
      return "intermediate";
    case RaterLevel::kSenior:
      return "senior";
  }
  return "?";
}

std::optional<RaterLevel> ParseRaterLevel(std::string_view name) {
  const std::string lower = text::ToLowerAscii(text::Trim(name));
  if (lower == "junior") return RaterLevel::kJunior;
  if (lower == "intermediate") return RaterLevel::kIntermediate;
  if (lower == "senior") return RaterLevel::kSenior;
  return std::nullopt;
}

void ValidateCard(const ExpertScoreCard& card) {
  if (card.rater_id.empty()) ThrowValidation("score card without rater_id");
  if (card.record_id.empty()) ThrowValidation("score card without record_id");
  if (card.backend_id.empty()) ThrowValidation("score card without backend_id");
  for (ClinicalMetric m : kAllMetrics) {
    const int s = card.score(m);
    if (s < kMinScore || s > kMaxScore) {
      ThrowValidation("score card " + card.record_id + ": " + std::string(MetricName(m)) +
                      " = " + std::to_string(s) + " is outside 0..100");
    }
  }
}

Json CardToJson(const ExpertScoreCard& card) {
  Json j;
  j["rater_id"] = card.rater_id;
  j["rater_level"] = RaterLevelName(card.rater_level);
  j["record_id"] = card.record_id;
  j["backend_id"] = card.backend_id;
  for (ClinicalMetric m : kAllMetrics) j[std::string(MetricName(m))] = card.score(m);
  return j;
}

ExpertScoreCard CardFromJson(const Json& j) {
  if (!j.is_object()) ThrowValidation("score card must be a JSON object");
  ExpertScoreCard card;
  try {
    card.rater_id = j.at("rater_id").get<std::string>();
    const auto level = ParseRaterLevel(j.at("rater_level").get<std::string>());
    if (!level) ThrowValidation("score card: unknown rater_level");
    card.rater_level = *level;
    card.record_id = j.at("record_id").is_string() ? j["record_id"].get<std::string>()
                                                    : j["record_id"].dump();
    card.backend_id = j.at("backend_id").get<std::string>();
    for (std::size_t i = 0; i < kNumMetrics; ++i) {
      const Json& v = j.at(std::string(MetricName(kAllMetrics[i])));
      if (!v.is_number_integer()) {
        ThrowValidation("score card: " + std::string(MetricName(kAllMetrics[i])) +
                        " must be an integer");
      }
      card.scores[i] = v.get<int>();
    }
  } catch (const Json::exception& e) {
    ThrowValidation(std::string("score card: ") + e.what());
  }
  ValidateCard(card);
  return card;
}

std::optional<int> ParseScoreEntry(std::string_view raw) {
  const std::string t = text::Trim(raw);
  if (t.empty() || t.size() > 3) return std::nullopt;
  int value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
  if (value < kMinScore || value > kMaxScore) return std::nullopt;
  return value;
}

int QuintileOf(int score) {
  if (score < kMinScore || score > kMaxScore) {
    ThrowValidation("score " + std::to_string(score) + " is outside 0..100");
  }
  return std::min(5, score / 20 + 1);
}

int QuintileOfMean(double mean) {
  if (!(mean >= kMinScore && mean <= kMaxScore)) {
    ThrowValidation("mean score outside 0..100");
  }
  return std::min(5, static_cast<int>(std::floor(mean / 20.0)) + 1);
}

Journal LoadJournal(const std::string& path) {
  Journal journal;
  if (!std::filesystem::exists(path)) return journal;
  const std::string content = ReadFile(path);
  std::size_t pos = 0;
  std::size_t line_number = 0;
  while (pos < content.size()) {
    const std::size_t nl = content.find('\n', pos);
    const bool terminated = nl != std::string::npos;
    const std::string line =
        content.substr(pos, terminated ? nl - pos : std::string::npos);
    pos = terminated ? nl + 1 : content.size();
    ++line_number;
    if (text::IsBlank(line)) continue;
    Json value;
    try {
      value = Json::parse(line);
    } catch (const Json::exception&) {
      if (!terminated) {
        journal.truncated_tail = true;
        break;
      }
      ThrowValidation("journal " + path + " line " + std::to_string(line_number) +
                      ": invalid JSON");
    }
    if (value.is_object() && value.contains(kProvenanceKey)) continue;
    try {
      journal.cards.push_back(CardFromJson(value));
    } catch (const Error& e) {
      ThrowValidation("journal " + path + " line " + std::to_string(line_number) + ": " +
                      e.what());
    }
  }
  return journal;
}

void AppendCard(const std::string& path, const ExpertScoreCard& card) {
  ValidateCard(card);
  // Start a fresh line if a previous writer died mid-line.
  bool needs_newline = false;
  if (std::filesystem::exists(path) && std::filesystem::file_size(path) > 0) {
    std::ifstream in(path, std::ios::binary);
    in.seekg(-1, std::ios::end);
    char last = '\n';
    in.get(last);
    needs_newline = last != '\n';
  }
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) ThrowIo("cannot open journal for append: " + path);
  if (needs_newline) out << '\n';
  out << CardToJson(card).dump() << '\n';
  out.flush();
  if (!out) ThrowIo("write failed on journal: " + path);
}

std::vector<ExpertScoreCard> ImportTsv(const std::string& path) {
  const std::vector<std::string> lines = text::SplitLines(ReadFile(path));
  std::vector<ExpertScoreCard> cards;
  std::vector<std::string> header;
  std::size_t line_number = 0;
  for (const std::string& raw : lines) {
    ++line_number;
    if (text::IsBlank(raw) || raw.front() == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = raw.find('\t', start);
      fields.push_back(text::Trim(std::string_view(raw).substr(
          start, tab == std::string::npos ? std::string::npos : tab - start)));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (header.empty()) {
      header = std::move(fields);
      continue;
    }
    if (fields.size() != header.size()) {
      ThrowValidation(path + " line " + std::to_string(line_number) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    Json j;
    for (std::size_t i = 0; i < header.size(); ++i) {
      bool is_metric = false;
      for (ClinicalMetric m : kAllMetrics) is_metric |= header[i] == MetricName(m);
      if (is_metric) {
        const auto v = ParseScoreEntry(fields[i]);
        if (!v) {
          ThrowValidation(path + " line " + std::to_string(line_number) + ": " +
                          header[i] + " '" + fields[i] + "' is not an integer in 0..100");
        }
        j[header[i]] = *v;
      } else {
        j[header[i]] = fields[i];
      }
    }
    try {
      cards.push_back(CardFromJson(j));
    } catch (const Error& e) {
      ThrowValidation(path + " line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return cards;
}

namespace {

void AddCard(MetricMeans& m, const ExpertScoreCard& card) {
  for (std::size_t i = 0; i < kNumMetrics; ++i) m.mean[i] += card.scores[i];
  ++m.n;
}

void Finish(MetricMeans& m) {
  if (m.n == 0) return;
  for (double& v : m.mean) v /= static_cast<double>(m.n);
}

}  // namespace

std::vector<RecordMeans> AverageRaters(const std::vector<ExpertScoreCard>& cards) {
  if (cards.empty()) ThrowValidation("no score cards to average");
  std::map<std::tuple<std::string, std::string, std::string>, const ExpertScoreCard*> latest;
  for (const ExpertScoreCard& c : cards) latest[{c.backend_id, c.record_id, c.rater_id}] = &c;

  std::map<std::pair<std::string, std::string>, RecordMeans> groups;
  for (const auto& [key, card] : latest) {
    RecordMeans& g = groups[{card->backend_id, card->record_id}];
    g.backend_id = card->backend_id;
    g.record_id = card->record_id;
    AddCard(g.overall, *card);
    AddCard(g.by_level[card->rater_level], *card);
    g.raters.insert(card->rater_id);
  }
  std::vector<RecordMeans> out;
  out.reserve(groups.size());
  for (auto& [key, g] : groups) {
    Finish(g.overall);
    for (auto& [level, m] : g.by_level) Finish(m);
    out.push_back(std::move(g));
  }
  return out;
}

std::string_view ScopeName(Scope scope) {
  switch (scope) {
    case Scope::kOg:
      return "OG";
    case Scope::kIhg:
      return "IHG";
    case Scope::kOhg:
      return "OHG";
  }
  return "?";
}

std::optional<Scope> ParseScope(std::string_view name) {
  const std::string lower = text::ToLowerAscii(name);
  if (lower == "og") return Scope::kOg;
  if (lower == "ihg") return Scope::kIhg;
  if (lower == "ohg") return Scope::kOhg;
  return std::nullopt;
}

bool InScope(Scope scope, int institution) {
  switch (scope) {
    case Scope::kOg:
      return true;
    case Scope::kIhg:
      return institution == corpus::kTrainingInstitution;
    case Scope::kOhg:
      return institution != corpus::kTrainingInstitution;
  }
  return false;
}

ScopeReport ScopeAggregate(const std::vector<RecordMeans>& means, Scope scope,
                           const corpus::Corpus& metadata) {
  std::unordered_map<std::string, const corpus::RadiologyReport*> by_id;
  for (const corpus::RadiologyReport& r : metadata.records) by_id[r.record_id] = &r;

  struct Acc {
    std::array<double, kNumMetrics> sum{};
    std::size_t n = 0;
    std::set<std::string> raters;
  };
  // Key: backend, system index (-1 = pooled).
  std::map<std::pair<std::string, int>, Acc> groups;
  ScopeReport report;
  for (const RecordMeans& m : means) {
    const auto it = by_id.find(m.record_id);
    if (it == by_id.end()) {
      ThrowValidation("scored record '" + m.record_id + "' has no corpus metadata");
    }
    if (!InScope(scope, it->second->institution)) continue;
    for (int sys : {-1, static_cast<int>(it->second->system)}) {
      Acc& acc = groups[{m.backend_id, sys}];
      for (std::size_t i = 0; i < kNumMetrics; ++i) acc.sum[i] += m.overall.mean[i];
      ++acc.n;
      acc.raters.insert(m.raters.begin(), m.raters.end());
    }
  }
  if (groups.empty()) {
    report.warnings.push_back(std::string(ScopeName(scope)) +
                              " has no scored records; scope suppressed");
    return report;
  }
  for (const auto& [key, acc] : groups) {
    ClinicalAggregate a;
    a.scope = scope;
    a.backend_id = key.first;
    if (key.second >= 0) a.system = static_cast<corpus::BodySystem>(key.second);
    for (std::size_t i = 0; i < kNumMetrics; ++i) {
      a.mean[i] = acc.sum[i] / static_cast<double>(acc.n);
      a.band[i] = QuintileOfMean(a.mean[i]);
    }
    a.n_records = acc.n;
    a.n_raters = acc.raters.size();
    report.aggregates.push_back(std::move(a));
  }
  return report;
}

std::string RadarCsv(const ScopeReport& report, const Provenance* provenance) {
  std::string out;
  if (provenance != nullptr) out += "# " + ProvenanceToJson(*provenance).dump() + "\n";
  std::vector<std::string> header = {"scope", "backend_id", "system"};
  for (ClinicalMetric m : kAllMetrics) header.emplace_back(MetricName(m));
  header.emplace_back("n_records");
  header.emplace_back("n_raters");
  out += csv::JoinRow(header) + "\n";
  for (const ClinicalAggregate& a : report.aggregates) {
    std::vector<std::string> row = {
        std::string(ScopeName(a.scope)), a.backend_id,
        a.system ? std::string(corpus::SystemName(*a.system)) : "all"};
    for (double v : a.mean) row.push_back(text::FormatFixed(v, 4));
    row.push_back(std::to_string(a.n_records));
    row.push_back(std::to_string(a.n_raters));
    out += csv::JoinRow(row) + "\n";
  }
  return out;
}

Json ScopeReportToJson(const ScopeReport& report) {
  Json rows = Json::array();
  for (const ClinicalAggregate& a : report.aggregates) {
    Json j;
    j["scope"] = ScopeName(a.scope);
    j["backend_id"] = a.backend_id;
    j["system"] = a.system ? std::string(corpus::SystemName(*a.system)) : "all";
    Json means = Json::object();
    Json bands = Json::object();
    for (std::size_t i = 0; i < kNumMetrics; ++i) {
      means[std::string(MetricName(kAllMetrics[i]))] = a.mean[i];
      bands[std::string(MetricName(kAllMetrics[i]))] = a.band[i];
    }
    j["mean"] = means;
    j["band"] = bands;
    j["n_records"] = a.n_records;
    j["n_raters"] = a.n_raters;
    rows.push_back(std::move(j));
  }
  return Json{{"aggregates", rows}, {"warnings", report.warnings}};
}

}  // namespace radiogen::expert
