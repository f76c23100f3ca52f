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

#ifndef RADIOGEN_EXPERT_EXPERT_H_
#define RADIOGEN_EXPERT_EXPERT_H_

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "common/error.h"
#include "common/jsonl.h"
#include "corpus/report.h"

namespace radiogen::expert {

// Questionnaire order; radar exports use the same column order.
enum class ClinicalMetric {
  kUnderstandability,
  kCoherence,
  kRelevance,
  kConciseness,
  kClinicalUtility,
  kMissedDiagnosis,
  kOverdiagnosis,
};
inline constexpr std::size_t kNumMetrics = 7;
inline constexpr std::array<ClinicalMetric, kNumMetrics> kAllMetrics = {
    ClinicalMetric::kUnderstandability, ClinicalMetric::kCoherence,
    ClinicalMetric::kRelevance,         ClinicalMetric::kConciseness,
    ClinicalMetric::kClinicalUtility,   ClinicalMetric::kMissedDiagnosis,
    ClinicalMetric::kOverdiagnosis};

std::string_view MetricName(ClinicalMetric m);     // snake_case key
std::string_view MetricQuestion(ClinicalMetric m);  // prompt shown to raters

enum class RaterLevel { kJunior, kIntermediate, kSenior };
std::string_view RaterLevelName(RaterLevel level);
std::optional<RaterLevel> ParseRaterLevel(std::string_view name);

inline constexpr int kMinScore = 0;
inline constexpr int kMaxScore = 100;

// Scores run 0..100 with higher always better, including the two error
// metrics (100 = no missed diagnosis / no overdiagnosis).
struct ExpertScoreCard {
  std::string rater_id;
  RaterLevel rater_level = RaterLevel::kJunior;
  std::string record_id;
  std::string backend_id;
  std::array<int, kNumMetrics> scores{};

  int score(ClinicalMetric m) const { return scores[static_cast<std::size_t>(m)]; }
  friend bool operator==(const ExpertScoreCard&, const ExpertScoreCard&) = default;
};

void ValidateCard(const ExpertScoreCard& card);
Json CardToJson(const ExpertScoreCard& card);
ExpertScoreCard CardFromJson(const Json& object);

// An integer 0..100 written in plain decimal, surrounding whitespace allowed.
std::optional<int> ParseScoreEntry(std::string_view text);

// min(5, floor(score / 20) + 1). Throws Error(kValidation) outside 0..100.
int QuintileOf(int score);
// Band of a real-valued mean, using the same 20-point edges.
int QuintileOfMean(double mean);

struct Journal {
  std::vector<ExpertScoreCard> cards;
  // Set when the final line was cut off mid-write and ignored.
  bool truncated_tail = false;
};

// Missing file reads as an empty journal. A malformed line other than an
// unterminated final one is an Error(kValidation).
Journal LoadJournal(const std::string& path);
// Appends one line and flushes before returning.
void AppendCard(const std::string& path, const ExpertScoreCard& card);

// Tab-separated with a header naming the journal keys, in any order.
std::vector<ExpertScoreCard> ImportTsv(const std::string& path);

// One impression to be rated.
struct ScoringItem {
  std::string record_id;
  std::string backend_id;
  std::string finding;
  std::string impression;
};

struct RaterIdentity {
  std::string rater_id;
  RaterLevel level = RaterLevel::kJunior;
};

struct SessionResult {
  std::vector<ExpertScoreCard> cards;  // replayed + newly entered, item order
  std::size_t replayed = 0;
  std::size_t entered = 0;
  std::size_t remaining = 0;  // items still unscored when input ran out
};

// Replays `journal_path`, then prompts on `out` for every item this rater has
// not yet scored, reading answers line by line from `in`. Invalid answers are
// re-prompted and never stored. A card is journaled only once all seven
// answers are in, so end of input leaves a valid journal.
SessionResult RunScoringSession(const std::vector<ScoringItem>& items,
                                const RaterIdentity& rater,
                                const std::string& journal_path, std::istream& in,
                                std::ostream& out);

struct MetricMeans {
  std::array<double, kNumMetrics> mean{};
  std::size_t n = 0;
};

// Mean over raters for one (backend, record).
struct RecordMeans {
  std::string backend_id;
  std::string record_id;
  MetricMeans overall;
  std::map<RaterLevel, MetricMeans> by_level;
  std::set<std::string> raters;
};

// Groups by (backend_id, record_id), sorted by that key. A rater scoring the
// same item twice keeps the last card. Throws Error(kValidation) when empty.
std::vector<RecordMeans> AverageRaters(const std::vector<ExpertScoreCard>& cards);

enum class Scope { kOg, kIhg, kOhg };
std::string_view ScopeName(Scope scope);  // OG, IHG, OHG
std::optional<Scope> ParseScope(std::string_view name);
bool InScope(Scope scope, int institution);

struct ClinicalAggregate {
  Scope scope = Scope::kOg;
  std::string backend_id;
  // nullopt: every system pooled.
  std::optional<corpus::BodySystem> system;
  std::array<double, kNumMetrics> mean{};
  std::array<int, kNumMetrics> band{};
  std::size_t n_raters = 0;
  std::size_t n_records = 0;
};

struct ScopeReport {
  std::vector<ClinicalAggregate> aggregates;
  std::vector<std::string> warnings;
};

// Filters record means by institution, then averages per (backend, system)
// and per backend over all systems. Rows sorted by backend, pooled row first,
// then systems in report order. An empty scope yields a warning and no rows.
ScopeReport ScopeAggregate(const std::vector<RecordMeans>& means, Scope scope,
                           const corpus::Corpus& metadata);

// scope,backend_id,system,<seven metrics>,n_records,n_raters
std::string RadarCsv(const ScopeReport& report, const Provenance* provenance);
Json ScopeReportToJson(const ScopeReport& report);

}  // namespace radiogen::expert

#endif  // RADIOGEN_EXPERT_EXPERT_H_
