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

#include <istream>
#include <ostream>
#include <set>

#include "common/text.h"
#include "expert/expert.h"

namespace radiogen::expert {

namespace {

constexpr const char* kHeader =
    "Score each impression 0-100 (higher is better on every item).\n"
    "For missed diagnosis and overdiagnosis, 100 means no such error.\n"
    "Bands: 0-19, 20-39, 40-59, 60-79, 80-100.\n";

}  // namespace

SessionResult RunScoringSession(const std::vector<ScoringItem>& items,
                                const RaterIdentity& rater,
                                const std::string& journal_path, std::istream& in,
                                std::ostream& out) {
  if (rater.rater_id.empty()) ThrowValidation("scoring session needs a rater id");
  const Journal journal = LoadJournal(journal_path);

  std::map<std::pair<std::string, std::string>, ExpertScoreCard> done;
  for (const ExpertScoreCard& c : journal.cards) {
    if (c.rater_id != rater.rater_id) continue;
    done[{c.backend_id, c.record_id}] = c;
  }

  SessionResult result;
  std::vector<const ScoringItem*> pending;
  for (const ScoringItem& item : items) {
    if (!done.contains({item.backend_id, item.record_id})) pending.push_back(&item);
  }
  result.replayed = items.size() - pending.size();

  out << kHeader;
  out << result.replayed << " of " << items.size() << " already scored; "
      << pending.size() << " remaining.\n";
  bool input_open = true;
  for (std::size_t k = 0; k < pending.size() && input_open; ++k) {
    const ScoringItem& item = *pending[k];
    out << "\n[" << (k + 1) << "/" << pending.size() << "] record " << item.record_id
        << "  backend " << item.backend_id << "\n";
    if (!item.finding.empty()) out << "Finding:\n" << item.finding << "\n";
    out << "Impression:\n" << item.impression << "\n";

    ExpertScoreCard card;
    card.rater_id = rater.rater_id;
    card.rater_level = rater.level;
    card.record_id = item.record_id;
    card.backend_id = item.backend_id;
    for (std::size_t i = 0; i < kNumMetrics && input_open; ++i) {
      while (true) {
        out << MetricQuestion(kAllMetrics[i]) << " > " << std::flush;
        std::string line;
        if (!std::getline(in, line)) {
          input_open = false;
          break;
        }
        if (const auto v = ParseScoreEntry(line)) {
          card.scores[i] = *v;
          break;
        }
        out << "Please enter an integer from 0 to 100.\n";
      }
    }
    if (!input_open) break;
    AppendCard(journal_path, card);
    done[{card.backend_id, card.record_id}] = card;
    ++result.entered;
  }

  for (const ScoringItem& item : items) {
    const auto it = done.find({item.backend_id, item.record_id});
    if (it != done.end()) result.cards.push_back(it->second);
  }
  result.remaining = items.size() - result.cards.size();
  if (result.remaining > 0) {
    out << "\nSession paused with " << result.remaining
        << " impression(s) left; rerun to resume.\n";
  }
  return result;
}

}  // namespace radiogen::expert
