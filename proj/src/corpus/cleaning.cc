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

#include <map>
#include <regex>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "common/error.h"
#include "common/text.h"
#include "corpus/corpus.h"

namespace radiogen::corpus {

WordSet MakeWordSet(std::vector<std::string> entries, bool regex) {
  WordSet words;
  words.regex = regex;
  std::unordered_set<std::string> seen;
  for (std::string& entry : entries) {
    if (text::IsBlank(entry)) continue;
    if (!seen.insert(entry).second) continue;
    if (regex) {
      try {
        std::regex probe(entry);
      } catch (const std::regex_error& e) {
        ThrowValidation("invalid lexicon regex '" + entry + "': " + e.what());
      }
    }
    words.entries.push_back(std::move(entry));
  }
  return words;
}

WordSet LoadWordSet(const std::string& path, bool regex) {
  std::vector<std::string> entries;
  for (const std::string& line :
       text::SplitLines(text::NormalizeNewlines(ReadFile(path)))) {
    entries.push_back(text::Trim(line));
  }
  return MakeWordSet(std::move(entries), regex);
}

Corpus RemoveRepeatedValues(const Corpus& corpus) {
  Corpus out;
  out.provenance = corpus.provenance;
  std::set<std::pair<std::string, std::string>> seen;
  for (const RadiologyReport& r : corpus.records) {
    auto key = std::make_pair(text::CollapseWhitespace(r.finding),
                              text::CollapseWhitespace(r.impression));
    if (seen.insert(std::move(key)).second) out.records.push_back(r);
  }
  return out;
}

namespace {

struct LeadingLine {
  std::string line;       // trimmed first non-blank line
  std::string remainder;  // trimmed text after it; empty if none
};

LeadingLine SplitLeadingLine(const std::string& finding) {
  const std::string body = text::Trim(text::NormalizeNewlines(finding));
  const std::size_t nl = body.find('\n');
  if (nl == std::string::npos) return {body, {}};
  return {text::Trim(body.substr(0, nl)), text::Trim(body.substr(nl + 1))};
}

}  // namespace

Corpus RemoveRepeatedTitles(const Corpus& corpus, const TitleOptions& options) {
  if (!(options.threshold > 0.0 && options.threshold <= 1.0)) {
    ThrowValidation("title threshold must be in (0, 1]");
  }
  Corpus out = corpus;
  std::map<int, std::vector<std::size_t>> by_institution;
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    by_institution[out.records[i].institution].push_back(i);
  }

  for (const auto& [institution, members] : by_institution) {
    const double needed =
        options.threshold * static_cast<double>(members.size()) - 1e-9;
    while (true) {
      std::unordered_map<std::string, std::size_t> counts;
      for (std::size_t i : members) {
        ++counts[SplitLeadingLine(out.records[i].finding).line];
      }
      std::unordered_set<std::string> titles;
      for (const auto& [line, count] : counts) {
        if (!line.empty() && count >= options.min_support &&
            static_cast<double>(count) >= needed) {
          titles.insert(line);
        }
      }
      bool stripped = false;
      for (std::size_t i : members) {
        LeadingLine parts = SplitLeadingLine(out.records[i].finding);
        if (titles.contains(parts.line) && !parts.remainder.empty()) {
          out.records[i].finding = std::move(parts.remainder);
          stripped = true;
        }
      }
      if (!stripped) break;
    }
  }
  return out;
}

Corpus SynthesizeMultiSheet(std::span<const Corpus> parts) {
  std::map<std::string, std::set<std::size_t>> owners;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    for (const RadiologyReport& r : parts[p].records) {
      owners[text::Trim(r.record_id)].insert(p);
    }
  }

  Corpus out;
  std::string provenance = "synthesized(";
  std::set<std::string> final_ids;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    provenance += (p > 0 ? "," : "") + parts[p].provenance;
    for (const RadiologyReport& source : parts[p].records) {
      RadiologyReport r = source;
      r.record_id = text::Trim(r.record_id);
      r.finding = text::NormalizeField(r.finding);
      r.impression = text::NormalizeField(r.impression);
      if (r.finding.empty() || r.impression.empty()) {
        ThrowValidation("sheet " + std::to_string(p) + " record '" +
                        r.record_id + "' lacks " +
                        (r.finding.empty() ? "finding" : "impression") +
                        " text; schemas cannot be reconciled");
      }
      if (owners[r.record_id].size() > 1) {
        r.record_id = "p" + std::to_string(p) + ":" + r.record_id;
      }
      if (!final_ids.insert(r.record_id).second) {
        ThrowValidation("record_id '" + r.record_id +
                        "' is not unique after collision resolution");
      }
      out.records.push_back(std::move(r));
    }
  }
  out.provenance = provenance + ")";
  return out;
}

std::string DeleteToFixedPoint(std::string text, const WordSet& words) {
  if (words.regex) {
    std::vector<std::regex> patterns;
    patterns.reserve(words.entries.size());
    for (const std::string& e : words.entries) patterns.emplace_back(e);
    while (true) {
      bool changed = false;
      for (const std::regex& re : patterns) {
        std::string next = std::regex_replace(text, re, "");
        if (next != text) {
          text = std::move(next);
          changed = true;
        }
      }
      if (!changed) return text;
    }
  }
  while (true) {
    std::size_t replaced = 0;
    for (const std::string& entry : words.entries) {
      replaced += text::ReplaceAll(text, entry, "");
    }
    if (replaced == 0) return text;
  }
}

CleanResult DeleteMeaningless(const Corpus& corpus, const WordSet& words) {
  CleanResult result;
  result.corpus.provenance = corpus.provenance;
  for (const RadiologyReport& source : corpus.records) {
    RadiologyReport r = source;
    if (!words.entries.empty()) {
      r.finding = text::Trim(DeleteToFixedPoint(r.finding, words));
      r.impression = text::Trim(DeleteToFixedPoint(r.impression, words));
    }
    const bool blank_finding = text::IsBlank(r.finding);
    if (blank_finding || text::IsBlank(r.impression)) {
      Reject reject;
      reject.source = corpus.provenance;
      reject.record_id = r.record_id;
      reject.reason = blank_finding
                          ? "finding empty after meaningless-word deletion"
                          : "impression empty after meaningless-word deletion";
      reject.raw = ReportToJson(source);
      result.rejects.push_back(std::move(reject));
      continue;
    }
    result.corpus.records.push_back(std::move(r));
  }
  return result;
}

CleanResult CleanCorpus(const Corpus& corpus, const WordSet& words,
                        const CleanOptions& options) {
  CleanResult result;
  result.corpus = corpus;
  // Every step only removes records or text, so this terminates.
  while (true) {
    Corpus deduped = RemoveRepeatedValues(result.corpus);
    Corpus untitled = RemoveRepeatedTitles(deduped, options.titles);
    CleanResult pass = DeleteMeaningless(untitled, words);
    for (Reject& r : pass.rejects) result.rejects.push_back(std::move(r));
    const bool unchanged = pass.corpus.records == result.corpus.records;
    result.corpus = std::move(pass.corpus);
    if (unchanged) break;
  }
  return result;
}

}  // namespace radiogen::corpus
