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

#ifndef RADIOGEN_CORPUS_CORPUS_H_
#define RADIOGEN_CORPUS_CORPUS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "corpus/report.h"

namespace radiogen::corpus {

enum class InputFormat { kJsonl, kCsv };

std::optional<InputFormat> ParseInputFormat(std::string_view name);

struct IngestResult {
  Corpus corpus;
  std::vector<Reject> rejects;
};

// Reads one record per row. Rows that do not form a valid RadiologyReport are
// collected in `rejects`. Throws Error(kIo) if unreadable and
// Error(kValidation) on zero valid rows or a repeated record_id.
IngestResult Ingest(const std::string& path, InputFormat format);

// Reads a canonical corpus file written by WriteCorpus; any invalid row is an
// error here, since canonical files are produced by the tool itself.
Corpus LoadCorpus(const std::string& path);

// Lexicon of literal substrings (or regexes in regex mode) to delete.
struct WordSet {
  std::vector<std::string> entries;
  bool regex = false;
};

// Drops blank entries and duplicates, keeping first-seen order.
WordSet MakeWordSet(std::vector<std::string> entries, bool regex = false);

// One entry per line, UTF-8. Entries are taken verbatim minus the line
// terminator and surrounding whitespace.
WordSet LoadWordSet(const std::string& path, bool regex = false);

// Drops records whose whitespace-collapsed (finding, impression) pair already
// appeared earlier. Order of the survivors is preserved.
Corpus RemoveRepeatedValues(const Corpus& corpus);

struct TitleOptions {
  // A leading line qualifies when it starts at least this fraction of one
  // institution's findings.
  double threshold = 0.8;
  // ...and at least this many findings.
  std::size_t min_support = 2;
};

// Strips boilerplate leading lines (report headers) per institution until no
// leading line qualifies. A line is only stripped when non-blank text remains
// after it, so the record count never changes.
Corpus RemoveRepeatedTitles(const Corpus& corpus, const TitleOptions& options);

// Concatenates sheets. record_ids that occur in more than one part are
// rewritten as "p<part index>:<id>". Text fields are newline-normalized and
// trimmed. Throws Error(kValidation) when a part record lacks finding or
// impression text, or when ids still collide after prefixing.
Corpus SynthesizeMultiSheet(std::span<const Corpus> parts);

struct CleanResult {
  Corpus corpus;
  std::vector<Reject> rejects;
};

// Deletes every lexicon entry from a single text, repeating full passes until
// nothing changes ("aabb" minus "ab" -> "ab" -> "").
std::string DeleteToFixedPoint(std::string text, const WordSet& words);

// Applies DeleteToFixedPoint to finding and impression. Records whose finding
// or impression becomes blank are moved to rejects.
CleanResult DeleteMeaningless(const Corpus& corpus, const WordSet& words);

struct CleanOptions {
  TitleOptions titles;
};

// The full chain (repeated values, repeated titles, lexicon deletion) iterated
// until the corpus stops changing; a second call is the identity.
CleanResult CleanCorpus(const Corpus& corpus, const WordSet& words,
                        const CleanOptions& options);

struct Partition {
  Corpus train_source;   // institution 1
  Corpus external_test;  // institutions 2..6
};

// Throws Error(kValidation) when no institution-1 record exists.
Partition PartitionByInstitution(const Corpus& corpus);

struct TrainEvalSplit {
  Corpus train;
  Corpus eval;
};

// Number of training records for a corpus of size n: floor(ratio * n).
std::size_t TrainCount(std::size_t n, double ratio);

// Seeded Fisher-Yates over record indices (mt19937_64, unbiased bounded
// draws), first TrainCount() records to train. Throws Error(kValidation) for
// |corpus| < 2 or ratio outside (0, 1).
TrainEvalSplit SplitTrainEval(const Corpus& corpus, double ratio,
                              std::uint64_t seed);

// Shuffled index order used by SplitTrainEval.
std::vector<std::size_t> SeededPermutation(std::size_t n, std::uint64_t seed);

struct CorpusStats {
  std::size_t total = 0;
  std::array<std::size_t, kNumInstitutions> by_institution{};
  std::array<std::size_t, kNumSystems> by_system{};
  std::array<std::size_t, 2> by_modality{};  // CT, MRI
  std::array<std::size_t, 2> by_sex{};       // female, male
  std::optional<int> age_min;
  std::optional<int> age_max;

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

CorpusStats ComputeStats(const Corpus& corpus);

Json StatsToJson(const CorpusStats& stats);

}  // namespace radiogen::corpus

#endif  // RADIOGEN_CORPUS_CORPUS_H_
