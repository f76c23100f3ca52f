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

#include <cmath>
#include <random>

#include "common/error.h"
#include "corpus/corpus.h"

namespace radiogen::corpus {

Partition PartitionByInstitution(const Corpus& corpus) {
  Partition out;
  out.train_source.provenance = corpus.provenance + "/institution-1";
  out.external_test.provenance = corpus.provenance + "/institutions-2-6";
  for (const RadiologyReport& r : corpus.records) {
    if (r.institution == kTrainingInstitution) {
      out.train_source.records.push_back(r);
    } else {
      out.external_test.records.push_back(r);
    }
  }
  if (out.train_source.empty()) {
    ThrowValidation(
        "partition: corpus has no institution-1 records, training source "
        "would be empty");
  }
  return out;
}

std::size_t TrainCount(std::size_t n, double ratio) {
  // The epsilon absorbs representation error so 0.29 * 100 yields 29.
  return static_cast<std::size_t>(
      std::floor(ratio * static_cast<double>(n) + 1e-9));
}

namespace {

// Unbiased draw in [0, bound) by rejection; std::uniform_int_distribution is
// implementation-defined, this is not.
std::uint64_t UniformBelow(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

}  // namespace

std::vector<std::size_t> SeededPermutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = UniformBelow(rng, i);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

TrainEvalSplit SplitTrainEval(const Corpus& corpus, double ratio,
                              std::uint64_t seed) {
  if (corpus.size() < 2) {
    ThrowValidation("split: need at least 2 records, got " +
                    std::to_string(corpus.size()));
  }
  if (!(ratio > 0.0 && ratio < 1.0)) {
    ThrowValidation("split: ratio must be in (0, 1)");
  }
  const std::vector<std::size_t> order = SeededPermutation(corpus.size(), seed);
  const std::size_t n_train = TrainCount(corpus.size(), ratio);
  const std::string tag = " seed=" + std::to_string(seed);
  TrainEvalSplit out;
  out.train.provenance = corpus.provenance + "/train" + tag;
  out.eval.provenance = corpus.provenance + "/eval" + tag;
  for (std::size_t k = 0; k < order.size(); ++k) {
    (k < n_train ? out.train : out.eval).records.push_back(
        corpus.records[order[k]]);
  }
  return out;
}

}  // namespace radiogen::corpus
