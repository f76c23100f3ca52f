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

#ifndef RADIOGEN_ROUGE_ROUGE_H_
#define RADIOGEN_ROUGE_ROUGE_H_

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "common/error.h"
#include "inference/segmenter.h"

namespace radiogen::rouge {

enum class Variant { kR1, kR2, kRL };
inline constexpr Variant kAllVariants[] = {Variant::kR1, Variant::kR2, Variant::kRL};

std::string_view VariantName(Variant v);          // r1, r2, rl
std::string_view VariantCaption(Variant v);       // R-1, R-2, R-L
std::optional<Variant> ParseVariant(std::string_view name);

struct RougeScore {
  Variant variant = Variant::kR1;
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};

// Raw counts behind a score. For ROUGE-N: clipped matches and total n-gram
// counts; for ROUGE-L: LCS length and sequence lengths.
struct MatchCounts {
  std::size_t matches = 0;
  std::size_t candidate_total = 0;
  std::size_t reference_total = 0;
};

// 2RP / (R + P), or 0 when R + P == 0.
double F1(double recall, double precision);

// recall = matches / reference_total, precision = matches / candidate_total.
// Either total being zero yields an all-zero score.
RougeScore ScoreFromCounts(Variant variant, const MatchCounts& counts);

namespace internal {

// Scratch storage that stays on the stack for short sequences.
template <typename T, std::size_t N>
class Scratch {
 public:
  explicit Scratch(std::size_t size) {
    if (size > N) heap_.resize(size);
    data_ = size > N ? heap_.data() : inline_.data();
  }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
  T* data() { return data_; }
  T& operator[](std::size_t i) { return data_[i]; }

 private:
  std::array<T, N> inline_;
  std::vector<T> heap_;
  T* data_ = nullptr;
};

inline constexpr std::size_t kInlineTokens = 64;

// Element loops rather than std::equal / std::lexicographical_compare, which
// become memcmp calls for byte-sized tokens; n-grams here are 1 or 2 long.
template <typename T>
bool SameGram(const T* a, const T* b, std::size_t n) {
  bool same = true;
  for (std::size_t k = 0; k < n; ++k) same &= a[k] == b[k];
  return same;
}

template <typename T>
bool GramLess(const T* a, const T* b, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k] < b[k]) return true;
    if (b[k] < a[k]) return false;
  }
  return false;
}

// Fills `out` with the start offsets of every n-gram of `seq`, sorted by
// n-gram content; returns how many there are.
template <typename T>
std::size_t SortNgramStarts(const T* seq, std::size_t size, std::size_t n,
                            std::uint32_t* out) {
  if (size < n) return 0;
  const std::size_t count = size - n + 1;
  for (std::size_t i = 0; i < count; ++i) out[i] = static_cast<std::uint32_t>(i);
  if (n == 1) {
    std::sort(out, out + count,
              [seq](std::uint32_t a, std::uint32_t b) { return seq[a] < seq[b]; });
  } else {
    std::sort(out, out + count, [seq, n](std::uint32_t a, std::uint32_t b) {
      return GramLess(seq + a, seq + b, n);
    });
  }
  return count;
}

inline void RequireOrder(int n) {
  if (n < 1) ThrowValidation("n-gram order must be >= 1, got " + std::to_string(n));
}

}  // namespace internal

// All contiguous n-grams with multiplicity.
template <typename T>
std::map<std::vector<T>, std::size_t> Ngrams(std::span<const T> tokens, int n) {
  internal::RequireOrder(n);
  std::map<std::vector<T>, std::size_t> grams;
  const std::size_t order = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
    ++grams[std::vector<T>(tokens.begin() + i, tokens.begin() + i + order)];
  }
  return grams;
}

namespace internal {

// Short inputs: for the first occurrence of each candidate n-gram, count its
// occurrences on both sides directly. Quadratic, but no sorting. `N` fixes
// the order at compile time (0 means use `n`).
template <std::size_t N, typename T>
std::size_t ClippedMatchesDirect(const T* cand, std::size_t nc, const T* ref,
                                 std::size_t nr, std::size_t n) {
  const std::size_t order = N == 0 ? n : N;
  std::size_t matches = 0;
  for (std::size_t i = 0; i < nc; ++i) {
    const T* g = cand + i;
    bool seen = false;
    for (std::size_t k = 0; k < i; ++k) seen |= SameGram(g, cand + k, order);
    if (seen) continue;
    std::size_t in_cand = 1;
    for (std::size_t k = i + 1; k < nc; ++k) in_cand += SameGram(g, cand + k, order);
    std::size_t in_ref = 0;
    for (std::size_t j = 0; j < nr; ++j) in_ref += SameGram(g, ref + j, order);
    matches += std::min(in_cand, in_ref);
  }
  return matches;
}

inline constexpr std::size_t kDirectMatchLimit = 32;

}  // namespace internal

// Clipped n-gram matching: each distinct n-gram contributes
// min(candidate multiplicity, reference multiplicity). Long inputs sort both
// n-gram lists and merge them.
template <typename T>
MatchCounts RougeNCounts(std::span<const T> candidate, std::span<const T> reference,
                         int n) {
  internal::RequireOrder(n);
  const std::size_t order = static_cast<std::size_t>(n);
  const T* cand = candidate.data();
  const T* ref = reference.data();
  MatchCounts counts;
  counts.candidate_total = candidate.size() >= order ? candidate.size() - order + 1 : 0;
  counts.reference_total = reference.size() >= order ? reference.size() - order + 1 : 0;
  if (counts.candidate_total == 0 || counts.reference_total == 0) return counts;
  if (counts.candidate_total <= internal::kDirectMatchLimit &&
      counts.reference_total <= internal::kDirectMatchLimit) {
    const std::size_t nc = counts.candidate_total;
    const std::size_t nr = counts.reference_total;
    switch (order) {
      case 1:
        counts.matches = internal::ClippedMatchesDirect<1>(cand, nc, ref, nr, order);
        break;
      case 2:
        counts.matches = internal::ClippedMatchesDirect<2>(cand, nc, ref, nr, order);
        break;
      default:
        counts.matches = internal::ClippedMatchesDirect<0>(cand, nc, ref, nr, order);
        break;
    }
    return counts;
  }

  internal::Scratch<std::uint32_t, internal::kInlineTokens> cand_starts(candidate.size());
  internal::Scratch<std::uint32_t, internal::kInlineTokens> ref_starts(reference.size());
  const std::size_t nc =
      internal::SortNgramStarts(cand, candidate.size(), order, cand_starts.data());
  const std::size_t nr =
      internal::SortNgramStarts(ref, reference.size(), order, ref_starts.data());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < nc && j < nr) {
    const T* c = cand + cand_starts[i];
    const T* r = ref + ref_starts[j];
    if (internal::GramLess(c, r, order)) {
      ++i;
      continue;
    }
    if (internal::GramLess(r, c, order)) {
      ++j;
      continue;
    }
    std::size_t run_c = 0;
    while (i < nc && internal::SameGram(c, cand + cand_starts[i], order)) {
      ++run_c;
      ++i;
    }
    std::size_t run_r = 0;
    while (j < nr && internal::SameGram(r, ref + ref_starts[j], order)) {
      ++run_r;
      ++j;
    }
    counts.matches += std::min(run_c, run_r);
  }
  return counts;
}

// Token-level longest common subsequence, O(|a||b|) time, O(|b|) space.
template <typename T>
std::size_t LcsLength(std::span<const T> a, std::span<const T> b) {
  if (a.empty() || b.empty()) return 0;
  internal::Scratch<std::uint32_t, internal::kInlineTokens + 1> row(b.size() + 1);
  std::fill(row.data(), row.data() + b.size() + 1, 0u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::uint32_t diagonal = 0;  // row[j] of the previous i
    for (std::size_t j = 0; j < b.size(); ++j) {
      const std::uint32_t above = row[j + 1];
      const std::uint32_t hit = diagonal + static_cast<std::uint32_t>(a[i] == b[j]);
      row[j + 1] = std::max(std::max(above, row[j]), hit);
      diagonal = above;
    }
  }
  return row[b.size()];
}

template <typename T>
MatchCounts RougeLCounts(std::span<const T> candidate, std::span<const T> reference) {
  MatchCounts counts;
  counts.matches = LcsLength(reference, candidate);
  counts.candidate_total = candidate.size();
  counts.reference_total = reference.size();
  return counts;
}

// `variant` is labelled kR1 for n == 1 and kR2 for any higher order; only
// orders 1 and 2 are ever reported.
template <typename T>
RougeScore RougeN(std::span<const T> candidate, std::span<const T> reference, int n) {
  const MatchCounts counts = RougeNCounts(candidate, reference, n);
  return ScoreFromCounts(n == 1 ? Variant::kR1 : Variant::kR2, counts);
}

template <typename T>
RougeScore RougeL(std::span<const T> candidate, std::span<const T> reference) {
  return ScoreFromCounts(Variant::kRL, RougeLCounts(candidate, reference));
}

using inference::TokenSeq;

// String-token conveniences over the templates above.
RougeScore RougeN(const TokenSeq& candidate, const TokenSeq& reference, int n);
RougeScore RougeL(const TokenSeq& candidate, const TokenSeq& reference);
std::size_t LcsLength(const TokenSeq& a, const TokenSeq& b);
std::map<std::vector<std::string>, std::size_t> Ngrams(const TokenSeq& tokens, int n);

// R-1, R-2 and R-L for one candidate/reference pair.
struct RougeTriple {
  RougeScore r1{Variant::kR1};
  RougeScore r2{Variant::kR2};
  RougeScore rl{Variant::kRL};
  MatchCounts c1;
  MatchCounts c2;
  MatchCounts cl;

  const RougeScore& get(Variant v) const;
  const MatchCounts& counts(Variant v) const;
};

RougeTriple ScoreTriple(const TokenSeq& candidate, const TokenSeq& reference);

}  // namespace radiogen::rouge

#endif  // RADIOGEN_ROUGE_ROUGE_H_
