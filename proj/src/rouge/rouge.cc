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

#include "rouge/rouge.h"

namespace radiogen::rouge {

std::string_view VariantName(Variant v) {
  switch (v) {
    case Variant::kR1:
      return "r1";
    case Variant::kR2:
      return "r2";
    case Variant::kRL:
      return "rl";
  }
  return "?";
}

std::string_view VariantCaption(Variant v) {
  switch (v) {
    case Variant::kR1:
      return "R-1";
    case Variant::kR2:
      return "R-2";
    case Variant::kRL:
      return "R-L";
  }
  return "?";
}

std::optional<Variant> ParseVariant(std::string_view name) {
  for (Variant v : kAllVariants) {
    if (VariantName(v) == name || VariantCaption(v) == name) return v;
  }
  return std::nullopt;
}

double F1(double recall, double precision) {
  const double sum = recall + precision;
  return sum > 0.0 ? 2.0 * recall * precision / sum : 0.0;
}

RougeScore ScoreFromCounts(Variant variant, const MatchCounts& counts) {
  RougeScore score;
  score.variant = variant;
  if (counts.candidate_total == 0 || counts.reference_total == 0) return score;
  score.recall = static_cast<double>(counts.matches) /
                 static_cast<double>(counts.reference_total);
  score.precision = static_cast<double>(counts.matches) /
                    static_cast<double>(counts.candidate_total);
  score.f1 = F1(score.recall, score.precision);
  return score;
}

RougeScore RougeN(const TokenSeq& candidate, const TokenSeq& reference, int n) {
  return RougeN(std::span<const std::string>(candidate),
                std::span<const std::string>(reference), n);
}

RougeScore RougeL(const TokenSeq& candidate, const TokenSeq& reference) {
  return RougeL(std::span<const std::string>(candidate),
                std::span<const std::string>(reference));
}

std::size_t LcsLength(const TokenSeq& a, const TokenSeq& b) {
  return LcsLength(std::span<const std::string>(a), std::span<const std::string>(b));
}

std::map<std::vector<std::string>, std::size_t> Ngrams(const TokenSeq& tokens, int n) {
  return Ngrams(std::span<const std::string>(tokens), n);
}

const RougeScore& RougeTriple::get(Variant v) const {
  return v == Variant::kR1 ? r1 : v == Variant::kR2 ? r2 : rl;
}

const MatchCounts& RougeTriple::counts(Variant v) const {
  return v == Variant::kR1 ? c1 : v == Variant::kR2 ? c2 : cl;
}

RougeTriple ScoreTriple(const TokenSeq& candidate, const TokenSeq& reference) {
  const std::span<const std::string> c(candidate);
  const std::span<const std::string> r(reference);
  RougeTriple t;
  t.c1 = RougeNCounts(c, r, 1);
  t.c2 = RougeNCounts(c, r, 2);
  t.cl = RougeLCounts(c, r);
  t.r1 = ScoreFromCounts(Variant::kR1, t.c1);
  t.r2 = ScoreFromCounts(Variant::kR2, t.c2);
  t.rl = ScoreFromCounts(Variant::kRL, t.cl);
  return t;
}

}  // namespace radiogen::rouge
