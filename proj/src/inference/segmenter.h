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

#ifndef RADIOGEN_INFERENCE_SEGMENTER_H_
#define RADIOGEN_INFERENCE_SEGMENTER_H_

#include <memory>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace radiogen::inference {

// Ordered, non-empty UTF-8 tokens.
using TokenSeq = std::vector<std::string>;

enum class CharClass {
  kCjk,        // Han, kana, hangul: one token per code point
  kWord,       // Latin/Greek/Cyrillic letters and digits: grouped into runs
  kSeparator,  // whitespace, punctuation, symbols, malformed bytes: dropped
};

CharClass Classify(char32_t cp);

class Segmenter {
 public:
  virtual ~Segmenter() = default;
  virtual TokenSeq Segment(std::string_view text) const = 0;
};

// Dictionary-free: "CT平扫" -> ["CT", "平", "扫"].
class CharacterSegmenter final : public Segmenter {
 public:
  TokenSeq Segment(std::string_view text) const override;
};

// Forward maximum matching over CJK runs against a word list; CJK characters
// not covered by any word fall back to single-character tokens. Latin runs
// and separators behave as in CharacterSegmenter.
class DictionarySegmenter final : public Segmenter {
 public:
  explicit DictionarySegmenter(const std::vector<std::string>& words);

  TokenSeq Segment(std::string_view text) const override;

 private:
  std::unordered_set<std::u32string> words_;
  std::size_t max_len_ = 1;
};

// CharacterSegmenter over `text`.
TokenSeq SegmentText(std::string_view text);

std::string JoinTokens(const TokenSeq& tokens, std::string_view separator = " ");

}  // namespace radiogen::inference

#endif  // RADIOGEN_INFERENCE_SEGMENTER_H_
