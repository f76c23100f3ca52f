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

#include "inference/segmenter.h"

#include <algorithm>

#include "common/text.h"

namespace radiogen::inference {

CharClass Classify(char32_t cp) {
  if (cp < 0x80) {
    const bool alnum = (cp >= U'0' && cp <= U'9') || (cp >= U'A' && cp <= U'Z') ||
                       (cp >= U'a' && cp <= U'z');
    return alnum ? CharClass::kWord : CharClass::kSeparator;
  }
  // Han ideographs and CJK letters.
  if ((cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF) ||
      (cp >= 0xF900 && cp <= 0xFAFF) || (cp >= 0x20000 && cp <= 0x3134F) ||
      (cp >= 0x2E80 && cp <= 0x2FDF) || (cp >= 0x3040 && cp <= 0x30FF) ||
      (cp >= 0x3100 && cp <= 0x312F) || (cp >= 0xAC00 && cp <= 0xD7AF) ||
      cp == 0x3005 || cp == 0x3007) {
    // U+30FB (katakana middle dot) is punctuation.
    return cp == 0x30FB ? CharClass::kSeparator : CharClass::kCjk;
  }
  if ((cp >= 0xC0 && cp <= 0x24F && cp != 0xD7 && cp != 0xF7) ||
      (cp >= 0x370 && cp <= 0x3FF && cp != 0x37E && cp != 0x387) ||
      (cp >= 0x400 && cp <= 0x4FF) || (cp >= 0xFF10 && cp <= 0xFF19) ||
      (cp >= 0xFF21 && cp <= 0xFF3A) || (cp >= 0xFF41 && cp <= 0xFF5A)) {
    return CharClass::kWord;
  }
  return CharClass::kSeparator;
}

namespace {

// Calls `emit_run(cjk_codepoints)` for each maximal CJK run and
// `emit_word(token)` for each word run, in text order.
template <typename CjkRun, typename WordRun>
void Scan(std::string_view text, CjkRun&& emit_run, WordRun&& emit_word) {
  std::u32string cjk;
  std::string word;
  const auto flush = [&] {
    if (!cjk.empty()) {
      emit_run(cjk);
      cjk.clear();
    }
    if (!word.empty()) {
      emit_word(std::move(word));
      word.clear();
    }
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t start = pos;
    const char32_t cp = text::NextCodePoint(text, pos);
    switch (Classify(cp)) {
      case CharClass::kCjk:
        if (!word.empty()) flush();
        cjk.push_back(cp);
        break;
      case CharClass::kWord:
        if (!cjk.empty()) flush();
        word.append(text.substr(start, pos - start));
        break;
      case CharClass::kSeparator:
        flush();
        break;
    }
  }
  flush();
}

std::string Encode(std::u32string_view cps) {
  std::string out;
  for (char32_t cp : cps) text::AppendUtf8(out, cp);
  return out;
}

}  // namespace

TokenSeq CharacterSegmenter::Segment(std::string_view text) const {
  TokenSeq tokens;
  Scan(
      text,
      [&](const std::u32string& run) {
        for (char32_t cp : run) tokens.push_back(Encode(std::u32string_view(&cp, 1)));
      },
      [&](std::string word) { tokens.push_back(std::move(word)); });
  return tokens;
}

DictionarySegmenter::DictionarySegmenter(const std::vector<std::string>& words) {
  for (const std::string& w : words) {
    const std::vector<char32_t> decoded = text::DecodeUtf8(w);
    // Only pure-CJK entries participate in matching.
    const bool all_cjk = std::all_of(decoded.begin(), decoded.end(), [](char32_t cp) {
      return Classify(cp) == CharClass::kCjk;
    });
    if (decoded.size() < 2 || !all_cjk) continue;
    std::u32string cps(decoded.begin(), decoded.end());
    max_len_ = std::max(max_len_, cps.size());
    words_.insert(std::move(cps));
  }
}

TokenSeq DictionarySegmenter::Segment(std::string_view text) const {
  TokenSeq tokens;
  Scan(
      text,
      [&](const std::u32string& run) {
        std::size_t i = 0;
        while (i < run.size()) {
          std::size_t len = std::min(max_len_, run.size() - i);
          for (; len > 1; --len) {
            if (words_.contains(run.substr(i, len))) break;
          }
          tokens.push_back(Encode(std::u32string_view(run).substr(i, len)));
          i += len;
        }
      },
      [&](std::string word) { tokens.push_back(std::move(word)); });
  return tokens;
}

TokenSeq SegmentText(std::string_view text) {
  static const CharacterSegmenter segmenter;
  return segmenter.Segment(text);
}

std::string JoinTokens(const TokenSeq& tokens, std::string_view separator) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += separator;
    out += tokens[i];
  }
  return out;
}

}  // namespace radiogen::inference
