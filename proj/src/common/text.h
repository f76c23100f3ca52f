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

#ifndef RADIOGEN_COMMON_TEXT_H_
#define RADIOGEN_COMMON_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace radiogen::text {

inline constexpr char32_t kReplacementChar = 0xFFFD;

// Decodes the code point starting at `pos` and advances `pos` past it.
// Malformed sequences decode as U+FFFD and consume a single byte, so the
// function is total over arbitrary bytes.
char32_t NextCodePoint(std::string_view s, std::size_t& pos);

void AppendUtf8(std::string& out, char32_t cp);

std::vector<char32_t> DecodeUtf8(std::string_view s);

// ASCII whitespace plus the Unicode space separators that show up in CJK
// clinical text (U+00A0, U+3000, ...).
bool IsSpace(char32_t cp);

std::string Trim(std::string_view s);

// CRLF and lone CR become LF.
std::string NormalizeNewlines(std::string_view s);

// Newline-normalized, each line right-trimmed, outer whitespace trimmed.
std::string NormalizeField(std::string_view s);

// Every whitespace run (newlines included) collapsed to one ASCII space, ends
// trimmed. Used for equality keys, never for stored text.
std::string CollapseWhitespace(std::string_view s);

bool IsBlank(std::string_view s);

std::vector<std::string> SplitLines(std::string_view s);

std::string ToLowerAscii(std::string_view s);

// Non-overlapping left-to-right occurrences.
std::size_t CountOccurrences(std::string_view haystack, std::string_view needle);

// Single left-to-right pass; returns the number of replacements made.
std::size_t ReplaceAll(std::string& s, std::string_view from,
                       std::string_view to);

// Fixed-point decimal rendering ("%.Nf") that never prints "-0.0000".
std::string FormatFixed(double value, int decimals);

}  // namespace radiogen::text

#endif  // RADIOGEN_COMMON_TEXT_H_
