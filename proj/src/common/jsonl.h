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

#ifndef RADIOGEN_COMMON_JSONL_H_
#define RADIOGEN_COMMON_JSONL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace radiogen {

// Insertion-ordered so emitted records keep their documented key order.
using Json = nlohmann::ordered_json;

inline constexpr const char* kProvenanceKey = "_provenance";

// Header stamped on every file the tool writes. Contains no timestamps so two
// runs over equal inputs produce byte-identical files.
struct Provenance {
  std::string config_hash;
  std::optional<std::uint64_t> seed;
  std::string stage;
  std::string label;
};

Json ProvenanceToJson(const Provenance& provenance);

// One physical line of a JSONL file. `value` is empty when the line failed to
// parse; `error` then carries the parser message.
struct JsonlLine {
  std::size_t line_number = 0;
  std::optional<Json> value;
  std::string error;
  std::string raw;
};

struct JsonlDocument {
  std::optional<Json> provenance;
  std::vector<JsonlLine> lines;
};

// Blank lines are skipped; a leading {"_provenance": ...} object is lifted
// into `provenance`. Throws Error(kIo) when the file cannot be opened.
JsonlDocument ReadJsonl(const std::string& path);

std::string ReadFile(const std::string& path);

// Writes `content` to `path` (truncating), creating parent directories.
// Throws Error(kIo) on failure.
void WriteFile(const std::string& path, const std::string& content);

std::string ProvenanceLine(const Provenance& provenance);

// Header line followed by one compact JSON object per row.
std::string RenderJsonl(const std::vector<Json>& rows,
                        const Provenance* provenance);

void WriteJsonl(const std::string& path, const std::vector<Json>& rows,
                const Provenance* provenance);

Json ParseJsonFile(const std::string& path);

// `document` with a leading "_provenance" key, pretty-printed.
std::string RenderJsonDocument(const Json& document, const Provenance* provenance);

}  // namespace radiogen

#endif  // RADIOGEN_COMMON_JSONL_H_
