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

#include "common/jsonl.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "common/error.h"

namespace radiogen {

Json ProvenanceToJson(const Provenance& provenance) {
  Json j;
  j["tool"] = "radiogen";
  j["version"] = RADIOGEN_VERSION;
  if (!provenance.stage.empty()) j["stage"] = provenance.stage;
  if (!provenance.label.empty()) j["label"] = provenance.label;
  j["config_hash"] = provenance.config_hash;
  if (provenance.seed) {
    j["seed"] = *provenance.seed;
  } else {
    j["seed"] = nullptr;
  }
  return j;
}

std::string ProvenanceLine(const Provenance& provenance) {
  Json header;
  header[kProvenanceKey] = ProvenanceToJson(provenance);
  return header.dump(-1, ' ', false, Json::error_handler_t::replace);
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ThrowIo("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) ThrowIo("error while reading '" + path + "'");
  return buf.str();
}

void WriteFile(const std::string& path, const std::string& content) {
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) ThrowIo("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) ThrowIo("error while writing '" + path + "'");
}

JsonlDocument ReadJsonl(const std::string& path) {
  const std::string content = ReadFile(path);
  JsonlDocument doc;
  std::size_t line_number = 0;
  std::size_t start = 0;
  bool seen_record = false;
  while (start <= content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string::npos) end = content.size();
    std::string raw = content.substr(start, end - start);
    ++line_number;
    start = end + 1;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.find_first_not_of(" \t") == std::string::npos) {
      if (end == content.size()) break;
      continue;
    }
    JsonlLine line;
    line.line_number = line_number;
    try {
      Json value = Json::parse(raw);
      if (!seen_record && value.is_object() && value.size() == 1 &&
          value.contains(kProvenanceKey)) {
        doc.provenance = value[kProvenanceKey];
        continue;
      }
      line.value = std::move(value);
    } catch (const Json::parse_error& e) {
      line.error = e.what();
    }
    seen_record = true;
    line.raw = std::move(raw);
    doc.lines.push_back(std::move(line));
    if (end == content.size()) break;
  }
  return doc;
}

std::string RenderJsonl(const std::vector<Json>& rows,
                        const Provenance* provenance) {
  std::string out;
  if (provenance != nullptr) {
    out += ProvenanceLine(*provenance);
    out += '\n';
  }
  for (const Json& row : rows) {
    out += row.dump(-1, ' ', false, Json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

void WriteJsonl(const std::string& path, const std::vector<Json>& rows,
                const Provenance* provenance) {
  WriteFile(path, RenderJsonl(rows, provenance));
}

Json ParseJsonFile(const std::string& path) {
  const std::string content = ReadFile(path);
  try {
    return Json::parse(content);
  } catch (const Json::parse_error& e) {
    ThrowValidation("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string RenderJsonDocument(const Json& document, const Provenance* provenance) {
  if (provenance == nullptr || !document.is_object()) {
    return document.dump(2, ' ', false, Json::error_handler_t::replace) + "\n";
  }
  Json out;
  out[kProvenanceKey] = ProvenanceToJson(*provenance);
  for (const auto& [key, value] : document.items()) out[key] = value;
  return out.dump(2, ' ', false, Json::error_handler_t::replace) + "\n";
}

}  // namespace radiogen
