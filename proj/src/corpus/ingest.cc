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

#include <set>

#include "common/csv.h"
#include "common/error.h"
#include "common/text.h"
#include "corpus/corpus.h"

namespace radiogen::corpus {

std::optional<InputFormat> ParseInputFormat(std::string_view name) {
  const std::string key = text::ToLowerAscii(name);
  if (key == "jsonl") return InputFormat::kJsonl;
  if (key == "csv") return InputFormat::kCsv;
  return std::nullopt;
}

namespace {

// Raw rows as JSON objects regardless of the source format.
struct RawRow {
  std::size_t line = 0;
  std::optional<Json> object;
  std::string error;
  Json raw;
};

std::vector<RawRow> ReadJsonlRows(const std::string& path) {
  std::vector<RawRow> rows;
  for (JsonlLine& line : ReadJsonl(path).lines) {
    RawRow row;
    row.line = line.line_number;
    if (!line.value) {
      row.error = "malformed JSON: " + line.error;
      row.raw = line.raw;
    } else if (!line.value->is_object()) {
      row.error = "row is not a JSON object";
      row.raw = *line.value;
    } else {
      row.raw = *line.value;
      row.object = std::move(line.value);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<RawRow> ReadCsvRows(const std::string& path) {
  const std::vector<csv::Row> table = csv::Parse(ReadFile(path));
  std::vector<RawRow> rows;
  if (table.empty()) return rows;

  std::vector<std::string> header;
  for (const std::string& name : table.front().fields) {
    header.push_back(text::ToLowerAscii(text::Trim(name)));
  }
  for (std::size_t i = 1; i < table.size(); ++i) {
    const csv::Row& source = table[i];
    RawRow row;
    row.line = source.line_number;
    Json object = Json::object();
    for (std::size_t c = 0; c < header.size() && c < source.fields.size(); ++c) {
      if (header[c].empty()) continue;
      // Empty cells read as absent so a missing value is reported as such.
      if (source.fields[c].empty()) continue;
      object[header[c]] = source.fields[c];
    }
    row.raw = object;
    if (source.fields.size() != header.size()) {
      row.error = "expected " + std::to_string(header.size()) + " columns, got " +
                  std::to_string(source.fields.size());
    } else {
      row.object = std::move(object);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string IdHint(const Json& raw) {
  if (raw.is_object()) {
    const auto it = raw.find("record_id");
    if (it != raw.end()) {
      if (it->is_string()) return it->get<std::string>();
      if (it->is_number_integer()) return std::to_string(it->get<long long>());
    }
  }
  return {};
}

}  // namespace

IngestResult Ingest(const std::string& path, InputFormat format) {
  std::vector<RawRow> rows = format == InputFormat::kJsonl ? ReadJsonlRows(path)
                                                           : ReadCsvRows(path);
  IngestResult result;
  result.corpus.provenance = path;
  std::set<std::string> seen_ids;
  for (RawRow& row : rows) {
    Reject reject;
    reject.source = path;
    reject.line = row.line;
    reject.record_id = IdHint(row.raw);
    if (!row.object) {
      reject.reason = row.error;
      reject.raw = std::move(row.raw);
      result.rejects.push_back(std::move(reject));
      continue;
    }
    try {
      RadiologyReport report = ReportFromJson(*row.object);
      if (!seen_ids.insert(report.record_id).second) {
        ThrowValidation("duplicate record_id '" + report.record_id + "' in '" +
                        path + "' (line " + std::to_string(row.line) + ")");
      }
      result.corpus.records.push_back(std::move(report));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kValidation ||
          std::string_view(e.what()).starts_with("duplicate record_id")) {
        throw;
      }
      reject.reason = e.what();
      reject.raw = std::move(row.raw);
      result.rejects.push_back(std::move(reject));
    }
  }
  if (result.corpus.empty()) {
    ThrowValidation("no valid records in '" + path + "' (" +
                    std::to_string(result.rejects.size()) + " rejected)");
  }
  return result;
}

Corpus LoadCorpus(const std::string& path) {
  JsonlDocument doc = ReadJsonl(path);
  Corpus corpus;
  corpus.provenance = path;
  if (doc.provenance && doc.provenance->contains("label")) {
    corpus.provenance = (*doc.provenance)["label"].get<std::string>();
  }
  std::set<std::string> seen_ids;
  for (const JsonlLine& line : doc.lines) {
    const std::string where = path + ":" + std::to_string(line.line_number);
    if (!line.value) ThrowValidation(where + ": malformed JSON: " + line.error);
    try {
      corpus.records.push_back(ReportFromJson(*line.value));
    } catch (const Error& e) {
      ThrowValidation(where + ": " + e.what());
    }
    if (!seen_ids.insert(corpus.records.back().record_id).second) {
      ThrowValidation(where + ": duplicate record_id '" +
                      corpus.records.back().record_id + "'");
    }
  }
  return corpus;
}

}  // namespace radiogen::corpus
