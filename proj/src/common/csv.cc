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

#include "common/csv.h"

#include "common/error.h"

namespace radiogen::csv {

std::vector<Row> Parse(std::string_view content) {
  if (content.substr(0, 3) == "\xEF\xBB\xBF") content.remove_prefix(3);

  std::vector<Row> rows;
  Row row;
  std::string field;
  bool in_quotes = false;
  bool row_started = false;
  bool field_was_quoted = false;
  std::size_t line = 1;
  std::size_t i = 0;

  const auto end_field = [&] {
    row.fields.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  const auto end_row = [&] {
    if (row_started) {
      end_field();
      rows.push_back(std::move(row));
    }
    row = Row{};
    row_started = false;
  };

  while (i < content.size()) {
    const char c = content[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field.push_back('"');
          i += 2;
          continue;
        }
        in_quotes = false;
        ++i;
        continue;
      }
      if (c == '\n') ++line;
      field.push_back(c);
      ++i;
      continue;
    }
    if (!row_started) {
      if (c == '\n' || c == '\r') {
        if (c == '\n') ++line;
        ++i;
        continue;
      }
      if (c == '#') {
        while (i < content.size() && content[i] != '\n') ++i;
        continue;
      }
      row_started = true;
      row.line_number = line;
    }
    switch (c) {
      case '"':
        if (field.empty() && !field_was_quoted) {
          in_quotes = true;
          field_was_quoted = true;
        } else {
          field.push_back(c);
        }
        ++i;
        break;
      case ',':
        end_field();
        ++i;
        break;
      case '\r':
        ++i;
        break;
      case '\n':
        end_row();
        ++line;
        ++i;
        break;
      default:
        field.push_back(c);
        ++i;
    }
  }
  if (in_quotes) {
    ThrowValidation("unterminated quoted CSV field starting near line " +
                    std::to_string(row.line_number));
  }
  end_row();
  return rows;
}

std::string EscapeField(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string JoinRow(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += EscapeField(fields[i]);
  }
  return out;
}

}  // namespace radiogen::csv
