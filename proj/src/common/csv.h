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

#ifndef RADIOGEN_COMMON_CSV_H_
#define RADIOGEN_COMMON_CSV_H_

#include <string>
#include <string_view>
#include <vector>

namespace radiogen::csv {

struct Row {
  std::size_t line_number = 0;  // line where the row starts
  std::vector<std::string> fields;
};

// RFC 4180: comma separated, double-quote quoting, "" escapes, quoted fields
// may span lines. Lines starting with '#' outside quotes are comments. A UTF-8
// BOM at the start is dropped. Throws Error(kValidation) on an unterminated
// quote.
std::vector<Row> Parse(std::string_view content);

std::string EscapeField(std::string_view field);

std::string JoinRow(const std::vector<std::string>& fields);

}  // namespace radiogen::csv

#endif  // RADIOGEN_COMMON_CSV_H_
