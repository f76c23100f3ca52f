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

#ifndef RADIOGEN_PIPELINE_REPORT_TABLES_H_
#define RADIOGEN_PIPELINE_REPORT_TABLES_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "common/jsonl.h"
#include "corpus/corpus.h"
#include "rouge/score_table.h"

namespace radiogen::pipeline {

enum class Layout {
  kCrossInstitution,  // columns Institution 1..6
  kPerSystem,         // columns Chest .. Maxillofacial & neck
  kMixed,             // columns (institution, system) pairs
};
std::optional<Layout> ParseLayout(std::string_view name);
std::string_view LayoutName(Layout layout);

enum class TableFormat { kCsv, kMarkdown };
std::optional<TableFormat> ParseTableFormat(std::string_view name);

struct ReportOptions {
  // Row order; backends not listed follow in first-seen order.
  std::vector<std::string> backend_order;
  int decimals = 4;
};

// One row per backend, one F1 column per (scope, variant) for the scopes the
// layout selects. Best value per column is bold in markdown and carries a
// trailing '*' in CSV; ties are all marked. Absent cells render as "-".
// Throws Error(kValidation) when the table is empty or has no row for the
// layout.
std::string RenderReportTable(const rouge::ScoreTable& table, Layout layout,
                              TableFormat format, const Provenance* provenance,
                              const ReportOptions& options = {});

struct StatsColumn {
  std::string caption;
  corpus::CorpusStats stats;
};

// Corpus statistics with variables as rows (No. of pieces, Age(y), sex,
// modality, system counts) and one column per entry of `columns`.
std::string RenderStatsTable(const std::vector<StatsColumn>& columns,
                             TableFormat format, const Provenance* provenance);

}  // namespace radiogen::pipeline

#endif  // RADIOGEN_PIPELINE_REPORT_TABLES_H_
