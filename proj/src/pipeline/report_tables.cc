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

#include "pipeline/report_tables.h"

#include <algorithm>
#include <map>
#include <set>

#include "common/csv.h"
#include "common/text.h"

namespace radiogen::pipeline {

std::optional<Layout> ParseLayout(std::string_view name) {
  if (name == "cross_institution") return Layout::kCrossInstitution;
  if (name == "per_system") return Layout::kPerSystem;
  if (name == "mixed") return Layout::kMixed;
  return std::nullopt;
}

std::string_view LayoutName(Layout layout) {
  switch (layout) {
    case Layout::kCrossInstitution:
      return "cross_institution";
    case Layout::kPerSystem:
      return "per_system";
    case Layout::kMixed:
      return "mixed";
  }
  return "?";
}

std::optional<TableFormat> ParseTableFormat(std::string_view name) {
  if (name == "csv") return TableFormat::kCsv;
  if (name == "markdown" || name == "md") return TableFormat::kMarkdown;
  return std::nullopt;
}

namespace {

struct ColumnGroup {
  std::string scope;
  std::string caption;
};

std::vector<ColumnGroup> GroupsFor(Layout layout) {
  std::vector<ColumnGroup> groups;
  for (int inst = corpus::kMinInstitution; inst <= corpus::kMaxInstitution; ++inst) {
    if (layout == Layout::kCrossInstitution) {
      groups.push_back({rouge::InstitutionScope(inst), "Institution " + std::to_string(inst)});
    } else if (layout == Layout::kMixed) {
      for (corpus::BodySystem s : corpus::kAllSystems) {
        groups.push_back({rouge::MixedScope(inst, s), "Institution " + std::to_string(inst) +
                                                          " " +
                                                          std::string(corpus::SystemCaption(s))});
      }
    }
  }
  if (layout == Layout::kPerSystem) {
    for (corpus::BodySystem s : corpus::kAllSystems) {
      groups.push_back({rouge::SystemScope(s), std::string(corpus::SystemCaption(s))});
    }
  }
  return groups;
}

std::string MarkdownEscape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string RenderReportTable(const rouge::ScoreTable& table, Layout layout,
                              TableFormat format, const Provenance* provenance,
                              const ReportOptions& options) {
  if (table.rows.empty()) ThrowValidation("cannot render an empty score table");

  std::map<std::pair<std::string, std::string>, std::array<std::optional<double>, 3>> cells;
  std::set<std::string> scopes_present;
  std::vector<std::string> backends = options.backend_order;
  for (const rouge::TableRow& r : table.rows) {
    cells[{r.backend_id, r.scope}][static_cast<std::size_t>(r.variant)] = r.f1;
    scopes_present.insert(r.scope);
  }
  for (const rouge::TableRow& r : table.rows) {
    if (std::find(backends.begin(), backends.end(), r.backend_id) == backends.end()) {
      backends.push_back(r.backend_id);
    }
  }

  std::vector<ColumnGroup> groups;
  for (ColumnGroup& g : GroupsFor(layout)) {
    if (scopes_present.contains(g.scope)) groups.push_back(std::move(g));
  }
  if (groups.empty()) {
    ThrowValidation("score table has no scopes for layout '" +
                    std::string(LayoutName(layout)) + "'");
  }

  // Formatted grid plus the best formatted value per column.
  const std::size_t ncols = groups.size() * 3;
  std::vector<std::vector<std::optional<double>>> grid(
      backends.size(), std::vector<std::optional<double>>(ncols));
  for (std::size_t r = 0; r < backends.size(); ++r) {
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const auto it = cells.find({backends[r], groups[g].scope});
      if (it == cells.end()) continue;
      for (std::size_t v = 0; v < 3; ++v) grid[r][g * 3 + v] = it->second[v];
    }
  }
  std::vector<std::optional<double>> best(ncols);
  for (std::size_t c = 0; c < ncols; ++c) {
    for (std::size_t r = 0; r < backends.size(); ++r) {
      if (grid[r][c] && (!best[c] || *grid[r][c] > *best[c])) best[c] = grid[r][c];
    }
  }
  auto cell_text = [&](std::size_t r, std::size_t c) -> std::string {
    if (!grid[r][c]) return "-";
    const std::string value = text::FormatFixed(*grid[r][c], options.decimals);
    const bool is_best = value == text::FormatFixed(*best[c], options.decimals);
    if (!is_best) return value;
    return format == TableFormat::kMarkdown ? "**" + value + "**" : value + "*";
  };

  std::vector<std::string> header = {"Model"};
  for (const ColumnGroup& g : groups) {
    for (rouge::Variant v : rouge::kAllVariants) {
      header.push_back(g.caption + " " + std::string(rouge::VariantCaption(v)));
    }
  }

  std::string out;
  if (format == TableFormat::kCsv) {
    if (provenance != nullptr) out += "# " + ProvenanceToJson(*provenance).dump() + "\n";
    out += csv::JoinRow(header) + "\n";
    for (std::size_t r = 0; r < backends.size(); ++r) {
      std::vector<std::string> row = {backends[r]};
      for (std::size_t c = 0; c < ncols; ++c) row.push_back(cell_text(r, c));
      out += csv::JoinRow(row) + "\n";
    }
    return out;
  }

  if (provenance != nullptr) {
    out += "<!-- " + ProvenanceToJson(*provenance).dump() + " -->\n";
  }
  out += "|";
  for (const std::string& h : header) out += " " + MarkdownEscape(h) + " |";
  out += "\n|---|";
  for (std::size_t c = 0; c < ncols; ++c) out += "---:|";
  out += "\n";
  for (std::size_t r = 0; r < backends.size(); ++r) {
    out += "| " + MarkdownEscape(backends[r]) + " |";
    for (std::size_t c = 0; c < ncols; ++c) out += " " + cell_text(r, c) + " |";
    out += "\n";
  }
  return out;
}

std::string RenderStatsTable(const std::vector<StatsColumn>& columns,
                             TableFormat format, const Provenance* provenance) {
  if (columns.empty()) ThrowValidation("statistics table needs at least one column");
  std::vector<std::string> header = {"Variable"};
  for (const StatsColumn& c : columns) header.push_back(c.caption);

  std::vector<std::vector<std::string>> rows;
  auto add = [&](std::string label, auto value_of) {
    std::vector<std::string> row = {std::move(label)};
    for (const StatsColumn& c : columns) row.push_back(value_of(c.stats));
    rows.push_back(std::move(row));
  };
  auto count = [](std::size_t n) { return std::to_string(n); };
  add("No. of pieces", [&](const corpus::CorpusStats& s) { return count(s.total); });
  add("Age(y)", [](const corpus::CorpusStats& s) {
    return s.age_min ? std::to_string(*s.age_min) + "-" + std::to_string(*s.age_max)
                     : std::string("-");
  });
  add("Female", [&](const corpus::CorpusStats& s) { return count(s.by_sex[0]); });
  add("Male", [&](const corpus::CorpusStats& s) { return count(s.by_sex[1]); });
  add("CT", [&](const corpus::CorpusStats& s) { return count(s.by_modality[0]); });
  add("MRI", [&](const corpus::CorpusStats& s) { return count(s.by_modality[1]); });
  for (corpus::BodySystem sys : corpus::kAllSystems) {
    add(std::string(corpus::SystemCaption(sys)), [&](const corpus::CorpusStats& s) {
      return count(s.by_system[static_cast<std::size_t>(sys)]);
    });
  }

  std::string out;
  if (format == TableFormat::kCsv) {
    if (provenance != nullptr) out += "# " + ProvenanceToJson(*provenance).dump() + "\n";
    out += csv::JoinRow(header) + "\n";
    for (const auto& row : rows) out += csv::JoinRow(row) + "\n";
    return out;
  }
  if (provenance != nullptr) {
    out += "<!-- " + ProvenanceToJson(*provenance).dump() + " -->\n";
  }
  auto line = [](const std::vector<std::string>& cells) {
    std::string s = "|";
    for (const std::string& c : cells) s += " " + MarkdownEscape(c) + " |";
    return s + "\n";
  };
  out += line(header);
  out += "|---|";
  for (std::size_t i = 0; i < columns.size(); ++i) out += "---:|";
  out += "\n";
  for (const auto& row : rows) out += line(row);
  return out;
}

}  // namespace radiogen::pipeline
