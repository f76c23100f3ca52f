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

#include "pipeline/utility.h"

#include <cmath>

#include "common/csv.h"
#include "common/text.h"
#include "rouge/score_table.h"

namespace radiogen::pipeline {

std::map<std::string, BackendInfo> BackendInfoFromJson(const Json& document) {
  if (!document.is_object()) ThrowValidation("backend info must be a JSON object");
  std::map<std::string, BackendInfo> out;
  try {
    for (const auto& [id, j] : document.items()) {
      BackendInfo info;
      info.parameter_count = j.value("parameter_count", std::string());
      if (j.contains("fine_tuning_hours") && !j["fine_tuning_hours"].is_null()) {
        info.fine_tuning_hours = j["fine_tuning_hours"].get<double>();
        if (*info.fine_tuning_hours < 0) ThrowValidation("negative fine_tuning_hours");
      }
      out[id] = std::move(info);
    }
  } catch (const Json::exception& e) {
    ThrowValidation(std::string("backend info: ") + e.what());
  }
  return out;
}

std::vector<UtilityRecord> UtilityMetrics(
    const std::vector<inference::GenerationOutcome>& outcomes,
    const std::map<std::string, BackendInfo>& info) {
  if (outcomes.empty()) ThrowValidation("utility metrics need at least one timing sample");
  std::map<std::string, std::vector<const inference::GenerationOutcome*>> by_backend;
  for (const inference::GenerationOutcome& o : outcomes) by_backend[o.backend_id].push_back(&o);

  std::vector<UtilityRecord> records;
  for (const auto& [id, list] : by_backend) {
    UtilityRecord r;
    r.backend_id = id;
    if (const auto it = info.find(id); it != info.end()) {
      r.parameter_count = it->second.parameter_count;
      r.fine_tuning_hours = it->second.fine_tuning_hours;
    }
    r.n = list.size();
    double sum = 0.0;
    double first = 0.0;
    for (const inference::GenerationOutcome* o : list) {
      sum += o->total_latency_ms() / 1000.0;
      if (!o->attempt_latency_ms.empty()) first += o->attempt_latency_ms.front() / 1000.0;
    }
    const double n = static_cast<double>(r.n);
    r.testing_mean_s = sum / n;
    r.first_attempt_mean_s = first / n;
    if (r.n > 1) {
      double ss = 0.0;
      for (const inference::GenerationOutcome* o : list) {
        const double d = o->total_latency_ms() / 1000.0 - r.testing_mean_s;
        ss += d * d;
      }
      r.testing_sd_s = std::sqrt(ss / (n - 1.0));
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::string RenderUtilityTable(const std::vector<UtilityRecord>& records,
                               TableFormat format, const Provenance* provenance) {
  const std::vector<std::string> header = {
      "Model", "Parameter Count", "Fine-tuning Time (h)", "Testing Time (s)",
      "SD (s)", "First attempt (s)", "n"};
  std::vector<std::vector<std::string>> rows;
  for (const UtilityRecord& r : records) {
    rows.push_back({r.backend_id, r.parameter_count.empty() ? "NA" : r.parameter_count,
                    r.fine_tuning_hours ? rouge::FormatNumber(*r.fine_tuning_hours) : "NA",
                    text::FormatFixed(r.testing_mean_s, 4),
                    text::FormatFixed(r.testing_sd_s, 4),
                    text::FormatFixed(r.first_attempt_mean_s, 4), std::to_string(r.n)});
  }
  rows.push_back({"Doctors", "NA", "NA", kDoctorsTestingTime, "-", "-", "-"});

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
    for (const std::string& c : cells) s += " " + c + " |";
    return s + "\n";
  };
  out += line(header);
  out += "|---|---|---:|---:|---:|---:|---:|\n";
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) out += line(rows[i]);
  out += line(rows.back());
  return out;
}

}  // namespace radiogen::pipeline
