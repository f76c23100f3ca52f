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

#ifndef RADIOGEN_PIPELINE_UTILITY_H_
#define RADIOGEN_PIPELINE_UTILITY_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "inference/generation.h"
#include "pipeline/report_tables.h"

namespace radiogen::pipeline {

// Static facts about a backend that timing journals cannot supply.
struct BackendInfo {
  std::string parameter_count;
  std::optional<double> fine_tuning_hours;
};

// {"<backend_id>": {"parameter_count": "7B", "fine_tuning_hours": 54}, ...}
std::map<std::string, BackendInfo> BackendInfoFromJson(const Json& document);

struct UtilityRecord {
  std::string backend_id;
  std::string parameter_count;
  std::optional<double> fine_tuning_hours;
  // Per-inference wall time including retries, seconds.
  double testing_mean_s = 0.0;
  double testing_sd_s = 0.0;  // sample standard deviation, 0 for n = 1
  double first_attempt_mean_s = 0.0;
  std::size_t n = 0;
};

// Groups outcomes by backend, ordered by backend_id. Throws
// Error(kValidation) when there are no outcomes.
std::vector<UtilityRecord> UtilityMetrics(
    const std::vector<inference::GenerationOutcome>& outcomes,
    const std::map<std::string, BackendInfo>& info);

inline constexpr const char* kDoctorsTestingTime = "60-180";

// Model | Parameter Count | Fine-tuning Time (h) | Testing Time (s) | SD (s)
// | First attempt (s) | n, closed by the static Doctors reference row.
std::string RenderUtilityTable(const std::vector<UtilityRecord>& records,
                               TableFormat format, const Provenance* provenance);

}  // namespace radiogen::pipeline

#endif  // RADIOGEN_PIPELINE_UTILITY_H_
