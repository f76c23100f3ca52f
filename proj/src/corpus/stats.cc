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

#include <algorithm>

#include "corpus/corpus.h"

namespace radiogen::corpus {

CorpusStats ComputeStats(const Corpus& corpus) {
  CorpusStats stats;
  for (const RadiologyReport& r : corpus.records) {
    ++stats.total;
    ++stats.by_institution[r.institution - kMinInstitution];
    ++stats.by_system[static_cast<std::size_t>(r.system)];
    ++stats.by_modality[static_cast<std::size_t>(r.modality)];
    ++stats.by_sex[static_cast<std::size_t>(r.sex)];
    stats.age_min = std::min(stats.age_min.value_or(r.age), r.age);
    stats.age_max = std::max(stats.age_max.value_or(r.age), r.age);
  }
  return stats;
}

Json StatsToJson(const CorpusStats& stats) {
  Json j;
  j["total"] = stats.total;
  Json institutions = Json::object();
  for (int i = kMinInstitution; i <= kMaxInstitution; ++i) {
    institutions[std::to_string(i)] = stats.by_institution[i - kMinInstitution];
  }
  j["institution"] = institutions;
  Json systems = Json::object();
  for (BodySystem s : kAllSystems) {
    systems[std::string(SystemName(s))] =
        stats.by_system[static_cast<std::size_t>(s)];
  }
  j["system"] = systems;
  j["modality"] = {{"CT", stats.by_modality[0]}, {"MRI", stats.by_modality[1]}};
  j["sex"] = {{"female", stats.by_sex[0]}, {"male", stats.by_sex[1]}};
  if (stats.age_min) {
    j["age"] = {{"min", *stats.age_min}, {"max", *stats.age_max}};
  } else {
    j["age"] = nullptr;
  }
  return j;
}

}  // namespace radiogen::corpus
