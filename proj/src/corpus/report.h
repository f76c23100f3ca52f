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

#ifndef RADIOGEN_CORPUS_REPORT_H_
#define RADIOGEN_CORPUS_REPORT_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "common/jsonl.h"

namespace radiogen::corpus {

inline constexpr int kMinInstitution = 1;
inline constexpr int kMaxInstitution = 6;
inline constexpr int kNumInstitutions = kMaxInstitution - kMinInstitution + 1;
// The institution whose records are used for fine-tuning; all others are
// external test sources.
inline constexpr int kTrainingInstitution = 1;

// Declaration order is the reporting order used by every table.
enum class BodySystem { kChest, kAbdomen, kMuscleSkeleton, kHead, kMaxillofacialNeck };
inline constexpr std::size_t kNumSystems = 5;
inline constexpr std::array<BodySystem, kNumSystems> kAllSystems = {
    BodySystem::kChest, BodySystem::kAbdomen, BodySystem::kMuscleSkeleton,
    BodySystem::kHead, BodySystem::kMaxillofacialNeck};

enum class Modality { kCt, kMri };
enum class Sex { kFemale, kMale };

// Canonical lowercase spellings used on disk: chest, abdomen, muscle_skeleton,
// head, maxillofacial_neck.
std::string_view SystemName(BodySystem system);
// Column captions: Chest, Abdomen, Muscle-skeleton, Head, Maxillofacial & neck.
std::string_view SystemCaption(BodySystem system);
std::string_view ModalityName(Modality modality);
std::string_view SexName(Sex sex);

// Accept the canonical spellings plus common sheet variants ("Muscle-skeleton",
// "musculoskeletal", "MR", "F", ...). Case-insensitive.
std::optional<BodySystem> ParseSystem(std::string_view text);
std::optional<Modality> ParseModality(std::string_view text);
std::optional<Sex> ParseSex(std::string_view text);

struct RadiologyReport {
  std::string record_id;
  int institution = kTrainingInstitution;
  BodySystem system = BodySystem::kChest;
  Modality modality = Modality::kCt;
  int age = 0;
  Sex sex = Sex::kFemale;
  std::string finding;
  std::string impression;

  friend bool operator==(const RadiologyReport&, const RadiologyReport&) = default;
};

struct Corpus {
  std::vector<RadiologyReport> records;
  std::string provenance;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

// A record that could not be admitted, kept for the rejects sidecar.
struct Reject {
  std::string source;
  std::size_t line = 0;  // 0 when not file-backed
  std::string record_id;
  std::string reason;
  Json raw;
};

Json ReportToJson(const RadiologyReport& report);

// Strict field-by-field conversion; throws Error(kValidation) naming the first
// offending field. Unknown keys are ignored. `record_id` and the integer
// fields may be JSON strings or numbers.
RadiologyReport ReportFromJson(const Json& object);

Json RejectToJson(const Reject& reject);

// Canonical JSONL. The corpus provenance label travels in the file header.
void WriteCorpus(const std::string& path, const Corpus& corpus,
                 Provenance provenance);

void WriteRejects(const std::string& path, const std::vector<Reject>& rejects,
                  const Provenance& provenance);

// "<path minus .jsonl>.rejects.jsonl"
std::string RejectsPathFor(const std::string& output_path);

}  // namespace radiogen::corpus

#endif  // RADIOGEN_CORPUS_REPORT_H_
