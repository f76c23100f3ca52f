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

#include "corpus/report.h"

#include <charconv>

#include "common/error.h"
#include "common/text.h"

namespace radiogen::corpus {

std::string_view SystemName(BodySystem system) {
  switch (system) {
    case BodySystem::kChest:
      return "chest";
    case BodySystem::kAbdomen:
      return "abdomen";
    case BodySystem::kMuscleSkeleton:
      return "muscle_skeleton";
    case BodySystem::kHead:
      return "head";
    case BodySystem::kMaxillofacialNeck:
      return "maxillofacial_neck";
  }
  return "unknown";
}

std::string_view SystemCaption(BodySystem system) {
  switch (system) {
    case BodySystem::kChest:
      return "Chest";
    case BodySystem::kAbdomen:
      return "Abdomen";
    case BodySystem::kMuscleSkeleton:
      return "Muscle-skeleton";
    case BodySystem::kHead:
      return "Head";
    case BodySystem::kMaxillofacialNeck:
      return "Maxillofacial & neck";
  }
  return "Unknown";
}

std::string_view ModalityName(Modality modality) {
  return modality == Modality::kCt ? "CT" : "MRI";
}

std::string_view SexName(Sex sex) {
  return sex == Sex::kFemale ? "female" : "male";
}

namespace {

// Lowercase and drop separators so "Muscle-skeleton", "muscle_skeleton" and
// "Muscle Skeleton" compare equal.
std::string Fold(std::string_view text) {
  std::string out;
  for (char c : text::ToLowerAscii(text::Trim(text))) {
    if (c == ' ' || c == '-' || c == '_' || c == '&' || c == '/') continue;
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::optional<BodySystem> ParseSystem(std::string_view text) {
  const std::string key = Fold(text);
  if (key == "chest" || key == "胸部") return BodySystem::kChest;
  if (key == "abdomen" || key == "abdominal" || key == "腹部") {
    return BodySystem::kAbdomen;
  }
  if (key == "muscleskeleton" || key == "muscleskeletion" ||
      key == "musculoskeletal" || key == "msk" || key == "骨肌") {
    return BodySystem::kMuscleSkeleton;
  }
  if (key == "head" || key == "头部") return BodySystem::kHead;
  if (key == "maxillofacialneck" || key == "maxillofacialandneck" ||
      key == "headneck" || key == "颌面颈部") {
    return BodySystem::kMaxillofacialNeck;
  }
  return std::nullopt;
}

std::optional<Modality> ParseModality(std::string_view text) {
  const std::string key = Fold(text);
  if (key == "ct") return Modality::kCt;
  if (key == "mri" || key == "mr") return Modality::kMri;
  return std::nullopt;
}

std::optional<Sex> ParseSex(std::string_view text) {
  const std::string key = Fold(text);
  if (key == "female" || key == "f" || key == "女") return Sex::kFemale;
  if (key == "male" || key == "m" || key == "男") return Sex::kMale;
  return std::nullopt;
}

namespace {

const Json& Require(const Json& object, const char* key) {
  const auto it = object.find(key);
  if (it == object.end() || it->is_null()) {
    ThrowValidation(std::string("missing field '") + key + "'");
  }
  return *it;
}

std::string RequireText(const Json& object, const char* key) {
  const Json& value = Require(object, key);
  if (!value.is_string()) {
    ThrowValidation(std::string("field '") + key + "' must be a string");
  }
  std::string s = value.get<std::string>();
  if (text::IsBlank(s)) {
    ThrowValidation(std::string("field '") + key + "' is empty");
  }
  return s;
}

long long RequireInteger(const Json& object, const char* key) {
  const Json& value = Require(object, key);
  if (value.is_number_integer()) return value.get<long long>();
  if (value.is_number_float()) {
    const double d = value.get<double>();
    if (d == static_cast<double>(static_cast<long long>(d))) {
      return static_cast<long long>(d);
    }
  }
  if (value.is_string()) {
    const std::string s = text::Trim(value.get<std::string>());
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec == std::errc() && ptr == s.data() + s.size() && !s.empty()) {
      return out;
    }
  }
  ThrowValidation(std::string("field '") + key + "' must be an integer");
}

template <typename Parser>
auto RequireEnum(const Json& object, const char* key, Parser parse) {
  const Json& value = Require(object, key);
  if (!value.is_string()) {
    ThrowValidation(std::string("field '") + key + "' must be a string");
  }
  const auto parsed = parse(value.get<std::string>());
  if (!parsed) {
    ThrowValidation(std::string("field '") + key + "' has unknown value '" +
                    value.get<std::string>() + "'");
  }
  return *parsed;
}

}  // namespace

Json ReportToJson(const RadiologyReport& report) {
  Json j;
  j["record_id"] = report.record_id;
  j["institution"] = report.institution;
  j["system"] = SystemName(report.system);
  j["modality"] = ModalityName(report.modality);
  j["age"] = report.age;
  j["sex"] = SexName(report.sex);
  j["finding"] = report.finding;
  j["impression"] = report.impression;
  return j;
}

RadiologyReport ReportFromJson(const Json& object) {
  if (!object.is_object()) ThrowValidation("record is not a JSON object");
  RadiologyReport report;

  const Json& id = Require(object, "record_id");
  if (id.is_string()) {
    report.record_id = text::Trim(id.get<std::string>());
  } else if (id.is_number_integer()) {
    report.record_id = std::to_string(id.get<long long>());
  } else {
    ThrowValidation("field 'record_id' must be a string or integer");
  }
  if (report.record_id.empty()) ThrowValidation("field 'record_id' is empty");

  const long long institution = RequireInteger(object, "institution");
  if (institution < kMinInstitution || institution > kMaxInstitution) {
    ThrowValidation("field 'institution' out of range 1..6: " +
                    std::to_string(institution));
  }
  report.institution = static_cast<int>(institution);
  report.system = RequireEnum(object, "system", ParseSystem);
  report.modality = RequireEnum(object, "modality", ParseModality);
  const long long age = RequireInteger(object, "age");
  if (age < 0 || age > 150) {
    ThrowValidation("field 'age' out of range: " + std::to_string(age));
  }
  report.age = static_cast<int>(age);
  report.sex = RequireEnum(object, "sex", ParseSex);
  report.finding = RequireText(object, "finding");
  report.impression = RequireText(object, "impression");
  return report;
}

Json RejectToJson(const Reject& reject) {
  Json j;
  j["source"] = reject.source;
  j["line"] = reject.line;
  j["record_id"] = reject.record_id;
  j["reason"] = reject.reason;
  j["raw"] = reject.raw;
  return j;
}

void WriteCorpus(const std::string& path, const Corpus& corpus,
                 Provenance provenance) {
  if (provenance.label.empty()) provenance.label = corpus.provenance;
  std::vector<Json> rows;
  rows.reserve(corpus.size());
  for (const RadiologyReport& r : corpus.records) rows.push_back(ReportToJson(r));
  WriteJsonl(path, rows, &provenance);
}

void WriteRejects(const std::string& path, const std::vector<Reject>& rejects,
                  const Provenance& provenance) {
  std::vector<Json> rows;
  rows.reserve(rejects.size());
  for (const Reject& r : rejects) rows.push_back(RejectToJson(r));
  WriteJsonl(path, rows, &provenance);
}

std::string RejectsPathFor(const std::string& output_path) {
  std::string base = output_path;
  const std::string ext = ".jsonl";
  if (base.size() > ext.size() &&
      base.compare(base.size() - ext.size(), ext.size(), ext) == 0) {
    base.resize(base.size() - ext.size());
  }
  return base + ".rejects.jsonl";
}

}  // namespace radiogen::corpus
