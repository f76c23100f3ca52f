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

#include "prompt/prompt_forge.h"

#include <array>
#include <set>

#include "common/error.h"
#include "common/text.h"

namespace radiogen::prompt {

namespace {

constexpr std::array<std::string_view, 3> kPlaceholders = {
    kInputData, kExpertInstruction, kOutputImpression};

std::string Name(const PromptTemplate& t) {
  return "template " + std::to_string(t.template_id);
}

void RequireNoPlaceholder(const PromptTemplate& t, std::string_view field,
                          const std::string& value) {
  for (std::string_view ph : kPlaceholders) {
    if (value.find(ph) != std::string::npos) {
      ThrowValidation(Name(t) + ": " + std::string(field) +
                      " must not contain " + std::string(ph));
    }
  }
}

// Splits the body into the text before and after `{Input Data}`, with the
// other placeholders already resolved.
struct RenderedParts {
  std::string prefix;
  std::string suffix;
};

std::string Resolve(const PromptTemplate& t, std::string_view segment) {
  std::string out(segment);
  text::ReplaceAll(out, kExpertInstruction, t.instruction);
  text::ReplaceAll(out, kOutputImpression, "");
  return out;
}

RenderedParts Parts(const PromptTemplate& t) {
  const std::size_t at = t.body.find(kInputData);
  RenderedParts parts;
  parts.prefix = Resolve(t, std::string_view(t.body).substr(0, at));
  parts.suffix = Resolve(t, std::string_view(t.body).substr(at + kInputData.size()));

  std::string head;
  const auto append = [&head](const std::string& piece) {
    if (piece.empty()) return;
    if (!head.empty()) head.push_back('\n');
    head += piece;
  };
  append(t.system_description);
  if (t.body.find(kExpertInstruction) == std::string::npos) {
    append(t.instruction);
  }
  if (!head.empty()) head.push_back('\n');
  parts.prefix = head + parts.prefix;
  return parts;
}

}  // namespace

void ValidateTemplate(const PromptTemplate& t) {
  if (t.template_id < 1 || t.template_id > kMaxTemplates) {
    ThrowValidation(Name(t) + ": id must be in 1..5");
  }
  const std::size_t inputs = text::CountOccurrences(t.body, kInputData);
  if (inputs == 0) {
    ThrowValidation(Name(t) + ": body is missing the " +
                    std::string(kInputData) + " placeholder");
  }
  if (inputs > 1) {
    ThrowValidation(Name(t) + ": body contains " + std::string(kInputData) +
                    " more than once");
  }
  const std::size_t outputs = text::CountOccurrences(t.body, kOutputImpression);
  if (outputs > 1) {
    ThrowValidation(Name(t) + ": body contains " +
                    std::string(kOutputImpression) + " more than once");
  }
  if (outputs == 1 &&
      t.body.find(kOutputImpression) < t.body.find(kInputData)) {
    ThrowValidation(Name(t) + ": " + std::string(kOutputImpression) +
                    " must follow " + std::string(kInputData));
  }
  RequireNoPlaceholder(t, "system", t.system_description);
  RequireNoPlaceholder(t, "instruction", t.instruction);
}

std::vector<PromptTemplate> TemplatesFromJson(const Json& document) {
  const Json* list = &document;
  if (document.is_object()) {
    const auto it = document.find("templates");
    if (it == document.end()) {
      ThrowValidation("template file has no 'templates' array");
    }
    list = &*it;
  }
  if (!list->is_array()) ThrowValidation("'templates' must be an array");
  if (list->empty() || list->size() > kMaxTemplates) {
    ThrowValidation("template file must hold 1..5 templates, found " +
                    std::to_string(list->size()));
  }
  std::vector<PromptTemplate> templates;
  std::set<int> ids;
  for (const Json& entry : *list) {
    if (!entry.is_object() || !entry.contains("id") ||
        !entry["id"].is_number_integer()) {
      ThrowValidation("every template needs an integer 'id'");
    }
    PromptTemplate t;
    t.template_id = entry["id"].get<int>();
    const auto text_field = [&](const char* key, bool required) {
      const auto it = entry.find(key);
      if (it == entry.end()) {
        if (required) ThrowValidation(Name(t) + ": missing '" + key + "'");
        return std::string();
      }
      if (!it->is_string()) {
        ThrowValidation(Name(t) + ": '" + key + "' must be a string");
      }
      return it->get<std::string>();
    };
    t.system_description = text_field("system", false);
    t.instruction = text_field("instruction", false);
    t.body = text_field("body", true);
    ValidateTemplate(t);
    if (!ids.insert(t.template_id).second) {
      ThrowValidation("duplicate template id " + std::to_string(t.template_id));
    }
    templates.push_back(std::move(t));
  }
  return templates;
}

std::vector<PromptTemplate> LoadTemplates(const std::string& path) {
  return TemplatesFromJson(ParseJsonFile(path));
}

Json TemplatesToJson(const std::vector<PromptTemplate>& templates) {
  Json list = Json::array();
  for (const PromptTemplate& t : templates) {
    list.push_back({{"id", t.template_id},
                    {"system", t.system_description},
                    {"instruction", t.instruction},
                    {"body", t.body}});
  }
  return Json{{"templates", list}};
}

const PromptTemplate& FindTemplate(const std::vector<PromptTemplate>& templates,
                                   int template_id) {
  for (const PromptTemplate& t : templates) {
    if (t.template_id == template_id) return t;
  }
  ThrowValidation("no template with id " + std::to_string(template_id));
}

std::string RenderTemplate(const PromptTemplate& t, std::string_view input) {
  const RenderedParts parts = Parts(t);
  std::string out;
  out.reserve(parts.prefix.size() + input.size() + parts.suffix.size());
  out += parts.prefix;
  out += input;
  out += parts.suffix;
  return out;
}

std::optional<std::string> ExtractInput(const PromptTemplate& t,
                                        std::string_view rendered) {
  const RenderedParts parts = Parts(t);
  if (rendered.size() < parts.prefix.size() + parts.suffix.size() ||
      !rendered.starts_with(parts.prefix) || !rendered.ends_with(parts.suffix)) {
    return std::nullopt;
  }
  return std::string(rendered.substr(
      parts.prefix.size(),
      rendered.size() - parts.prefix.size() - parts.suffix.size()));
}

SynthesizedPrompt SynthesizePrompt(const PromptTemplate& t,
                                   const corpus::RadiologyReport& report,
                                   bool with_label) {
  if (text::IsBlank(report.finding)) {
    ThrowValidation("record '" + report.record_id + "' has an empty finding");
  }
  SynthesizedPrompt p;
  p.template_id = t.template_id;
  p.record_id = report.record_id;
  p.rendered_text = RenderTemplate(t, report.finding);
  p.input = report.finding;
  if (with_label) p.label = report.impression;
  return p;
}

PromptBatch SynthesizeBatch(const PromptTemplate& t,
                            const corpus::Corpus& corpus, bool with_label) {
  PromptBatch batch;
  batch.prompts.reserve(corpus.size());
  for (const corpus::RadiologyReport& r : corpus.records) {
    try {
      batch.prompts.push_back(SynthesizePrompt(t, r, with_label));
    } catch (const Error& e) {
      corpus::Reject reject;
      reject.source = corpus.provenance;
      reject.record_id = r.record_id;
      reject.reason = e.what();
      reject.raw = corpus::ReportToJson(r);
      batch.rejects.push_back(std::move(reject));
    }
  }
  return batch;
}

Json PromptToJson(const SynthesizedPrompt& p) {
  Json j;
  j["template_id"] = p.template_id;
  j["record_id"] = p.record_id;
  j["prompt"] = p.rendered_text;
  j["input"] = p.input;
  if (p.label) j["label"] = *p.label;
  return j;
}

SynthesizedPrompt PromptFromJson(const Json& object) {
  if (!object.is_object()) ThrowValidation("prompt row is not an object");
  SynthesizedPrompt p;
  try {
    p.template_id = object.at("template_id").get<int>();
    p.record_id = object.at("record_id").get<std::string>();
    p.rendered_text = object.at("prompt").get<std::string>();
    if (object.contains("input")) p.input = object["input"].get<std::string>();
    if (object.contains("label") && !object["label"].is_null()) {
      p.label = object["label"].get<std::string>();
    }
  } catch (const Json::exception& e) {
    ThrowValidation(std::string("malformed prompt row: ") + e.what());
  }
  return p;
}

std::vector<SynthesizedPrompt> LoadPrompts(const std::string& path) {
  std::vector<SynthesizedPrompt> prompts;
  for (const JsonlLine& line : ReadJsonl(path).lines) {
    const std::string where = path + ":" + std::to_string(line.line_number);
    if (!line.value) ThrowValidation(where + ": malformed JSON");
    try {
      prompts.push_back(PromptFromJson(*line.value));
    } catch (const Error& e) {
      ThrowValidation(where + ": " + e.what());
    }
  }
  return prompts;
}

}  // namespace radiogen::prompt
