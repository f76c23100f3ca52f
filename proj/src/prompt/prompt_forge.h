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

#ifndef RADIOGEN_PROMPT_PROMPT_FORGE_H_
#define RADIOGEN_PROMPT_PROMPT_FORGE_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "common/jsonl.h"
#include "corpus/report.h"

namespace radiogen::prompt {

inline constexpr std::string_view kInputData = "{Input Data}";
inline constexpr std::string_view kExpertInstruction = "{Expert Instruction}";
inline constexpr std::string_view kOutputImpression = "{Output Impression}";

inline constexpr int kMaxTemplates = 5;

// A prompt is system description + instruction + body. The body carries the
// `{Input Data}` slot (exactly once), optionally `{Expert Instruction}` (where
// the instruction is spliced in) and `{Output Impression}` (the response slot,
// at most once, after the input).
struct PromptTemplate {
  int template_id = 0;
  std::string system_description;
  std::string instruction;
  std::string body;
};

struct SynthesizedPrompt {
  int template_id = 0;
  std::string record_id;
  std::string rendered_text;
  // The finding that was inserted; lets mocks and audits recover it without
  // re-parsing the rendered text.
  std::string input;
  std::optional<std::string> label;
};

// Throws Error(kValidation) naming the template on any placeholder violation.
void ValidateTemplate(const PromptTemplate& t);

// {"templates": [{"id", "system", "instruction", "body"}, ...]} with 1..5
// entries and unique ids in 1..5. Returned in file order.
std::vector<PromptTemplate> LoadTemplates(const std::string& path);
std::vector<PromptTemplate> TemplatesFromJson(const Json& document);
Json TemplatesToJson(const std::vector<PromptTemplate>& templates);

const PromptTemplate& FindTemplate(const std::vector<PromptTemplate>& templates,
                                   int template_id);

// Renders `t` with `input` in the `{Input Data}` slot. Substitution is a
// single pass, so placeholder-looking text inside `input` stays literal.
std::string RenderTemplate(const PromptTemplate& t, std::string_view input);

// Inverse of RenderTemplate: the text between the template's fixed prefix and
// suffix, or nullopt if `rendered` does not have that shape.
std::optional<std::string> ExtractInput(const PromptTemplate& t,
                                        std::string_view rendered);

// Throws Error(kValidation) when the finding is blank.
SynthesizedPrompt SynthesizePrompt(const PromptTemplate& t,
                                   const corpus::RadiologyReport& report,
                                   bool with_label);

struct PromptBatch {
  std::vector<SynthesizedPrompt> prompts;
  std::vector<corpus::Reject> rejects;
};

// Order-preserving map of SynthesizePrompt; per-record failures become rejects.
PromptBatch SynthesizeBatch(const PromptTemplate& t,
                            const corpus::Corpus& corpus, bool with_label);

Json PromptToJson(const SynthesizedPrompt& p);
SynthesizedPrompt PromptFromJson(const Json& object);

std::vector<SynthesizedPrompt> LoadPrompts(const std::string& path);

}  // namespace radiogen::prompt

#endif  // RADIOGEN_PROMPT_PROMPT_FORGE_H_
