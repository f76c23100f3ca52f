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

#include "inference/generation.h"

#include <algorithm>
#include <cmath>

#include "common/text.h"

namespace radiogen::inference {

void ValidateGenerationConfig(const GenerationConfig& c) {
  if (c.max_new_tokens < 1) ThrowValidation("max_new_tokens must be >= 1");
  if (!(c.temperature >= 0.0) || !std::isfinite(c.temperature)) {
    ThrowValidation("temperature must be a non-negative number");
  }
  if (c.top_k < 0) ThrowValidation("top_k must be >= 0");
  if (!(c.top_p > 0.0 && c.top_p <= 1.0)) {
    ThrowValidation("top_p must be in (0, 1]");
  }
  if (!(c.request_timeout.count() > 0.0)) {
    ThrowValidation("request_timeout must be positive");
  }
  if (c.max_retries < 0) ThrowValidation("max_retries must be >= 0");
  if (c.repetition_limit < 2) ThrowValidation("repetition_limit must be >= 2");
}

Json GenerationConfigToJson(const GenerationConfig& c) {
  Json j;
  j["max_new_tokens"] = c.max_new_tokens;
  j["temperature"] = c.temperature;
  j["top_k"] = c.top_k;
  j["top_p"] = c.top_p;
  j["request_timeout_ms"] = c.request_timeout.count();
  j["max_retries"] = c.max_retries;
  j["repetition_limit"] = c.repetition_limit;
  return j;
}

GenerationConfig GenerationConfigFromJson(const Json& object) {
  GenerationConfig c;
  if (object.is_null()) return c;
  if (!object.is_object()) ThrowValidation("generation config must be an object");
  try {
    c.max_new_tokens = object.value("max_new_tokens", c.max_new_tokens);
    c.temperature = object.value("temperature", c.temperature);
    c.top_k = object.value("top_k", c.top_k);
    c.top_p = object.value("top_p", c.top_p);
    c.request_timeout =
        Millis(object.value("request_timeout_ms", c.request_timeout.count()));
    c.max_retries = object.value("max_retries", c.max_retries);
    c.repetition_limit = object.value("repetition_limit", c.repetition_limit);
  } catch (const Json::exception& e) {
    ThrowValidation(std::string("generation config: ") + e.what());
  }
  ValidateGenerationConfig(c);
  return c;
}

std::string_view FailureName(FailureKind kind) {
  switch (kind) {
    case FailureKind::kNullOutput:
      return "null_output";
    case FailureKind::kRepetition:
      return "repetition";
    case FailureKind::kTimeout:
      return "timeout";
    case FailureKind::kBackendError:
      return "backend_error";
  }
  return "unknown";
}

std::optional<FailureKind> ParseFailure(std::string_view name) {
  for (FailureKind k : {FailureKind::kNullOutput, FailureKind::kRepetition,
                        FailureKind::kTimeout, FailureKind::kBackendError}) {
    if (FailureName(k) == name) return k;
  }
  return std::nullopt;
}

bool HasConsecutiveRepeat(const TokenSeq& tokens, int max_n, int limit) {
  const std::size_t len = tokens.size();
  for (std::size_t n = 1; n <= static_cast<std::size_t>(max_n); ++n) {
    for (std::size_t i = 0; i + n <= len; ++i) {
      int runs = 1;
      std::size_t j = i + n;
      while (j + n <= len &&
             std::equal(tokens.begin() + i, tokens.begin() + i + n,
                        tokens.begin() + j)) {
        if (++runs >= limit) return true;
        j += n;
      }
    }
  }
  return false;
}

QualityVerdict QualityCheck(std::string_view text, Millis latency,
                            const GenerationConfig& config) {
  if (text::IsBlank(text)) return {FailureKind::kNullOutput};
  if (HasConsecutiveRepeat(SegmentText(text), 3, config.repetition_limit)) {
    return {FailureKind::kRepetition};
  }
  if (latency > config.request_timeout) return {FailureKind::kTimeout};
  return {};
}

double GenerationOutcome::total_latency_ms() const {
  double total = 0.0;
  for (double ms : attempt_latency_ms) total += ms;
  return total;
}

GenerationOutcome GenerateChecked(Backend& backend,
                                  const prompt::SynthesizedPrompt& prompt,
                                  const GenerationConfig& config) {
  GenerationOutcome outcome;
  outcome.record_id = prompt.record_id;
  outcome.template_id = prompt.template_id;
  outcome.backend_id = backend.id();
  const int max_attempts = config.max_retries + 1;
  do {
    ++outcome.attempts;
    try {
      GenerateResult result = backend.Generate(prompt, config);
      outcome.attempt_latency_ms.push_back(result.latency.count());
      const QualityVerdict verdict =
          QualityCheck(result.text, result.latency, config);
      outcome.impression_text = std::move(result.text);
      outcome.failure = verdict.failure;
      outcome.failure_detail.clear();
    } catch (const BackendError& e) {
      outcome.attempt_latency_ms.push_back(0.0);
      outcome.impression_text.clear();
      outcome.failure = e.failure();
      outcome.failure_detail = e.what();
    }
  } while (outcome.failure && outcome.attempts < max_attempts);
  return outcome;
}

Json OutcomeToJson(const GenerationOutcome& o) {
  Json j;
  j["record_id"] = o.record_id;
  j["template_id"] = o.template_id;
  j["backend_id"] = o.backend_id;
  j["impression"] = o.impression_text;
  j["attempts"] = o.attempts;
  j["latency_ms"] = o.total_latency_ms();
  j["attempt_latency_ms"] = o.attempt_latency_ms;
  if (o.failure) {
    j["failure"] = FailureName(*o.failure);
    if (!o.failure_detail.empty()) j["failure_detail"] = o.failure_detail;
  }
  return j;
}

GenerationOutcome OutcomeFromJson(const Json& object) {
  GenerationOutcome o;
  try {
    o.record_id = object.at("record_id").get<std::string>();
    o.template_id = object.value("template_id", 0);
    o.backend_id = object.value("backend_id", std::string());
    o.impression_text = object.value("impression", std::string());
    o.attempts = object.at("attempts").get<int>();
    if (object.contains("attempt_latency_ms")) {
      o.attempt_latency_ms =
          object["attempt_latency_ms"].get<std::vector<double>>();
    } else {
      o.attempt_latency_ms = {object.value("latency_ms", 0.0)};
    }
    if (object.contains("failure") && !object["failure"].is_null()) {
      const auto kind = ParseFailure(object["failure"].get<std::string>());
      if (!kind) ThrowValidation("unknown failure kind");
      o.failure = kind;
      o.failure_detail = object.value("failure_detail", std::string());
    }
  } catch (const Json::exception& e) {
    ThrowValidation(std::string("malformed outcome row: ") + e.what());
  }
  return o;
}

std::vector<GenerationOutcome> LoadOutcomes(const std::string& path) {
  std::vector<GenerationOutcome> outcomes;
  for (const JsonlLine& line : ReadJsonl(path).lines) {
    const std::string where = path + ":" + std::to_string(line.line_number);
    if (!line.value) ThrowValidation(where + ": malformed JSON");
    try {
      outcomes.push_back(OutcomeFromJson(*line.value));
    } catch (const Error& e) {
      ThrowValidation(where + ": " + e.what());
    }
  }
  return outcomes;
}

}  // namespace radiogen::inference
