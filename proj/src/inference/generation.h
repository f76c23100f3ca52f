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

#ifndef RADIOGEN_INFERENCE_GENERATION_H_
#define RADIOGEN_INFERENCE_GENERATION_H_

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "common/error.h"
#include "common/jsonl.h"
#include "inference/segmenter.h"
#include "prompt/prompt_forge.h"

namespace radiogen::inference {

using Millis = std::chrono::duration<double, std::milli>;

// Sampling parameters are passed through to the backend untouched.
struct GenerationConfig {
  int max_new_tokens = 512;
  double temperature = 1.0;
  int top_k = 50;
  double top_p = 1.0;
  Millis request_timeout{120000.0};
  int max_retries = 3;
  // An n-gram (n = 1..3) repeated this many times back to back fails the
  // repetition guard.
  int repetition_limit = 4;
};

void ValidateGenerationConfig(const GenerationConfig& config);
Json GenerationConfigToJson(const GenerationConfig& config);
// Missing keys keep their defaults. Validates the result.
GenerationConfig GenerationConfigFromJson(const Json& object);

enum class FailureKind { kNullOutput, kRepetition, kTimeout, kBackendError };

std::string_view FailureName(FailureKind kind);
std::optional<FailureKind> ParseFailure(std::string_view name);

struct QualityVerdict {
  std::optional<FailureKind> failure;
  bool passed() const { return !failure.has_value(); }
};

// True if some n-gram with 1 <= n <= max_n occurs `limit` or more times
// consecutively.
bool HasConsecutiveRepeat(const TokenSeq& tokens, int max_n, int limit);

// Null output, then repetition (over segmented tokens), then latency.
QualityVerdict QualityCheck(std::string_view text, Millis latency,
                            const GenerationConfig& config);

struct GenerateResult {
  std::string text;
  Millis latency{0.0};
};

// Transport or remote failure; `failure` is kTimeout or kBackendError.
class BackendError : public Error {
 public:
  BackendError(FailureKind failure, const std::string& message)
      : Error(ErrorKind::kBackend, message), failure_(failure) {}
  FailureKind failure() const { return failure_; }

 private:
  FailureKind failure_;
};

// A text generation endpoint. Generate() may be called concurrently.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual const std::string& id() const = 0;
  // Throws BackendError on transport/HTTP/timeout failures.
  virtual GenerateResult Generate(const prompt::SynthesizedPrompt& prompt,
                                  const GenerationConfig& config) = 0;
};

struct GenerationOutcome {
  std::string record_id;
  int template_id = 0;
  std::string backend_id;
  std::string impression_text;
  int attempts = 0;
  std::vector<double> attempt_latency_ms;
  std::optional<FailureKind> failure;
  std::string failure_detail;

  double total_latency_ms() const;
  bool succeeded() const { return !failure.has_value(); }
};

// generate + QualityCheck until a pass or max_retries + 1 attempts. Failures
// are returned as data, never thrown. The retry reuses the same config.
GenerationOutcome GenerateChecked(Backend& backend,
                                  const prompt::SynthesizedPrompt& prompt,
                                  const GenerationConfig& config);

// GenerateChecked over every prompt with up to `parallel` concurrent calls.
// Output is sorted by (record_id, template_id).
std::vector<GenerationOutcome> RunInference(
    Backend& backend, const std::vector<prompt::SynthesizedPrompt>& prompts,
    const GenerationConfig& config, std::size_t parallel);

Json OutcomeToJson(const GenerationOutcome& outcome);
GenerationOutcome OutcomeFromJson(const Json& object);
std::vector<GenerationOutcome> LoadOutcomes(const std::string& path);

}  // namespace radiogen::inference

#endif  // RADIOGEN_INFERENCE_GENERATION_H_
