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

#ifndef RADIOGEN_INFERENCE_BACKENDS_H_
#define RADIOGEN_INFERENCE_BACKENDS_H_

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "inference/generation.h"

namespace radiogen::inference {

// Deterministic scripted backend for tests and desk-scale runs.
//
// Each call resolves a mode from the record's attempt number k (0-based):
// per_record[record_id][k] if present, else sequence[k] if present, else
// default_mode. Modes:
//   echo        the inserted finding, verbatim
//   null        empty string
//   repeat      "结节 结节 结节 结节 结节"
//   label       the prompt's label (reference impression), empty if none
//   response    responses[record_id]; a missing entry is a backend error
//   timeout     echo text, reported latency one ms past request_timeout
//   error       throws BackendError(backend_error)
//   text:<s>    the literal <s>
// Latency is simulated (latency_ms), never measured, so runs are
// bit-reproducible.
struct MockScript {
  std::string default_mode = "echo";
  std::vector<std::string> sequence;
  std::map<std::string, std::vector<std::string>> per_record;
  std::map<std::string, std::string> responses;
  double latency_ms = 0.0;
};

inline constexpr const char* kRepeatText = "结节 结节 结节 结节 结节";

// Parses a script value: either a bare mode string or an object with keys
// default, sequence, per_record, responses, responses_path, latency_ms.
// responses_path is resolved against `base_dir`.
MockScript MockScriptFromJson(const Json& value, const std::string& base_dir);

class MockBackend final : public Backend {
 public:
  MockBackend(std::string id, MockScript script);

  const std::string& id() const override { return id_; }
  GenerateResult Generate(const prompt::SynthesizedPrompt& prompt,
                          const GenerationConfig& config) override;

  int total_calls() const;
  int calls_for(const std::string& record_id) const;

 private:
  std::string id_;
  MockScript script_;
  mutable std::mutex mutex_;
  std::map<std::string, int> calls_;
  int total_calls_ = 0;
};

// OpenAI-style chat completion client: POST <base_url>/chat/completions with
// {model, messages, temperature, top_k, top_p, max_tokens, stream: false};
// reads choices[0].message.content.
class HttpChatBackend final : public Backend {
 public:
  HttpChatBackend(std::string id, std::string base_url, std::string model_name,
                  std::string api_key);

  const std::string& id() const override { return id_; }
  GenerateResult Generate(const prompt::SynthesizedPrompt& prompt,
                          const GenerationConfig& config) override;

 private:
  std::string id_;
  std::string origin_;  // scheme://host[:port]
  std::string path_prefix_;
  std::string model_name_;
  std::string api_key_;
};

struct BackendConfig {
  std::string backend_id;
  std::string kind;  // "http" or "mock"
  std::string base_url;
  std::string api_key_env;
  std::string model_name;
  Json script;
  std::string base_dir;  // directory of the config file, for relative paths
};

// Rejects an inline "api_key": credentials come from the environment only.
BackendConfig BackendConfigFromJson(const Json& object,
                                    const std::string& base_dir);
Json BackendConfigToJson(const BackendConfig& config);

std::unique_ptr<Backend> MakeBackend(const BackendConfig& config);

struct InferenceConfig {
  std::vector<BackendConfig> backends;
  GenerationConfig generation;
};

// Accepts {"backends": [...], "generation": {...}}, a bare array of backend
// objects, or a single backend object.
InferenceConfig InferenceConfigFromJson(const Json& document,
                                        const std::string& base_dir);
InferenceConfig LoadInferenceConfig(const std::string& path);

const BackendConfig& FindBackend(const InferenceConfig& config,
                                 const std::string& backend_id);

std::string DirectoryOf(const std::string& path);
std::string ResolvePath(const std::string& base_dir, const std::string& path);

}  // namespace radiogen::inference

#endif  // RADIOGEN_INFERENCE_BACKENDS_H_
