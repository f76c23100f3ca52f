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

#include "inference/backends.h"

namespace radiogen::inference {

MockScript MockScriptFromJson(const Json& value, const std::string& base_dir) {
  MockScript script;
  if (value.is_null()) return script;
  if (value.is_string()) {
    script.default_mode = value.get<std::string>();
    return script;
  }
  if (!value.is_object()) ThrowValidation("mock script must be a string or object");
  try {
    script.default_mode = value.value("default", script.default_mode);
    if (value.contains("sequence")) {
      script.sequence = value["sequence"].get<std::vector<std::string>>();
    }
    if (value.contains("per_record")) {
      script.per_record =
          value["per_record"].get<std::map<std::string, std::vector<std::string>>>();
    }
    if (value.contains("responses")) {
      script.responses = value["responses"].get<std::map<std::string, std::string>>();
    }
    if (value.contains("responses_path")) {
      const std::string path =
          ResolvePath(base_dir, value["responses_path"].get<std::string>());
      for (const JsonlLine& line : ReadJsonl(path).lines) {
        if (!line.value) ThrowValidation(path + ": malformed JSON line");
        script.responses[line.value->at("record_id").get<std::string>()] =
            line.value->at("text").get<std::string>();
      }
    }
    script.latency_ms = value.value("latency_ms", 0.0);
  } catch (const Json::exception& e) {
    ThrowValidation(std::string("mock script: ") + e.what());
  }
  const auto check = [](const std::string& mode) {
    static const char* kModes[] = {"echo",     "null",    "repeat", "label",
                                   "response", "timeout", "error"};
    for (const char* m : kModes) {
      if (mode == m) return;
    }
    if (mode.starts_with("text:")) return;
    ThrowValidation("unknown mock mode '" + mode + "'");
  };
  check(script.default_mode);
  for (const auto& m : script.sequence) check(m);
  for (const auto& [id, modes] : script.per_record) {
    for (const auto& m : modes) check(m);
  }
  if (script.latency_ms < 0.0) ThrowValidation("mock latency_ms must be >= 0");
  return script;
}

MockBackend::MockBackend(std::string id, MockScript script)
    : id_(std::move(id)), script_(std::move(script)) {}

int MockBackend::total_calls() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return total_calls_;
}

int MockBackend::calls_for(const std::string& record_id) const {
  std::lock_guard<std::mutex> lock(mutex_);
  const auto it = calls_.find(record_id);
  return it == calls_.end() ? 0 : it->second;
}

GenerateResult MockBackend::Generate(const prompt::SynthesizedPrompt& prompt,
                                     const GenerationConfig& config) {
  std::size_t attempt = 0;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    attempt = static_cast<std::size_t>(calls_[prompt.record_id]++);
    ++total_calls_;
  }
  std::string mode = script_.default_mode;
  const auto per = script_.per_record.find(prompt.record_id);
  if (per != script_.per_record.end() && attempt < per->second.size()) {
    mode = per->second[attempt];
  } else if (attempt < script_.sequence.size()) {
    mode = script_.sequence[attempt];
  }

  GenerateResult result;
  result.latency = Millis(script_.latency_ms);
  const std::string& echo = prompt.input.empty() ? prompt.rendered_text : prompt.input;
  if (mode == "echo") {
    result.text = echo;
  } else if (mode == "null") {
    result.text.clear();
  } else if (mode == "repeat") {
    result.text = kRepeatText;
  } else if (mode == "label") {
    result.text = prompt.label.value_or("");
  } else if (mode == "response") {
    const auto it = script_.responses.find(prompt.record_id);
    if (it == script_.responses.end()) {
      throw BackendError(FailureKind::kBackendError,
                         "mock '" + id_ + "' has no scripted response for '" +
                             prompt.record_id + "'");
    }
    result.text = it->second;
  } else if (mode == "timeout") {
    result.text = echo;
    result.latency = config.request_timeout + Millis(1.0);
  } else if (mode == "error") {
    throw BackendError(FailureKind::kBackendError,
                       "mock '" + id_ + "' scripted error");
  } else {
    result.text = mode.substr(5);  // "text:"
  }
  return result;
}

}  // namespace radiogen::inference
