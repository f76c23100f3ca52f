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

#include <chrono>

#include "httplib.h"
#include "inference/backends.h"

namespace radiogen::inference {

HttpChatBackend::HttpChatBackend(std::string id, std::string base_url,
                                 std::string model_name, std::string api_key)
    : id_(std::move(id)), model_name_(std::move(model_name)),
      api_key_(std::move(api_key)) {
  const std::size_t scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) {
    ThrowValidation("backend '" + id_ + "': base_url needs a scheme: " + base_url);
  }
  const std::string scheme = base_url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    ThrowValidation("backend '" + id_ + "': unsupported scheme '" + scheme + "'");
  }
  const std::size_t path_start = base_url.find('/', scheme_end + 3);
  origin_ = base_url.substr(0, path_start);
  if (path_start != std::string::npos) path_prefix_ = base_url.substr(path_start);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

GenerateResult HttpChatBackend::Generate(const prompt::SynthesizedPrompt& prompt,
                                         const GenerationConfig& config) {
  Json request;
  request["model"] = model_name_;
  request["messages"] = Json::array({{{"role", "user"}, {"content", prompt.rendered_text}}});
  request["temperature"] = config.temperature;
  request["top_k"] = config.top_k;
  request["top_p"] = config.top_p;
  request["max_tokens"] = config.max_new_tokens;
  request["stream"] = false;

  // One client per call keeps concurrent Generate() calls independent.
  httplib::Client client(origin_);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      config.request_timeout);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  const auto start = std::chrono::steady_clock::now();
  const httplib::Result response =
      client.Post(path_prefix_ + "/chat/completions", headers, request.dump(),
                  "application/json");
  const Millis elapsed = std::chrono::steady_clock::now() - start;

  if (!response) {
    const httplib::Error err = response.error();
    const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                           elapsed >= config.request_timeout;
    throw BackendError(timed_out ? FailureKind::kTimeout : FailureKind::kBackendError,
                       "backend '" + id_ + "': " + httplib::to_string(err));
  }
  if (response->status < 200 || response->status >= 300) {
    throw BackendError(FailureKind::kBackendError,
                       "backend '" + id_ + "': HTTP " +
                           std::to_string(response->status));
  }
  GenerateResult result;
  result.latency = elapsed;
  try {
    const Json body = Json::parse(response->body);
    const Json& choice = body.at("choices").at(0);
    if (choice.contains("message")) {
      const Json& content = choice["message"].at("content");
      result.text = content.is_null() ? "" : content.get<std::string>();
    } else {
      result.text = choice.at("text").get<std::string>();
    }
  } catch (const Json::exception& e) {
    throw BackendError(FailureKind::kBackendError,
                       "backend '" + id_ + "': malformed response: " + e.what());
  }
  return result;
}

}  // namespace radiogen::inference
