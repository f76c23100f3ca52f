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

#include <cstdlib>
#include <filesystem>

#include "inference/backends.h"

namespace radiogen::inference {

std::string DirectoryOf(const std::string& path) {
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  return parent.empty() ? "." : parent.string();
}

std::string ResolvePath(const std::string& base_dir, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

BackendConfig BackendConfigFromJson(const Json& object,
                                    const std::string& base_dir) {
  if (!object.is_object()) ThrowValidation("backend config must be an object");
  if (object.contains("api_key")) {
    ThrowValidation(
        "backend config must not embed 'api_key'; name an environment "
        "variable with 'api_key_env'");
  }
  BackendConfig c;
  c.base_dir = base_dir;
  try {
    c.backend_id = object.at("backend_id").get<std::string>();
    c.kind = object.at("kind").get<std::string>();
    c.base_url = object.value("base_url", std::string());
    c.api_key_env = object.value("api_key_env", std::string());
    c.model_name = object.value("model_name", std::string());
    if (object.contains("script")) c.script = object["script"];
  } catch (const Json::exception& e) {
    ThrowValidation(std::string("backend config: ") + e.what());
  }
  if (c.backend_id.empty()) ThrowValidation("backend_id must not be empty");
  if (c.kind != "http" && c.kind != "mock") {
    ThrowValidation("backend '" + c.backend_id + "': kind must be http or mock");
  }
  if (c.kind == "http" && c.base_url.empty()) {
    ThrowValidation("backend '" + c.backend_id + "': http backends need base_url");
  }
  return c;
}

Json BackendConfigToJson(const BackendConfig& c) {
  Json j;
  j["backend_id"] = c.backend_id;
  j["kind"] = c.kind;
  if (!c.base_url.empty()) j["base_url"] = c.base_url;
  if (!c.api_key_env.empty()) j["api_key_env"] = c.api_key_env;
  if (!c.model_name.empty()) j["model_name"] = c.model_name;
  if (!c.script.is_null()) j["script"] = c.script;
  return j;
}

std::unique_ptr<Backend> MakeBackend(const BackendConfig& c) {
  if (c.kind == "mock") {
    return std::make_unique<MockBackend>(c.backend_id,
                                         MockScriptFromJson(c.script, c.base_dir));
  }
  std::string key;
  if (!c.api_key_env.empty()) {
    const char* value = std::getenv(c.api_key_env.c_str());
    if (value == nullptr) {
      ThrowValidation("backend '" + c.backend_id + "': environment variable " +
                      c.api_key_env + " is not set");
    }
    key = value;
  }
  return std::make_unique<HttpChatBackend>(c.backend_id, c.base_url, c.model_name,
                                           std::move(key));
}

InferenceConfig InferenceConfigFromJson(const Json& document,
                                        const std::string& base_dir) {
  InferenceConfig config;
  const Json* backends = nullptr;
  if (document.is_array()) {
    backends = &document;
  } else if (document.is_object() && document.contains("backends")) {
    backends = &document["backends"];
    if (document.contains("generation")) {
      config.generation = GenerationConfigFromJson(document["generation"]);
    }
  } else if (document.is_object()) {
    config.backends.push_back(BackendConfigFromJson(document, base_dir));
    return config;
  } else {
    ThrowValidation("backend config file must be an object or array");
  }
  if (!backends->is_array()) ThrowValidation("'backends' must be an array");
  for (const Json& entry : *backends) {
    config.backends.push_back(BackendConfigFromJson(entry, base_dir));
  }
  return config;
}

InferenceConfig LoadInferenceConfig(const std::string& path) {
  return InferenceConfigFromJson(ParseJsonFile(path), DirectoryOf(path));
}

const BackendConfig& FindBackend(const InferenceConfig& config,
                                 const std::string& backend_id) {
  for (const BackendConfig& b : config.backends) {
    if (b.backend_id == backend_id) return b;
  }
  ThrowValidation("no backend with id '" + backend_id + "' in config");
}

}  // namespace radiogen::inference
