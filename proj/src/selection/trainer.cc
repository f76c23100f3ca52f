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

#include "selection/trainer.h"

#include <cstdio>
#include <sys/wait.h>

#include "httplib.h"

namespace radiogen::selection {

TrainedModel TrainedModelFromJson(const Json& reply, const std::string& base_dir) {
  if (!reply.is_object()) ThrowStage("trainer reply is not a JSON object");
  if (reply.contains("error")) {
    ThrowStage("trainer reported failure: " + reply["error"].dump());
  }
  TrainedModel model;
  try {
    model.adapter_ref = reply.value("adapter_ref", std::string());
    model.backend = inference::BackendConfigFromJson(reply.at("backend"), base_dir);
  } catch (const Json::exception& e) {
    ThrowStage(std::string("malformed trainer reply: ") + e.what());
  } catch (const Error& e) {
    ThrowStage(std::string("trainer reply: ") + e.what());
  }
  return model;
}

StubTrainer::StubTrainer(const std::string& path)
    : base_dir_(inference::DirectoryOf(path)) {
  const Json doc = ParseJsonFile(path);
  try {
    for (const auto& [key, value] : doc.at("backends").items()) {
      std::size_t used = 0;
      const int id = std::stoi(key, &used);
      if (used != key.size()) ThrowValidation("stub trainer: bad template id '" + key + "'");
      backends_[id] = value;
    }
    if (doc.contains("fail")) {
      for (const Json& id : doc["fail"]) fail_.insert(id.get<int>());
    }
  } catch (const Json::exception& e) {
    ThrowValidation("stub trainer file '" + path + "': " + e.what());
  } catch (const std::logic_error& e) {
    ThrowValidation("stub trainer file '" + path + "': bad template id");
  }
}

TrainedModel StubTrainer::Submit(const TrainingJobSpec& spec, const std::string&) {
  const int id = spec.template_id.value_or(0);
  if (fail_.contains(id)) {
    ThrowStage("stub trainer: job " + spec.job_id + " for template " +
               std::to_string(id) + " failed");
  }
  const auto it = backends_.find(id);
  if (it == backends_.end()) {
    ThrowStage("stub trainer: no backend mapped for template " + std::to_string(id));
  }
  TrainedModel model;
  model.adapter_ref = spec.output_adapter_ref;
  Json backend = it->second;
  if (!backend.contains("backend_id")) backend["backend_id"] = "template-" + std::to_string(id);
  model.backend = inference::BackendConfigFromJson(backend, base_dir_);
  return model;
}

std::string ShellQuote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  out += '\'';
  return out;
}

CommandTrainer::CommandTrainer(std::string command) : command_(std::move(command)) {
  if (command_.empty()) ThrowValidation("empty trainer command");
}

TrainedModel CommandTrainer::Submit(const TrainingJobSpec& spec,
                                    const std::string& spec_path) {
  const std::string line = command_ + " " + ShellQuote(spec_path);
  FILE* pipe = ::popen(line.c_str(), "r");
  if (pipe == nullptr) {
    throw Error(ErrorKind::kBackend, "cannot start trainer command: " + command_);
  }
  std::string output;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof(buf), pipe)) > 0) output.append(buf, got);
  const int status = ::pclose(pipe);
  if (status == -1 || !WIFEXITED(status)) {
    throw Error(ErrorKind::kBackend, "trainer command did not exit normally");
  }
  if (WEXITSTATUS(status) == 127) {
    throw Error(ErrorKind::kBackend, "trainer command not found: " + command_);
  }
  if (WEXITSTATUS(status) != 0) {
    ThrowStage("trainer command exited with status " +
               std::to_string(WEXITSTATUS(status)) + " for job " + spec.job_id);
  }
  Json reply;
  try {
    reply = Json::parse(output);
  } catch (const Json::exception& e) {
    ThrowStage("trainer command printed invalid JSON for job " + spec.job_id);
  }
  return TrainedModelFromJson(reply, inference::DirectoryOf(spec_path));
}

HttpTrainer::HttpTrainer(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) ThrowValidation("trainer URL needs a scheme: " + url);
  const std::size_t path_start = url.find('/', scheme_end + 3);
  origin_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
}

TrainedModel HttpTrainer::Submit(const TrainingJobSpec& spec,
                                 const std::string& spec_path) {
  httplib::Client client(origin_);
  client.set_read_timeout(std::chrono::hours(72));
  const httplib::Result response =
      client.Post(path_, JobSpecToJson(spec).dump(), "application/json");
  if (!response) {
    throw Error(ErrorKind::kBackend,
                "trainer unreachable at " + origin_ + ": " + httplib::to_string(response.error()));
  }
  if (response->status < 200 || response->status >= 300) {
    ThrowStage("trainer returned HTTP " + std::to_string(response->status) +
               " for job " + spec.job_id);
  }
  Json reply;
  try {
    reply = Json::parse(response->body);
  } catch (const Json::exception&) {
    ThrowStage("trainer returned invalid JSON for job " + spec.job_id);
  }
  return TrainedModelFromJson(reply, inference::DirectoryOf(spec_path));
}

std::unique_ptr<Trainer> MakeTrainer(const std::string& handle) {
  if (handle.rfind("stub:", 0) == 0) return std::make_unique<StubTrainer>(handle.substr(5));
  if (handle.rfind("http://", 0) == 0 || handle.rfind("https://", 0) == 0) {
    return std::make_unique<HttpTrainer>(handle);
  }
  return std::make_unique<CommandTrainer>(handle);
}

}  // namespace radiogen::selection
