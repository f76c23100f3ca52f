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

#ifndef RADIOGEN_SELECTION_TRAINER_H_
#define RADIOGEN_SELECTION_TRAINER_H_

#include <memory>
#include <set>
#include <string>

#include "inference/backends.h"
#include "selection/training_job.h"

namespace radiogen::selection {

// What a trainer hands back for a finished job: where the adapter went and
// how to reach a backend serving the tuned model.
struct TrainedModel {
  std::string adapter_ref;
  inference::BackendConfig backend;
};

// Reply document shared by the command and HTTP trainers:
//   {"adapter_ref": "...", "backend": {<backend config>}}
// or {"error": "..."} for a failed job.
TrainedModel TrainedModelFromJson(const Json& reply, const std::string& base_dir);

class Trainer {
 public:
  virtual ~Trainer() = default;
  // `spec_path` holds the serialized spec. Throws Error(kStage) when the job
  // fails and Error(kBackend) when the trainer cannot be reached.
  virtual TrainedModel Submit(const TrainingJobSpec& spec,
                              const std::string& spec_path) = 0;
};

// Desk-scale stand-in. The stub file maps template ids to backend configs:
//   {"backends": {"1": {...}, ...}, "fail": [3]}
// A job for a template listed in "fail" (or with no mapping) fails.
class StubTrainer final : public Trainer {
 public:
  explicit StubTrainer(const std::string& path);
  TrainedModel Submit(const TrainingJobSpec& spec,
                      const std::string& spec_path) override;

 private:
  std::string base_dir_;
  std::map<int, Json> backends_;
  std::set<int> fail_;
};

// Runs `<command> <spec_path>` through the shell and parses stdout.
class CommandTrainer final : public Trainer {
 public:
  explicit CommandTrainer(std::string command);
  TrainedModel Submit(const TrainingJobSpec& spec,
                      const std::string& spec_path) override;

 private:
  std::string command_;
};

// POSTs the spec JSON to `url` and parses the response body.
class HttpTrainer final : public Trainer {
 public:
  explicit HttpTrainer(const std::string& url);
  TrainedModel Submit(const TrainingJobSpec& spec,
                      const std::string& spec_path) override;

 private:
  std::string origin_;
  std::string path_;
};

// "stub:<path>", an http(s) URL, or otherwise a command line.
std::unique_ptr<Trainer> MakeTrainer(const std::string& handle);

std::string ShellQuote(const std::string& s);

}  // namespace radiogen::selection

#endif  // RADIOGEN_SELECTION_TRAINER_H_
