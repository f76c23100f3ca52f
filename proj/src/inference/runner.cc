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

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "inference/generation.h"

namespace radiogen::inference {

std::vector<GenerationOutcome> RunInference(
    Backend& backend, const std::vector<prompt::SynthesizedPrompt>& prompts,
    const GenerationConfig& config, std::size_t parallel) {
  ValidateGenerationConfig(config);
  std::vector<GenerationOutcome> outcomes(prompts.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  const auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= prompts.size()) return;
      try {
        outcomes[i] = GenerateChecked(backend, prompts[i], config);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(prompts.size());
        return;
      }
    }
  };

  const std::size_t n_workers =
      std::clamp<std::size_t>(parallel, 1, std::max<std::size_t>(1, prompts.size()));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  std::stable_sort(outcomes.begin(), outcomes.end(),
                   [](const GenerationOutcome& a, const GenerationOutcome& b) {
                     if (a.record_id != b.record_id) return a.record_id < b.record_id;
                     return a.template_id < b.template_id;
                   });
  return outcomes;
}

}  // namespace radiogen::inference
