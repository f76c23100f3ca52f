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

#ifndef RADIOGEN_COMMON_ERROR_H_
#define RADIOGEN_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace radiogen {

// Coarse failure classes. The C API and the CLI exit codes are derived from
// these, so keep the set small.
enum class ErrorKind {
  kValidation,  // bad input, config or precondition violation
  kIo,          // unreadable / unwritable file
  kStage,       // a pipeline stage could not complete
  kBackend,     // transport or remote failure talking to a backend/trainer
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void ThrowValidation(const std::string& message);
[[noreturn]] void ThrowIo(const std::string& message);
[[noreturn]] void ThrowStage(const std::string& message);

const char* ErrorKindName(ErrorKind kind);

}  // namespace radiogen

#endif  // RADIOGEN_COMMON_ERROR_H_
