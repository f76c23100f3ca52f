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

#include "common/error.h"

namespace radiogen {

void ThrowValidation(const std::string& message) {
  throw Error(ErrorKind::kValidation, message);
}

void ThrowIo(const std::string& message) {
  throw Error(ErrorKind::kIo, message);
}

void ThrowStage(const std::string& message) {
  throw Error(ErrorKind::kStage, message);
}

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kValidation:
      return "validation";
    case ErrorKind::kIo:
      return "io";
    case ErrorKind::kStage:
      return "stage";
    case ErrorKind::kBackend:
      return "backend";
  }
  return "unknown";
}

}  // namespace radiogen
