// Copyright 2026 The hdtd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hdtd {

enum class ErrorKind {
  kInvalidArgument,
  kNotPositiveSemiDefinite,
  kSingularMatrix,
  kSampleTooSmall,
  kDegenerateSample,
  kNonpositiveScale,
  kNullAlternative,
  kInvalidConfig,
  kParseError,
  kDimensionMismatch,
};

std::string_view ErrorKindName(ErrorKind kind);

// All library failures are reported through this exception type; `kind()`
// lets callers (the CLI in particular) map failures to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hdtd
