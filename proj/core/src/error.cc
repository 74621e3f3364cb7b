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

#include "hdtd/error.hpp"

namespace hdtd {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
      return "InvalidArgument";
    case ErrorKind::kNotPositiveSemiDefinite:
      return "NotPositiveSemiDefinite";
    case ErrorKind::kSingularMatrix:
      return "SingularMatrix";
    case ErrorKind::kSampleTooSmall:
      return "SampleTooSmall";
    case ErrorKind::kDegenerateSample:
      return "DegenerateSample";
    case ErrorKind::kNonpositiveScale:
      return "NonpositiveScale";
    case ErrorKind::kNullAlternative:
      return "NullAlternative";
    case ErrorKind::kInvalidConfig:
      return "InvalidConfig";
    case ErrorKind::kParseError:
      return "ParseError";
    case ErrorKind::kDimensionMismatch:
      return "DimensionMismatch";
  }
  return "Unknown";
}

}  // namespace hdtd
