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

// Command-line front end. RunCli is separate from main() so tests can drive
// it with captured streams.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hdtd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitDimensionMismatch = 3;
inline constexpr int kExitDegenerate = 4;

// `args` excludes the program name. Errors are reported to `err` as a single
// line "hdtd: error[<Kind>]: <message>".
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace hdtd::cli
