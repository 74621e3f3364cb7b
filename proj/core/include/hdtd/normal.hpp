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

namespace hdtd {

// Standard normal distribution function, evaluated through erfc so that both
// tails keep full relative precision.
double NormalCdf(double x);

// 1 - NormalCdf(x), computed directly rather than by subtraction.
double NormalUpperTail(double x);

// Inverse of NormalCdf for p in (0, 1). Rational initial approximation
// refined by Halley steps against NormalCdf. Throws kInvalidArgument outside
// (0, 1).
double NormalQuantile(double p);

}  // namespace hdtd
