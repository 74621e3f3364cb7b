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

// Text formats for matrix samples: the "matrix stack" format and long-form
// CSV. Values are written with 17 significant digits so doubles round-trip.

#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "hdtd/matrix_core.hpp"

namespace hdtd {

// Parses either format, sniffing the first non-empty line. Throws kParseError
// for malformed content and kDimensionMismatch when declared and observed
// shapes disagree.
MatrixSample ReadSample(std::istream& in);
MatrixSample ReadSampleFile(const std::string& path);

MatrixSample ReadMatrixStack(std::istream& in);
MatrixSample ReadLongCsv(std::istream& in);

void WriteMatrixStack(const MatrixSample& s, std::ostream& out);
void WriteLongCsv(const MatrixSample& s, std::ostream& out);
void WriteSampleFile(const MatrixSample& s, const std::string& path);

// A plain comma-separated numeric matrix, one row per line.
Matrix ReadCsvMatrix(std::istream& in);
Matrix ReadCsvMatrixFile(const std::string& path);
void WriteCsvMatrix(const Matrix& m, std::ostream& out);

}  // namespace hdtd
