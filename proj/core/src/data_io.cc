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

#include "hdtd/data_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>
#include <string_view>
#include <vector>

#include "hdtd/error.hpp"

namespace hdtd {
namespace {

[[noreturn]] void Malformed(std::size_t line_no, const std::string& what) {
  throw Error(ErrorKind::kParseError,
              "line " + std::to_string(line_no) + ": " + what);
}

[[noreturn]] void Mismatch(const std::string& what) {
  throw Error(ErrorKind::kDimensionMismatch, what);
}

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double ParseDouble(std::string_view field, std::size_t line_no) {
  field = Trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    Malformed(line_no, "cannot parse '" + std::string(field) + "' as a number");
  }
  if (!std::isfinite(value)) Malformed(line_no, "non-finite value");
  return value;
}

std::size_t ParseIndex(std::string_view field, std::size_t line_no) {
  field = Trim(field);
  std::size_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    Malformed(line_no, "cannot parse '" + std::string(field) + "' as an index");
  }
  return value;
}

std::vector<std::string_view> SplitCommas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void WriteNumber(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

std::ifstream OpenOrThrow(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kParseError, "cannot open '" + path + "'");
  return in;
}

}  // namespace

MatrixSample ReadMatrixStack(std::istream& in) {
  static const std::regex kHeader(
      R"(#\s*hdtd\s+v1\s+N=(\d+)\s+r=(\d+)\s+c=(\d+)\s*)");
  std::string line;
  std::size_t line_no = 0;
  std::smatch m;
  while (std::getline(in, line)) {
    ++line_no;
    if (!Trim(line).empty()) break;
  }
  const std::string header(Trim(line));
  if (!std::regex_match(header, m, kHeader)) {
    Malformed(line_no, "expected header '# hdtd v1 N=<n> r=<r> c=<c>'");
  }
  const std::size_t n = std::stoul(m[1]);
  const std::size_t r = std::stoul(m[2]);
  const std::size_t c = std::stoul(m[3]);
  if (n == 0 || r == 0 || c == 0) Malformed(line_no, "dimensions must be positive");

  std::vector<Matrix> blocks;
  Matrix current(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = Trim(line);
    if (body.empty()) {
      if (row != 0) {
        Mismatch("block " + std::to_string(blocks.size() + 1) + " has " +
                 std::to_string(row) + " rows, header declares r=" +
                 std::to_string(r));
      }
      continue;
    }
    if (blocks.size() == n) {
      Mismatch("more than the declared N=" + std::to_string(n) + " blocks");
    }
    const auto fields = SplitCommas(body);
    if (fields.size() != c) {
      Mismatch("line " + std::to_string(line_no) + " has " +
               std::to_string(fields.size()) + " values, header declares c=" +
               std::to_string(c));
    }
    for (std::size_t b = 0; b < c; ++b) {
      current(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(b)) =
          ParseDouble(fields[b], line_no);
    }
    if (++row == r) {
      blocks.push_back(current);
      row = 0;
    }
  }
  if (row != 0) {
    Mismatch("final block has " + std::to_string(row) +
             " rows, header declares r=" + std::to_string(r));
  }
  if (blocks.size() != n) {
    Mismatch("found " + std::to_string(blocks.size()) +
             " blocks, header declares N=" + std::to_string(n));
  }
  return MatrixSample(std::move(blocks));
}

MatrixSample ReadLongCsv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!Trim(line).empty()) break;
  }
  if (Trim(line) != "sample,row,col,value") {
    Malformed(line_no, "expected header 'sample,row,col,value'");
  }
  struct Entry {
    std::size_t i, a, b;
    double v;
  };
  std::vector<Entry> entries;
  std::size_t n = 0, r = 0, c = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = Trim(line);
    if (body.empty()) continue;
    const auto fields = SplitCommas(body);
    if (fields.size() != 4) Malformed(line_no, "expected 4 fields");
    Entry e{ParseIndex(fields[0], line_no), ParseIndex(fields[1], line_no),
            ParseIndex(fields[2], line_no), ParseDouble(fields[3], line_no)};
    if (e.i == 0 || e.a == 0 || e.b == 0) {
      Malformed(line_no, "indices are 1-based");
    }
    n = std::max(n, e.i);
    r = std::max(r, e.a);
    c = std::max(c, e.b);
    entries.push_back(e);
  }
  if (entries.empty()) Malformed(line_no, "no data rows");
  if (entries.size() != n * r * c) {
    Mismatch("long-form CSV has " + std::to_string(entries.size()) +
             " rows, expected N*r*c = " + std::to_string(n * r * c));
  }
  std::vector<Matrix> blocks(n, Matrix(static_cast<Eigen::Index>(r),
                                       static_cast<Eigen::Index>(c)));
  std::vector<bool> seen(n * r * c, false);
  for (const Entry& e : entries) {
    const std::size_t key = ((e.i - 1) * r + (e.a - 1)) * c + (e.b - 1);
    if (seen[key]) {
      Mismatch("duplicate entry for sample " + std::to_string(e.i) + ", row " +
               std::to_string(e.a) + ", col " + std::to_string(e.b));
    }
    seen[key] = true;
    blocks[e.i - 1](static_cast<Eigen::Index>(e.a - 1),
                    static_cast<Eigen::Index>(e.b - 1)) = e.v;
  }
  return MatrixSample(std::move(blocks));
}

MatrixSample ReadSample(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  std::istringstream body(text);
  std::string line;
  while (std::getline(body, line) && Trim(line).empty()) {
  }
  body.clear();
  body.seekg(0);
  if (Trim(line).starts_with("sample,")) return ReadLongCsv(body);
  return ReadMatrixStack(body);
}

MatrixSample ReadSampleFile(const std::string& path) {
  std::ifstream in = OpenOrThrow(path);
  return ReadSample(in);
}

void WriteMatrixStack(const MatrixSample& s, std::ostream& out) {
  out << "# hdtd v1 N=" << s.n() << " r=" << s.rows() << " c=" << s.cols()
      << '\n';
  for (std::size_t i = 0; i < s.n(); ++i) {
    if (i > 0) out << '\n';
    WriteCsvMatrix(s[i], out);
  }
}

void WriteLongCsv(const MatrixSample& s, std::ostream& out) {
  out << "sample,row,col,value\n";
  for (std::size_t i = 0; i < s.n(); ++i) {
    for (Eigen::Index a = 0; a < s[i].rows(); ++a) {
      for (Eigen::Index b = 0; b < s[i].cols(); ++b) {
        out << i + 1 << ',' << a + 1 << ',' << b + 1 << ',';
        WriteNumber(out, s[i](a, b));
        out << '\n';
      }
    }
  }
}

void WriteSampleFile(const MatrixSample& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::kInvalidArgument, "cannot write '" + path + "'");
  }
  WriteMatrixStack(s, out);
}

Matrix ReadCsvMatrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = Trim(line);
    if (body.empty() || body.front() == '#') continue;
    std::vector<double> row;
    for (const auto field : SplitCommas(body)) {
      row.push_back(ParseDouble(field, line_no));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      Mismatch("line " + std::to_string(line_no) + " has " +
               std::to_string(row.size()) + " values, expected " +
               std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) Malformed(line_no, "empty matrix file");
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < rows[a].size(); ++b) {
      m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = rows[a][b];
    }
  }
  return m;
}

Matrix ReadCsvMatrixFile(const std::string& path) {
  std::ifstream in = OpenOrThrow(path);
  return ReadCsvMatrix(in);
}

void WriteCsvMatrix(const Matrix& m, std::ostream& out) {
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    for (Eigen::Index b = 0; b < m.cols(); ++b) {
      if (b > 0) out << ',';
      WriteNumber(out, m(a, b));
    }
    out << '\n';
  }
}

}  // namespace hdtd
