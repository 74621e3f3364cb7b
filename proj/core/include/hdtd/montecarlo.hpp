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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "hdtd/simulation.hpp"

namespace hdtd {

enum class TestKind { kSphericity, kIdentity };
enum class Scenario { kGaussian, kGamma };

// The four row-covariance configurations of the simulation design.
enum class RowConfig { kIdentity, kDiagonal, kCompoundSymmetry, kTridiagonal };

std::string_view TestKindName(TestKind kind);
std::string_view ScenarioName(Scenario scenario);
std::string_view RowConfigName(RowConfig config);
TestKind ParseTestKind(std::string_view name);
Scenario ParseScenario(std::string_view name);
RowConfig ParseRowConfig(std::string_view name);

CovConfig RowCovConfig(RowConfig config, std::size_t r);
InnovationLaw ScenarioLaw(Scenario scenario);

// One point of the design: Sigma_C = AR1(rho) (c x c), Sigma_R from
// `row_config`, innovations from `scenario`.
struct CellSpec {
  std::size_t n = 0;
  std::size_t r = 0;
  std::size_t c = 0;
  double rho = 0.0;
  Scenario scenario = Scenario::kGaussian;
  RowConfig row_config = RowConfig::kIdentity;
  TestKind test = TestKind::kSphericity;

  friend bool operator==(const CellSpec&, const CellSpec&) = default;
};

ModelSpec CellModel(const CellSpec& cell, std::uint64_t seed);

struct CellResult {
  CellSpec cell;
  double alpha = 0.05;
  std::size_t replicates = 0;
  std::size_t rejections = 0;
  // Replicates whose estimators failed (nonpositive T2N, ...). They count as
  // non-rejections in `rejection_rate` and are reported here.
  std::size_t degenerate_count = 0;
  double rejection_rate = 0.0;     // rejections / replicates
  double mc_standard_error = 0.0;  // sqrt(p (1 - p) / replicates)
  double wall_ms = 0.0;

  bool flagged() const { return degenerate_count > 0; }
};

struct ExperimentConfig {
  std::vector<std::size_t> n_values;
  std::vector<std::size_t> r_values;
  std::vector<std::size_t> c_values;
  std::vector<double> rho_values;
  std::vector<Scenario> scenarios;
  std::vector<RowConfig> row_configs;
  // Explicit cells, run after the cartesian grid.
  std::vector<CellSpec> cells;
  TestKind test = TestKind::kSphericity;
  double alpha = 0.05;
  std::size_t replicates = 1000;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

inline constexpr std::size_t kFastReplicates = 200;

// Seed for a cell, derived from the experiment seed and the cell coordinates,
// so a cell produces the same stream in every grid that contains it.
std::uint64_t CellSeed(std::uint64_t seed, const CellSpec& cell);

// Runs `replicates` independent datasets through the cell's test. Replicates
// are distributed over `threads` workers; the result does not depend on it.
CellResult RunCell(const CellSpec& cell, std::size_t replicates,
                   std::uint64_t seed, double alpha, std::size_t threads = 1);

// Cartesian grid in lexicographic order (scenario, row config, N, c, rho, r)
// followed by the explicit cells. kInvalidConfig if empty or any N < 4.
std::vector<CellSpec> ExpandGrid(const ExperimentConfig& cfg);

using CellProgress =
    std::function<void(const CellResult&, std::size_t index, std::size_t total)>;

std::vector<CellResult> RunGrid(const ExperimentConfig& cfg,
                                const CellProgress& progress = {});

inline constexpr std::string_view kCsvHeader =
    "test,scenario,row_config,N,r,c,rho,alpha,replicates,rejections,rate,mc_se,"
    "degenerate_count,wall_ms";

std::string ToCsv(const std::vector<CellResult>& results);

// Table layout: one block per (test, row config); rows (scenario, N, c);
// columns r within rho. Each entry is "rate (se)".
std::string ToTextTable(const std::vector<CellResult>& results);

// YAML experiment description; see configs/README.md for the schema.
ExperimentConfig ParseExperimentConfig(const std::string& yaml_text);
ExperimentConfig LoadExperimentConfig(const std::string& path);

}  // namespace hdtd
