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

#include "hdtd/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <yaml-cpp/yaml.h>

#include "hdtd/error.hpp"
#include "hdtd/hypothesis_tests.hpp"
#include "hdtd/rng.hpp"

namespace hdtd {
namespace {

[[noreturn]] void BadConfig(const std::string& message) {
  throw Error(ErrorKind::kInvalidConfig, message);
}

enum class ReplicateOutcome : unsigned char { kAccept, kReject, kDegenerate };

}  // namespace

std::string_view TestKindName(TestKind kind) {
  return kind == TestKind::kSphericity ? "sphericity" : "identity";
}

std::string_view ScenarioName(Scenario scenario) {
  return scenario == Scenario::kGaussian ? "gaussian" : "gamma";
}

std::string_view RowConfigName(RowConfig config) {
  switch (config) {
    case RowConfig::kIdentity:
      return "identity";
    case RowConfig::kDiagonal:
      return "diag8";
    case RowConfig::kCompoundSymmetry:
      return "cs";
    case RowConfig::kTridiagonal:
      return "tridiag";
  }
  return "unknown";
}

TestKind ParseTestKind(std::string_view name) {
  if (name == "sphericity") return TestKind::kSphericity;
  if (name == "identity") return TestKind::kIdentity;
  BadConfig("unknown test '" + std::string(name) + "'");
}

Scenario ParseScenario(std::string_view name) {
  if (name == "gaussian") return Scenario::kGaussian;
  if (name == "gamma") return Scenario::kGamma;
  BadConfig("unknown scenario '" + std::string(name) + "'");
}

RowConfig ParseRowConfig(std::string_view name) {
  if (name == "identity") return RowConfig::kIdentity;
  if (name == "diag8") return RowConfig::kDiagonal;
  if (name == "cs") return RowConfig::kCompoundSymmetry;
  if (name == "tridiag") return RowConfig::kTridiagonal;
  BadConfig("unknown row configuration '" + std::string(name) + "'");
}

CovConfig RowCovConfig(RowConfig config, std::size_t r) {
  switch (config) {
    case RowConfig::kIdentity:
      return CovConfig::Identity(r);
    case RowConfig::kDiagonal:
      return CovConfig::DiagonalHeteroskedastic(r);
    case RowConfig::kCompoundSymmetry:
      return CovConfig::CompoundSymmetry(r, 0.9, 0.2);
    case RowConfig::kTridiagonal:
      return CovConfig::Tridiagonal(r, 0.1);
  }
  BadConfig("unknown row configuration");
}

InnovationLaw ScenarioLaw(Scenario scenario) {
  return scenario == Scenario::kGaussian ? InnovationLaw::Gaussian()
                                         : InnovationLaw::StandardizedGamma(4.0, 0.5);
}

ModelSpec CellModel(const CellSpec& cell, std::uint64_t seed) {
  ModelSpec spec;
  spec.n = cell.n;
  spec.r = cell.r;
  spec.c = cell.c;
  spec.row_cov = RowCovConfig(cell.row_config, cell.r);
  spec.col_cov = CovConfig::Ar1(cell.c, cell.rho);
  spec.col_trace_normalize = true;
  spec.law = ScenarioLaw(cell.scenario);
  spec.seed = seed;
  return spec;
}

std::uint64_t CellSeed(std::uint64_t seed, const CellSpec& cell) {
  std::uint64_t h = MixSeed(seed, cell.n);
  h = MixSeed(h, cell.r);
  h = MixSeed(h, cell.c);
  h = MixSeed(h, std::bit_cast<std::uint64_t>(cell.rho));
  h = MixSeed(h, static_cast<std::uint64_t>(cell.scenario));
  h = MixSeed(h, static_cast<std::uint64_t>(cell.row_config));
  return MixSeed(h, static_cast<std::uint64_t>(cell.test));
}

CellResult RunCell(const CellSpec& cell, std::size_t replicates,
                   std::uint64_t seed, double alpha, std::size_t threads) {
  if (replicates == 0) BadConfig("replicates must be >= 1");
  if (cell.n < 4) BadConfig("cells need N >= 4");
  const auto start = std::chrono::steady_clock::now();

  const ModelSampler sampler(CellModel(cell, seed));
  const NullSpec null = cell.test == TestKind::kSphericity
                            ? NullSpec::Sphericity(Target::kRows, alpha)
                            : NullSpec::Identity(Target::kRows, alpha);

  std::vector<ReplicateOutcome> outcomes(replicates);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < replicates; k = next++) {
      try {
        const TestOutcome out = RunTest(sampler.Draw(k), null);
        outcomes[k] = out.reject ? ReplicateOutcome::kReject
                                 : ReplicateOutcome::kAccept;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kDegenerateSample) throw;
        outcomes[k] = ReplicateOutcome::kDegenerate;
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, replicates);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  }

  CellResult result;
  result.cell = cell;
  result.alpha = alpha;
  result.replicates = replicates;
  for (const ReplicateOutcome o : outcomes) {
    result.rejections += o == ReplicateOutcome::kReject;
    result.degenerate_count += o == ReplicateOutcome::kDegenerate;
  }
  const double reps = static_cast<double>(replicates);
  result.rejection_rate = static_cast<double>(result.rejections) / reps;
  result.mc_standard_error =
      std::sqrt(result.rejection_rate * (1.0 - result.rejection_rate) / reps);
  result.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return result;
}

std::vector<CellSpec> ExpandGrid(const ExperimentConfig& cfg) {
  std::vector<CellSpec> cells;
  for (const Scenario scenario : cfg.scenarios) {
    for (const RowConfig row : cfg.row_configs) {
      for (const std::size_t n : cfg.n_values) {
        for (const std::size_t c : cfg.c_values) {
          for (const double rho : cfg.rho_values) {
            for (const std::size_t r : cfg.r_values) {
              cells.push_back({n, r, c, rho, scenario, row, cfg.test});
            }
          }
        }
      }
    }
  }
  cells.insert(cells.end(), cfg.cells.begin(), cfg.cells.end());
  if (cells.empty()) BadConfig("experiment grid is empty");
  for (const CellSpec& cell : cells) {
    if (cell.n < 4) BadConfig("every grid cell needs N >= 4");
    if (cell.r == 0 || cell.c == 0) BadConfig("grid dimensions must be positive");
    if (!(std::abs(cell.rho) < 1.0)) BadConfig("grid rho values need |rho| < 1");
  }
  return cells;
}

std::vector<CellResult> RunGrid(const ExperimentConfig& cfg,
                                const CellProgress& progress) {
  if (cfg.replicates == 0) BadConfig("replicates must be >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) BadConfig("alpha must lie in (0, 1)");
  const std::vector<CellSpec> cells = ExpandGrid(cfg);
  std::vector<CellResult> results;
  results.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    results.push_back(RunCell(cells[i], cfg.replicates, CellSeed(cfg.seed, cells[i]),
                              cfg.alpha, cfg.threads));
    if (progress) progress(results.back(), i, cells.size());
  }
  return results;
}

std::string ToCsv(const std::vector<CellResult>& results) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const CellResult& res : results) {
    const CellSpec& c = res.cell;
    os << TestKindName(c.test) << ',' << ScenarioName(c.scenario) << ','
       << RowConfigName(c.row_config) << ',' << c.n << ',' << c.r << ',' << c.c
       << ',' << c.rho << ',' << res.alpha << ',' << res.replicates << ','
       << res.rejections << ',' << std::setprecision(10) << res.rejection_rate
       << ',' << res.mc_standard_error << std::setprecision(6) << ','
       << res.degenerate_count << ',' << std::fixed << std::setprecision(1)
       << res.wall_ms << std::defaultfloat << std::setprecision(6) << '\n';
  }
  return os.str();
}

std::string ToTextTable(const std::vector<CellResult>& results) {
  using BlockKey = std::tuple<TestKind, RowConfig>;
  using RowKey = std::tuple<Scenario, std::size_t, std::size_t>;
  using ColKey = std::tuple<double, std::size_t>;

  std::set<double> rhos;
  std::set<std::size_t> rs;
  std::map<BlockKey, std::map<RowKey, std::map<ColKey, const CellResult*>>> blocks;
  for (const CellResult& res : results) {
    const CellSpec& c = res.cell;
    rhos.insert(c.rho);
    rs.insert(c.r);
    blocks[{c.test, c.row_config}][{c.scenario, c.n, c.c}][{c.rho, c.r}] = &res;
  }

  constexpr int kCell = 15;
  std::ostringstream os;
  os << std::left << std::setw(10) << "scenario" << std::right << std::setw(5)
     << "N" << std::setw(5) << "c";
  for (const double rho : rhos) {
    for (const std::size_t r : rs) {
      std::ostringstream head;
      head << "rho=" << rho << ",r=" << r;
      os << std::setw(kCell) << head.str();
    }
  }
  os << '\n';

  for (const auto& [block, rows] : blocks) {
    os << "# " << TestKindName(std::get<0>(block)) << " test, row config "
       << RowConfigName(std::get<1>(block)) << '\n';
    for (const auto& [row, cols] : rows) {
      os << std::left << std::setw(10) << ScenarioName(std::get<0>(row))
         << std::right << std::setw(5) << std::get<1>(row) << std::setw(5)
         << std::get<2>(row);
      for (const double rho : rhos) {
        for (const std::size_t r : rs) {
          const auto it = cols.find({rho, r});
          std::ostringstream entry;
          if (it == cols.end()) {
            entry << "-";
          } else {
            entry << std::fixed << std::setprecision(3) << it->second->rejection_rate
                  << " (" << it->second->mc_standard_error << ")";
            if (it->second->flagged()) entry << '!';
          }
          os << std::setw(kCell) << entry.str();
        }
      }
      os << '\n';
    }
  }
  return os.str();
}

namespace {

template <typename T>
std::vector<T> ReadList(const YAML::Node& node, const char* key) {
  std::vector<T> out;
  const YAML::Node list = node[key];
  if (!list) return out;
  if (!list.IsSequence()) BadConfig(std::string("'") + key + "' must be a list");
  for (const YAML::Node& item : list) out.push_back(item.as<T>());
  return out;
}

template <typename T, typename Parse>
std::vector<T> ReadNames(const YAML::Node& node, const char* key, Parse parse) {
  std::vector<T> out;
  for (const std::string& name : ReadList<std::string>(node, key)) {
    out.push_back(parse(name));
  }
  return out;
}

}  // namespace

ExperimentConfig ParseExperimentConfig(const std::string& yaml_text) {
  ExperimentConfig cfg;
  try {
    const YAML::Node root = YAML::Load(yaml_text);
    if (!root.IsMap()) BadConfig("experiment config must be a mapping");
    if (root["test"]) cfg.test = ParseTestKind(root["test"].as<std::string>());
    if (root["alpha"]) cfg.alpha = root["alpha"].as<double>();
    if (root["replicates"]) {
      const long long reps = root["replicates"].as<long long>();
      if (reps < 1) BadConfig("replicates must be >= 1");
      cfg.replicates = static_cast<std::size_t>(reps);
    }
    if (root["seed"]) cfg.seed = root["seed"].as<std::uint64_t>();
    if (root["threads"]) {
      const long long threads = root["threads"].as<long long>();
      if (threads < 1) BadConfig("threads must be >= 1");
      cfg.threads = static_cast<std::size_t>(threads);
    }
    if (const YAML::Node grid = root["grid"]) {
      if (!grid.IsMap()) BadConfig("'grid' must be a mapping");
      cfg.n_values = ReadList<std::size_t>(grid, "n");
      cfg.r_values = ReadList<std::size_t>(grid, "r");
      cfg.c_values = ReadList<std::size_t>(grid, "c");
      cfg.rho_values = ReadList<double>(grid, "rho");
      cfg.scenarios = ReadNames<Scenario>(grid, "scenarios", ParseScenario);
      cfg.row_configs = ReadNames<RowConfig>(grid, "row_configs", ParseRowConfig);
    }
    if (const YAML::Node cells = root["cells"]) {
      if (!cells.IsSequence()) BadConfig("'cells' must be a list");
      for (const YAML::Node& item : cells) {
        CellSpec cell;
        cell.n = item["n"].as<std::size_t>();
        cell.r = item["r"].as<std::size_t>();
        cell.c = item["c"].as<std::size_t>();
        cell.rho = item["rho"].as<double>();
        cell.scenario = item["scenario"]
                            ? ParseScenario(item["scenario"].as<std::string>())
                            : Scenario::kGaussian;
        cell.row_config = item["row_config"]
                              ? ParseRowConfig(item["row_config"].as<std::string>())
                              : RowConfig::kIdentity;
        cell.test = cfg.test;
        cfg.cells.push_back(cell);
      }
    }
  } catch (const YAML::Exception& e) {
    BadConfig(std::string("config parse error: ") + e.what());
  }
  ExpandGrid(cfg);  // validates
  return cfg;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) BadConfig("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return ParseExperimentConfig(text.str());
}

}  // namespace hdtd
