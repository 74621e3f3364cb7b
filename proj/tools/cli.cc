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

#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hdtd/data_io.hpp"
#include "hdtd/error.hpp"
#include "hdtd/hypothesis_tests.hpp"
#include "hdtd/montecarlo.hpp"
#include "hdtd/simulation.hpp"

namespace hdtd::cli {
namespace {

struct TestArgs {
  std::string input;
  std::string target = "row";
  std::string null = "sphericity";
  std::string sigma0;
  std::string scale = "known-trace";
  double alpha = 0.05;
  bool centered = false;
  std::string output = "text";
};

struct SimulateArgs {
  std::size_t n = 0;
  std::size_t r = 0;
  std::size_t c = 0;
  std::string row_cov = "identity";
  std::string col_cov = "identity";
  std::string law = "gaussian";
  std::string mean = "zero";
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "stack";
};

struct McArgs {
  std::string config;
  std::optional<std::size_t> threads;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool fast = false;
};

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimensionMismatch:
      return kExitDimensionMismatch;
    case ErrorKind::kDegenerateSample:
    case ErrorKind::kSampleTooSmall:
    case ErrorKind::kNonpositiveScale:
      return kExitDegenerate;
    default:
      return kExitInvalidInput;
  }
}

void ReportError(std::ostream& err, std::string_view kind,
                 const std::string& message) {
  std::string flat = message;
  for (char& ch : flat) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  err << "hdtd: error[" << kind << "]: " << flat << '\n';
}

// identity | diag8 | cs | tridiag | ar1:RHO
CovConfig ParseCov(const std::string& text, std::size_t dim) {
  if (text == "identity") return CovConfig::Identity(dim);
  if (text == "diag8") return CovConfig::DiagonalHeteroskedastic(dim);
  if (text == "cs") return CovConfig::CompoundSymmetry(dim);
  if (text == "tridiag") return CovConfig::Tridiagonal(dim);
  if (text.starts_with("ar1:")) {
    const std::string value = text.substr(4);
    std::size_t used = 0;
    double rho = 0.0;
    try {
      rho = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (value.empty() || used != value.size()) {
      throw Error(ErrorKind::kInvalidConfig,
                  "cannot parse AR(1) correlation '" + value + "'");
    }
    return CovConfig::Ar1(dim, rho);
  }
  throw Error(ErrorKind::kInvalidConfig,
              "unknown covariance '" + text +
                  "' (expected identity|diag8|cs|tridiag|ar1:RHO)");
}

int CmdTest(const TestArgs& a, std::ostream& out) {
  const MatrixSample sample = ReadSampleFile(a.input);
  const Target target = a.target == "column" ? Target::kColumns : Target::kRows;
  NullSpec null;
  if (a.null == "sphericity") {
    null = NullSpec::Sphericity(target, a.alpha);
  } else if (a.null == "identity") {
    null = NullSpec::Identity(target, a.alpha);
  } else {
    if (a.sigma0.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "--null known requires --sigma0");
    }
    const ScaleMode mode = a.scale == "estimate" ? ScaleMode::kEstimateScale
                                                 : ScaleMode::kColumnTraceKnown;
    null = NullSpec::KnownCovariance(SymMatrix(ReadCsvMatrixFile(a.sigma0)),
                                     mode, target, a.alpha);
  }
  null.centered = a.centered;
  const TestOutcome res = RunTest(sample, null);

  if (a.output == "json") {
    nlohmann::ordered_json j;
    j["statistic"] = res.statistic;
    j["p_value"] = res.p_value;
    j["reject"] = res.reject;
    j["alpha"] = null.alpha;
    j["null"] = NullKindName(null.kind);
    j["target"] = TargetName(null.target);
    j["n"] = sample.n();
    j["r"] = sample.rows();
    j["c"] = sample.cols();
    j["tr_sigma_c2_hat"] = res.estimates.tr_sigma_c2_hat;
    j["k_hat"] = res.k_hat ? nlohmann::ordered_json(*res.k_hat) : nlohmann::ordered_json(nullptr);
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  std::ostringstream os;
  os << std::setprecision(10);
  os << "null:            " << NullKindName(null.kind) << '\n'
     << "target:          " << TargetName(null.target) << '\n'
     << "N, r, c:         " << sample.n() << ", " << sample.rows() << ", "
     << sample.cols() << '\n'
     << "statistic:       " << res.statistic << '\n'
     << "p-value:         " << res.p_value << '\n'
     << "critical value:  " << res.z_alpha << " (alpha " << null.alpha << ")\n"
     << "decision:        " << (res.reject ? "reject" : "do not reject")
     << '\n'
     << "tr(Sigma_C^2):   " << res.estimates.tr_sigma_c2_hat << '\n';
  if (res.k_hat) os << "k_hat:           " << *res.k_hat << '\n';
  out << os.str();
  return kExitOk;
}

int CmdSimulate(const SimulateArgs& a, std::ostream& out) {
  ModelSpec spec;
  spec.n = a.n;
  spec.r = a.r;
  spec.c = a.c;
  spec.row_cov = ParseCov(a.row_cov, a.r);
  spec.col_cov = ParseCov(a.col_cov, a.c);
  spec.law = a.law == "gamma" ? InnovationLaw::StandardizedGamma()
                              : InnovationLaw::Gaussian();
  if (a.mean != "zero") spec.mean = ReadCsvMatrixFile(a.mean);
  spec.seed = a.seed;
  const MatrixSample sample = SampleDataset(spec);

  std::ostringstream text;
  if (a.format == "long") {
    WriteLongCsv(sample, text);
  } else {
    WriteMatrixStack(sample, text);
  }
  if (a.out.empty()) {
    out << text.str();
  } else {
    std::ofstream file(a.out, std::ios::binary);
    if (!file || !(file << text.str())) {
      throw Error(ErrorKind::kInvalidArgument, "cannot write '" + a.out + "'");
    }
  }
  return kExitOk;
}

std::optional<std::size_t> ThreadsFromEnv() {
  const char* env = std::getenv("HDTD_THREADS");
  if (env == nullptr || *env == '\0') return std::nullopt;
  char* end = nullptr;
  const long value = std::strtol(env, &end, 10);
  if (*end != '\0' || value < 1) {
    throw Error(ErrorKind::kInvalidConfig,
                std::string("HDTD_THREADS must be a positive integer, got '") +
                    env + "'");
  }
  return static_cast<std::size_t>(value);
}

int CmdMc(const McArgs& a, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg = LoadExperimentConfig(a.config);
  if (a.threads) {
    cfg.threads = *a.threads;
  } else if (const auto env = ThreadsFromEnv()) {
    cfg.threads = *env;
  }
  if (a.seed) cfg.seed = *a.seed;
  if (a.fast) cfg.replicates = std::min(cfg.replicates, kFastReplicates);

  const auto progress = [&err](const CellResult& res, std::size_t index,
                               std::size_t total) {
    const CellSpec& c = res.cell;
    err << "[" << index + 1 << "/" << total << "] " << ScenarioName(c.scenario)
        << ' ' << RowConfigName(c.row_config) << " N=" << c.n << " r=" << c.r
        << " c=" << c.c << " rho=" << c.rho << " rate=" << std::fixed
        << std::setprecision(3) << res.rejection_rate << " se="
        << res.mc_standard_error << " (" << std::setprecision(0) << res.wall_ms
        << " ms)" << std::defaultfloat << std::setprecision(6);
    if (res.flagged()) err << " degenerate=" << res.degenerate_count;
    err << '\n';
  };
  const std::vector<CellResult> results = RunGrid(cfg, progress);
  const std::string csv = ToCsv(results);
  if (a.out.empty()) {
    out << csv;
  } else {
    std::ofstream file(a.out, std::ios::binary);
    if (!file || !(file << csv)) {
      throw Error(ErrorKind::kInvalidArgument, "cannot write '" + a.out + "'");
    }
    out << ToTextTable(results);
  }
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"High-dimensional tests for the covariance of transposable data",
               "hdtd"};
  app.require_subcommand(1);

  TestArgs test_args;
  CLI::App* test = app.add_subcommand("test", "Run a covariance test on a data file");
  test->add_option("--input", test_args.input, "Data file")->required();
  test->add_option("--target", test_args.target, "Which covariance to test")
      ->check(CLI::IsMember({"row", "column"}));
  test->add_option("--null", test_args.null, "Null hypothesis")
      ->check(CLI::IsMember({"sphericity", "identity", "known"}));
  test->add_option("--sigma0", test_args.sigma0, "Square CSV with the null covariance");
  test->add_option("--scale", test_args.scale, "Column-scale handling (known null)")
      ->check(CLI::IsMember({"known-trace", "estimate"}));
  test->add_option("--alpha", test_args.alpha, "Significance level")
      ->check(CLI::Range(0.0, 1.0));
  test->add_flag("--centered", test_args.centered, "Data have known zero mean");
  test->add_option("--output", test_args.output, "Report format")
      ->check(CLI::IsMember({"text", "json"}));

  SimulateArgs sim_args;
  CLI::App* sim = app.add_subcommand("simulate", "Write a simulated data file");
  sim->add_option("--n", sim_args.n, "Sample size")->required()->check(CLI::PositiveNumber);
  sim->add_option("--r", sim_args.r, "Rows per observation")->required()->check(CLI::PositiveNumber);
  sim->add_option("--c", sim_args.c, "Columns per observation")->required()->check(CLI::PositiveNumber);
  sim->add_option("--row-cov", sim_args.row_cov, "identity|diag8|cs|tridiag|ar1:RHO");
  sim->add_option("--col-cov", sim_args.col_cov, "identity|diag8|cs|tridiag|ar1:RHO");
  sim->add_option("--law", sim_args.law, "Innovation law")
      ->check(CLI::IsMember({"gaussian", "gamma"}));
  sim->add_option("--mean", sim_args.mean, "zero, or a CSV with the r x c mean");
  sim->add_option("--seed", sim_args.seed, "RNG seed");
  sim->add_option("--out", sim_args.out, "Output path (stdout if omitted)");
  sim->add_option("--format", sim_args.format, "stack or long-form CSV")
      ->check(CLI::IsMember({"stack", "long"}));

  McArgs mc_args;
  CLI::App* mc = app.add_subcommand("mc", "Run a Monte Carlo size/power experiment");
  mc->add_option("--config", mc_args.config, "YAML experiment config")->required();
  mc->add_option("--threads", mc_args.threads, "Worker threads (default HDTD_THREADS)")
      ->check(CLI::PositiveNumber);
  mc->add_option("--seed", mc_args.seed, "Override the config seed");
  mc->add_option("--out", mc_args.out, "CSV path (stdout if omitted)");
  mc->add_flag("--fast", mc_args.fast, "Cap replicates for a quick run");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    ReportError(err, "Usage", e.what());
    return kExitInvalidInput;
  }

  try {
    if (test->parsed()) return CmdTest(test_args, out);
    if (sim->parsed()) return CmdSimulate(sim_args, out);
    if (mc->parsed()) return CmdMc(mc_args, out, err);
  } catch (const Error& e) {
    ReportError(err, ErrorKindName(e.kind()), e.what());
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    ReportError(err, "Internal", e.what());
    return 1;
  }
  return kExitInvalidInput;
}

}  // namespace hdtd::cli
