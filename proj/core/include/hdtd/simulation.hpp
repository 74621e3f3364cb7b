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
#include <optional>
#include <string>

#include "hdtd/matrix_core.hpp"

namespace hdtd {

enum class CovKind {
  kIdentity,
  kScaledIdentity,           // sigma^2 I
  kDiagonalHeteroskedastic,  // first floor(dim/8) variances 2, the rest 1
  kCompoundSymmetry,         // v I + rho 1 1'
  kTridiagonal,              // unit diagonal, rho on the first off-diagonals
  kAr1,                      // rho^|a-b|
  kCustom,
};

struct CovConfig {
  CovKind kind = CovKind::kIdentity;
  std::size_t dim = 1;
  double param = 0.0;   // sigma^2, v, or rho depending on kind
  double param2 = 0.0;  // compound symmetry rho
  std::optional<SymMatrix> custom;

  static CovConfig Identity(std::size_t dim);
  static CovConfig ScaledIdentity(std::size_t dim, double sigma2);
  static CovConfig DiagonalHeteroskedastic(std::size_t dim);
  static CovConfig CompoundSymmetry(std::size_t dim, double v = 0.9,
                                    double rho = 0.2);
  static CovConfig Tridiagonal(std::size_t dim, double rho = 0.1);
  static CovConfig Ar1(std::size_t dim, double rho);
  static CovConfig Custom(SymMatrix m);
};

std::string Describe(const CovConfig& cfg);

// Dense covariance for a configuration; kInvalidConfig when the parameters
// leave the positive-definite region (|rho| >= 1 for AR(1), and so on).
SymMatrix BuildCov(const CovConfig& cfg);

// (dim / tr(a)) a. kInvalidConfig if tr(a) <= 0.
SymMatrix NormalizeTrace(const SymMatrix& a);

enum class LawKind { kGaussian, kStandardizedGamma };

// Innovation distribution for the entries of Z_i; both laws have mean 0 and
// variance 1.
struct InnovationLaw {
  LawKind kind = LawKind::kGaussian;
  double shape = 4.0;
  double rate = 0.5;

  static InnovationLaw Gaussian() { return {}; }
  // (G - shape/rate) / (sqrt(shape)/rate) with G ~ Gamma(shape, rate).
  static InnovationLaw StandardizedGamma(double shape = 4.0, double rate = 0.5) {
    return {LawKind::kStandardizedGamma, shape, rate};
  }

  // B = E[Z^4] - 3: 0 for the gaussian law, 6/shape for the gamma law.
  double KurtosisOffset() const {
    return kind == LawKind::kGaussian ? 0.0 : 6.0 / shape;
  }
};

// X_i = Sigma_R^{1/2} Z_i Sigma_C^{1/2} + M, i = 1..n.
struct ModelSpec {
  std::size_t n = 0;
  std::size_t r = 0;
  std::size_t c = 0;
  std::optional<Matrix> mean;  // r x c, zero when absent
  CovConfig row_cov;
  CovConfig col_cov;
  bool col_trace_normalize = true;
  InnovationLaw law;
  std::uint64_t seed = 0;
};

// Holds the symmetric covariance roots for one model so that many replicates
// can be drawn without refactoring. Draw() is const and safe to call
// concurrently; each (seed, replicate, matrix index) triple owns its own
// Philox stream.
class ModelSampler {
 public:
  explicit ModelSampler(const ModelSpec& spec);

  MatrixSample Draw(std::uint64_t replicate) const;

  const SymMatrix& row_cov() const { return row_cov_; }
  const SymMatrix& col_cov() const { return col_cov_; }

 private:
  ModelSpec spec_;
  SymMatrix row_cov_;
  SymMatrix col_cov_;
  Matrix row_root_;
  Matrix col_root_;
  bool row_identity_ = false;
  bool col_identity_ = false;
};

MatrixSample SampleDataset(const ModelSpec& spec, std::uint64_t replicate = 0);

// Fills `out` with i.i.d. innovations from `law` using the stream
// (seed, stream). Exposed for moment checks on the raw innovations.
void DrawInnovations(const InnovationLaw& law, std::uint64_t seed,
                     std::uint64_t stream, Matrix& out);

}  // namespace hdtd
