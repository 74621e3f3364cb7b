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

#include "hdtd/simulation.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

#include "hdtd/error.hpp"
#include "hdtd/rng.hpp"

namespace hdtd {
namespace {

[[noreturn]] void Invalid(const std::string& message) {
  throw Error(ErrorKind::kInvalidConfig, message);
}

bool IsIdentity(const Matrix& m) {
  return m.rows() == m.cols() &&
         m == Matrix::Identity(m.rows(), m.cols());
}

}  // namespace

CovConfig CovConfig::Identity(std::size_t dim) {
  return {CovKind::kIdentity, dim, 0.0, 0.0, std::nullopt};
}

CovConfig CovConfig::ScaledIdentity(std::size_t dim, double sigma2) {
  return {CovKind::kScaledIdentity, dim, sigma2, 0.0, std::nullopt};
}

CovConfig CovConfig::DiagonalHeteroskedastic(std::size_t dim) {
  return {CovKind::kDiagonalHeteroskedastic, dim, 0.0, 0.0, std::nullopt};
}

CovConfig CovConfig::CompoundSymmetry(std::size_t dim, double v, double rho) {
  return {CovKind::kCompoundSymmetry, dim, v, rho, std::nullopt};
}

CovConfig CovConfig::Tridiagonal(std::size_t dim, double rho) {
  return {CovKind::kTridiagonal, dim, rho, 0.0, std::nullopt};
}

CovConfig CovConfig::Ar1(std::size_t dim, double rho) {
  return {CovKind::kAr1, dim, rho, 0.0, std::nullopt};
}

CovConfig CovConfig::Custom(SymMatrix m) {
  const std::size_t dim = m.dim();
  return {CovKind::kCustom, dim, 0.0, 0.0, std::move(m)};
}

std::string Describe(const CovConfig& cfg) {
  std::ostringstream os;
  switch (cfg.kind) {
    case CovKind::kIdentity:
      os << "identity";
      break;
    case CovKind::kScaledIdentity:
      os << "scaled:" << cfg.param;
      break;
    case CovKind::kDiagonalHeteroskedastic:
      os << "diag8";
      break;
    case CovKind::kCompoundSymmetry:
      os << "cs";
      break;
    case CovKind::kTridiagonal:
      os << "tridiag";
      break;
    case CovKind::kAr1:
      os << "ar1:" << cfg.param;
      break;
    case CovKind::kCustom:
      os << "custom";
      break;
  }
  return os.str();
}

SymMatrix BuildCov(const CovConfig& cfg) {
  if (cfg.dim == 0) Invalid("covariance dimension must be positive");
  const auto d = static_cast<Eigen::Index>(cfg.dim);
  Matrix m = Matrix::Zero(d, d);
  switch (cfg.kind) {
    case CovKind::kIdentity:
      m.setIdentity();
      break;
    case CovKind::kScaledIdentity:
      if (!(cfg.param > 0.0)) Invalid("scaled identity needs sigma^2 > 0");
      m.diagonal().setConstant(cfg.param);
      break;
    case CovKind::kDiagonalHeteroskedastic: {
      m.setIdentity();
      const auto heavy = static_cast<Eigen::Index>(cfg.dim / 8);
      m.diagonal().head(heavy).setConstant(2.0);
      break;
    }
    case CovKind::kCompoundSymmetry: {
      const double v = cfg.param;
      const double rho = cfg.param2;
      // Eigenvalues are v (multiplicity dim-1) and v + dim * rho.
      if (!(v > 0.0) || !(v + static_cast<double>(cfg.dim) * rho > 0.0)) {
        Invalid("compound symmetry needs v > 0 and v + dim*rho > 0");
      }
      m.setConstant(rho);
      m.diagonal().array() += v;
      break;
    }
    case CovKind::kTridiagonal: {
      if (!(std::abs(cfg.param) < 0.5)) {
        Invalid("tridiagonal correlation needs |rho| < 0.5");
      }
      m.setIdentity();
      for (Eigen::Index a = 0; a + 1 < d; ++a) {
        m(a, a + 1) = cfg.param;
        m(a + 1, a) = cfg.param;
      }
      break;
    }
    case CovKind::kAr1: {
      const double rho = cfg.param;
      if (!(std::abs(rho) < 1.0)) Invalid("AR(1) correlation needs |rho| < 1");
      for (Eigen::Index b = 0; b < d; ++b) {
        for (Eigen::Index a = 0; a < d; ++a) {
          m(a, b) = a == b ? 1.0 : std::pow(rho, static_cast<double>(std::abs(a - b)));
        }
      }
      break;
    }
    case CovKind::kCustom:
      if (!cfg.custom) Invalid("custom covariance is missing its matrix");
      return *cfg.custom;
  }
  return SymMatrix(m);
}

SymMatrix NormalizeTrace(const SymMatrix& a) {
  const double tr = a.trace();
  if (!(tr > 0.0)) Invalid("cannot trace-normalize a matrix with tr <= 0");
  const double dim = static_cast<double>(a.dim());
  // Already normalized up to rounding: keep it, so the map is idempotent.
  if (std::abs(tr - dim) <= 8.0 * std::numeric_limits<double>::epsilon() * dim) {
    return a;
  }
  return SymMatrix(a.matrix() * (dim / tr));
}

void DrawInnovations(const InnovationLaw& law, std::uint64_t seed,
                     std::uint64_t stream, Matrix& out) {
  Philox4x32 engine(seed, stream);
  double* data = out.data();
  const Eigen::Index count = out.size();
  if (law.kind == LawKind::kGaussian) {
    std::normal_distribution<double> normal;
    for (Eigen::Index k = 0; k < count; ++k) data[k] = normal(engine);
    return;
  }
  if (!(law.shape > 0.0) || !(law.rate > 0.0)) {
    Invalid("gamma innovations need shape > 0 and rate > 0");
  }
  std::gamma_distribution<double> gamma(law.shape, 1.0 / law.rate);
  const double mean = law.shape / law.rate;
  const double sd = std::sqrt(law.shape) / law.rate;
  for (Eigen::Index k = 0; k < count; ++k) data[k] = (gamma(engine) - mean) / sd;
}

ModelSampler::ModelSampler(const ModelSpec& spec) : spec_(spec) {
  if (spec.n == 0 || spec.r == 0 || spec.c == 0) {
    Invalid("model dimensions must be positive");
  }
  if (spec.n > 0xFFFFFFFFull) Invalid("sample size exceeds 2^32 - 1");
  if (spec.row_cov.dim != spec.r) {
    Invalid("row covariance has dimension " + std::to_string(spec.row_cov.dim) +
            ", expected r = " + std::to_string(spec.r));
  }
  if (spec.col_cov.dim != spec.c) {
    Invalid("column covariance has dimension " +
            std::to_string(spec.col_cov.dim) + ", expected c = " +
            std::to_string(spec.c));
  }
  if (spec.mean && (static_cast<std::size_t>(spec.mean->rows()) != spec.r ||
                    static_cast<std::size_t>(spec.mean->cols()) != spec.c)) {
    Invalid("mean matrix must be r x c");
  }
  row_cov_ = BuildCov(spec.row_cov);
  col_cov_ = BuildCov(spec.col_cov);
  if (spec.col_trace_normalize) col_cov_ = NormalizeTrace(col_cov_);
  row_root_ = SymSqrt(row_cov_).matrix();
  col_root_ = SymSqrt(col_cov_).matrix();
  row_identity_ = IsIdentity(row_root_);
  col_identity_ = IsIdentity(col_root_);
}

MatrixSample ModelSampler::Draw(std::uint64_t replicate) const {
  if (replicate > 0xFFFFFFFFull) Invalid("replicate index exceeds 2^32 - 1");
  const auto r = static_cast<Eigen::Index>(spec_.r);
  const auto c = static_cast<Eigen::Index>(spec_.c);
  std::vector<Matrix> xs;
  xs.reserve(spec_.n);
  Matrix z(r, c);
  for (std::size_t i = 0; i < spec_.n; ++i) {
    DrawInnovations(spec_.law, spec_.seed, (replicate << 32) | i, z);
    Matrix x;
    if (row_identity_ && col_identity_) {
      x = z;
    } else if (row_identity_) {
      x.noalias() = z * col_root_;
    } else if (col_identity_) {
      x.noalias() = row_root_ * z;
    } else {
      x.noalias() = row_root_ * (z * col_root_);
    }
    if (spec_.mean) x += *spec_.mean;
    xs.push_back(std::move(x));
  }
  return MatrixSample(std::move(xs));
}

MatrixSample SampleDataset(const ModelSpec& spec, std::uint64_t replicate) {
  return ModelSampler(spec).Draw(replicate);
}

}  // namespace hdtd
