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
#include <vector>

#include <gtest/gtest.h>

#include "hdtd/error.hpp"
#include "support/test_support.hpp"

namespace hdtd {
namespace {

void ExpectInvalid(auto&& fn) {
  try {
    fn();
    FAIL() << "expected InvalidConfig";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidConfig) << e.what();
  }
}

TEST(BuildCov, Ar1ZeroIsIdentity) {
  EXPECT_EQ(BuildCov(CovConfig::Ar1(6, 0.0)).matrix(), Matrix::Identity(6, 6));
}

TEST(BuildCov, Ar1Half) {
  Matrix want(3, 3);
  want << 1, .5, .25, .5, 1, .5, .25, .5, 1;
  EXPECT_EQ(BuildCov(CovConfig::Ar1(3, 0.5)).matrix(), want);
}

TEST(BuildCov, Tridiagonal) {
  const Matrix m = BuildCov(CovConfig::Tridiagonal(4, 0.1)).matrix();
  for (Eigen::Index a = 0; a < 4; ++a) {
    for (Eigen::Index b = 0; b < 4; ++b) {
      const auto gap = std::abs(a - b);
      EXPECT_EQ(m(a, b), gap == 0 ? 1.0 : gap == 1 ? 0.1 : 0.0);
    }
  }
}

TEST(BuildCov, OtherKinds) {
  const Matrix d = BuildCov(CovConfig::DiagonalHeteroskedastic(16)).matrix();
  EXPECT_EQ(d.diagonal().head(2), Vector::Constant(2, 2.0));
  EXPECT_EQ(d.diagonal().tail(14), Vector::Constant(14, 1.0));
  EXPECT_EQ(d.trace(), 18.0);
  EXPECT_EQ(BuildCov(CovConfig::DiagonalHeteroskedastic(7)).matrix(), Matrix::Identity(7, 7));

  const Matrix cs = BuildCov(CovConfig::CompoundSymmetry(3)).matrix();
  EXPECT_DOUBLE_EQ(cs(0, 0), 1.1);
  EXPECT_DOUBLE_EQ(cs(0, 2), 0.2);

  EXPECT_EQ(BuildCov(CovConfig::ScaledIdentity(2, 3.0)).matrix(), 3.0 * Matrix::Identity(2, 2));
}

TEST(BuildCov, Validation) {
  ExpectInvalid([] { BuildCov(CovConfig::Ar1(3, 1.0)); });
  ExpectInvalid([] { BuildCov(CovConfig::Ar1(3, -1.5)); });
  ExpectInvalid([] { BuildCov(CovConfig::Tridiagonal(3, 0.5)); });
  ExpectInvalid([] { BuildCov(CovConfig::CompoundSymmetry(4, 0.0, 0.2)); });
  ExpectInvalid([] { BuildCov(CovConfig::CompoundSymmetry(4, 1.0, -0.3)); });
  ExpectInvalid([] { BuildCov(CovConfig::ScaledIdentity(4, 0.0)); });
  ExpectInvalid([] { BuildCov(CovConfig::Identity(0)); });
}

TEST(BuildCov, GridConfigurationsArePositiveDefinite) {
  for (std::size_t r : {8u, 16u, 32u, 64u, 128u, 256u}) {
    for (const CovConfig& cfg :
         {CovConfig::Identity(r), CovConfig::DiagonalHeteroskedastic(r),
          CovConfig::CompoundSymmetry(r), CovConfig::Tridiagonal(r)}) {
      const Matrix m = BuildCov(cfg).matrix();
      EXPECT_GT(Eigen::SelfAdjointEigenSolver<Matrix>(m).eigenvalues().minCoeff(), 0.0)
          << Describe(cfg) << " r=" << r;
    }
  }
  for (std::size_t c : {10u, 50u, 100u}) {
    for (double rho : {0.15, 0.85}) {
      const Matrix m = BuildCov(CovConfig::Ar1(c, rho)).matrix();
      EXPECT_GT(Eigen::SelfAdjointEigenSolver<Matrix>(m).eigenvalues().minCoeff(), 0.0);
    }
  }
}

TEST(NormalizeTrace, Examples) {
  EXPECT_EQ(NormalizeTrace(SymMatrix::Identity(4)), SymMatrix::Identity(4));
  const SymMatrix two(Matrix(2.0 * Matrix::Identity(5, 5)));
  EXPECT_EQ(NormalizeTrace(two), SymMatrix::Identity(5));
  const SymMatrix ar1 = BuildCov(CovConfig::Ar1(10, 0.85));
  EXPECT_EQ(NormalizeTrace(ar1), ar1);
  const SymMatrix cs = BuildCov(CovConfig::CompoundSymmetry(7));
  const SymMatrix once = NormalizeTrace(cs);
  EXPECT_NEAR(once.trace(), 7.0, 7e-12);
  EXPECT_EQ(NormalizeTrace(once), once);
  ExpectInvalid([] { NormalizeTrace(SymMatrix(Matrix(Matrix::Zero(2, 2)))); });
}

TEST(Describe, Names) {
  EXPECT_EQ(Describe(CovConfig::Ar1(3, 0.5)), "ar1:0.5");
  EXPECT_EQ(Describe(CovConfig::Tridiagonal(3)), "tridiag");
}

TEST(InnovationLaw, KurtosisOffset) {
  EXPECT_EQ(InnovationLaw::Gaussian().KurtosisOffset(), 0.0);
  EXPECT_EQ(InnovationLaw::StandardizedGamma().KurtosisOffset(), 1.5);
}

struct Pooled {
  testing::MeanSe m1, m2, m4;
};

Pooled PooledMoments(const InnovationLaw& law, std::uint64_t seed) {
  Matrix z(1000, 1000);
  DrawInnovations(law, seed, 0, z);
  std::vector<double> x, x2, x4;
  x.reserve(z.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    x.push_back(z(k));
    x2.push_back(z(k) * z(k));
    x4.push_back(std::pow(z(k), 4));
  }
  return {testing::MeanAndSe(x), testing::MeanAndSe(x2), testing::MeanAndSe(x4)};
}

TEST(Innovations, GaussianMoments) {
  const Pooled p = PooledMoments(InnovationLaw::Gaussian(), 3);
  EXPECT_LE(std::abs(p.m1.mean), 5 * p.m1.se);
  EXPECT_LE(std::abs(p.m2.mean - 1.0), 5 * p.m2.se);
  EXPECT_LE(std::abs(p.m4.mean - 3.0), 5 * p.m4.se);
}

TEST(Innovations, StandardizedGammaMoments) {
  const Pooled p = PooledMoments(InnovationLaw::StandardizedGamma(4, 0.5), 5);
  EXPECT_LE(std::abs(p.m1.mean), 5 * p.m1.se);
  EXPECT_LE(std::abs(p.m2.mean - 1.0), 5 * p.m2.se);
  EXPECT_LE(std::abs(p.m4.mean - 4.5), 5 * p.m4.se);
}

TEST(Innovations, GammaValidation) {
  Matrix z(2, 2);
  ExpectInvalid([&] { DrawInnovations(InnovationLaw::StandardizedGamma(0.0, 1.0), 1, 0, z); });
}

TEST(SampleDataset, IdentityFactorsGiveStandardNormals) {
  ModelSpec spec;
  spec.n = 50;
  spec.r = 40;
  spec.c = 60;
  spec.row_cov = CovConfig::Identity(40);
  spec.col_cov = CovConfig::Identity(60);
  spec.seed = 9;
  const MatrixSample s = SampleDataset(spec);
  std::vector<double> x, x2;
  for (const Matrix& m : s.data()) {
    for (Eigen::Index k = 0; k < m.size(); ++k) {
      x.push_back(m(k));
      x2.push_back(m(k) * m(k));
    }
  }
  ASSERT_GE(x.size(), 100000u);
  const auto a = testing::MeanAndSe(x);
  const auto b = testing::MeanAndSe(x2);
  EXPECT_LE(std::abs(a.mean), 4 * a.se);
  EXPECT_LE(std::abs(b.mean - 1.0), 4 * b.se);
}

TEST(SampleDataset, DeterministicGivenSeed) {
  ModelSpec spec;
  spec.n = 5;
  spec.r = 3;
  spec.c = 4;
  spec.row_cov = CovConfig::CompoundSymmetry(3);
  spec.col_cov = CovConfig::Ar1(4, 0.3);
  spec.law = InnovationLaw::StandardizedGamma();
  spec.seed = 77;
  EXPECT_TRUE(SampleDataset(spec) == SampleDataset(spec));
  EXPECT_FALSE(SampleDataset(spec, 0) == SampleDataset(spec, 1));
  ModelSpec other = spec;
  other.seed = 78;
  EXPECT_FALSE(SampleDataset(spec) == SampleDataset(other));
}

TEST(SampleDataset, AddsMeanAndNormalizesColumns) {
  ModelSpec spec;
  spec.n = 3;
  spec.r = 2;
  spec.c = 3;
  spec.row_cov = CovConfig::Identity(2);
  spec.col_cov = CovConfig::ScaledIdentity(3, 4.0);
  spec.mean = Matrix::Constant(2, 3, 10.0);
  spec.seed = 1;
  const ModelSampler sampler(spec);
  EXPECT_NEAR(sampler.col_cov().trace(), 3.0, 3e-12);
  ModelSpec zero = spec;
  zero.mean.reset();
  const MatrixSample a = SampleDataset(spec);
  const MatrixSample b = SampleDataset(zero);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a[i], (b[i].array() + 10.0).matrix());
}

TEST(SampleDataset, Validation) {
  ModelSpec spec;
  spec.n = 3;
  spec.r = 2;
  spec.c = 3;
  spec.row_cov = CovConfig::Identity(3);
  spec.col_cov = CovConfig::Identity(3);
  ExpectInvalid([&] { ModelSampler{spec}; });
  spec.row_cov = CovConfig::Identity(2);
  spec.mean = Matrix::Zero(3, 2);
  ExpectInvalid([&] { ModelSampler{spec}; });
  spec.mean.reset();
  spec.col_cov = CovConfig::Ar1(3, 1.5);
  ExpectInvalid([&] { ModelSampler{spec}; });
}

// cov[vec(X)] = Sigma_C kron Sigma_R, checked entrywise.
TEST(SampleDataset, KroneckerCovariance) {
  ModelSpec spec;
  spec.n = 1;
  spec.r = 3;
  spec.c = 2;
  Matrix sr(3, 3);
  sr << 2.0, 0.6, -0.3, 0.6, 1.0, 0.2, -0.3, 0.2, 0.5;
  Matrix sc(2, 2);
  sc << 1.3, -0.4, -0.4, 0.7;
  spec.row_cov = CovConfig::Custom(SymMatrix(sr));
  spec.col_cov = CovConfig::Custom(SymMatrix(sc));
  spec.col_trace_normalize = false;
  spec.seed = 2026;
  const ModelSampler sampler(spec);
  const int draws = 200000;
  const Eigen::Index p = 6;
  Matrix sum = Matrix::Zero(p, p);
  Matrix sum_sq = Matrix::Zero(p, p);
  for (int k = 0; k < draws; ++k) {
    const MatrixSample draw = sampler.Draw(static_cast<std::uint64_t>(k));
    const Matrix& x = draw[0];
    const Eigen::Map<const Vector> v(x.data(), p);  // column-major = vec(X)
    const Matrix outer = v * v.transpose();
    sum += outer;
    sum_sq += outer.cwiseProduct(outer);
  }
  const Matrix mean = sum / draws;
  const Matrix se = ((sum_sq / draws - mean.cwiseProduct(mean)) / draws).cwiseSqrt();
  Matrix kron(p, p);
  for (Eigen::Index a = 0; a < 2; ++a) {
    for (Eigen::Index b = 0; b < 2; ++b) kron.block(3 * a, 3 * b, 3, 3) = sc(a, b) * sr;
  }
  for (Eigen::Index a = 0; a < p; ++a) {
    for (Eigen::Index b = 0; b < p; ++b) {
      EXPECT_LE(std::abs(mean(a, b) - kron(a, b)), 5 * se(a, b)) << a << "," << b;
    }
  }
}

}  // namespace
}  // namespace hdtd
