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

#include "hdtd/matrix_core.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "hdtd/error.hpp"
#include "support/test_support.hpp"

namespace hdtd {
namespace {

using ::hdtd::testing::RandomSpd;

Matrix M(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index a = 0;
  for (const auto& row : rows) {
    Eigen::Index b = 0;
    for (double v : row) m(a, b++) = v;
    ++a;
  }
  return m;
}

void ExpectKind(ErrorKind kind, auto&& fn) {
  try {
    fn();
    FAIL() << "expected " << ErrorKindName(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

TEST(SymMatrix, MirrorsUpperTriangleAndRejectsBadInput) {
  Matrix a = M({{2, 1}, {1 + 1e-14, 3}});
  SymMatrix s(a);
  EXPECT_EQ(s(0, 1), s(1, 0));
  ExpectKind(ErrorKind::kInvalidArgument, [] { SymMatrix(M({{1, 2}, {0, 1}})); });
  ExpectKind(ErrorKind::kInvalidArgument, [] { SymMatrix(Matrix(2, 3)); });
  ExpectKind(ErrorKind::kInvalidArgument, [] {
    SymMatrix(M({{std::numeric_limits<double>::quiet_NaN(), 0}, {0, 1}}));
  });
}

TEST(SymSqrt, IdentityMapsToIdentity) {
  EXPECT_EQ(SymSqrt(SymMatrix::Identity(5)), SymMatrix::Identity(5));
}

TEST(SymSqrt, DiagonalTakesEntrywiseRoots) {
  const double d[] = {4, 9};
  const double want[] = {2, 3};
  EXPECT_EQ(SymSqrt(SymMatrix::Diagonal(d)), SymMatrix::Diagonal(want));
}

TEST(SymSqrt, ReconstructsRandomPsd) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    const SymMatrix a(RandomSpd(gen, 6, 0.0));
    const Matrix b = SymSqrt(a).matrix();
    EXPECT_LE((b * b - a.matrix()).norm() / a.matrix().norm(), 1e-12);
    EXPECT_EQ(b, b.transpose());
  }
}

TEST(SymSqrt, HandlesIllConditionedInput) {
  // Condition number 1e8.
  std::mt19937_64 gen(3);
  const Matrix q = Eigen::HouseholderQR<Matrix>(RandomSpd(gen, 5, 1.0)).householderQ();
  Vector ev(5);
  ev << 1e-8, 1e-5, 1e-2, 0.5, 1.0;
  const SymMatrix a(Matrix(q * ev.asDiagonal() * q.transpose()));
  const Matrix b = SymSqrt(a).matrix();
  EXPECT_LE((b * b - a.matrix()).norm() / a.matrix().norm(), 1e-10);
}

TEST(SymSqrt, ClampsTinyNegativeEigenvalues) {
  // Rank one, with rounding noise in the null space.
  Vector v(3);
  v << 1, 2, 3;
  const SymMatrix a(Matrix(v * v.transpose()));
  const Matrix b = SymSqrt(a).matrix();
  EXPECT_LE((b * b - a.matrix()).norm() / a.matrix().norm(), 1e-12);
}

TEST(SymSqrt, RejectsIndefinite) {
  ExpectKind(ErrorKind::kNotPositiveSemiDefinite,
             [] { SymSqrt(SymMatrix(M({{1, 0}, {0, -1}}))); });
}

TEST(SymInvSqrt, IdentityAndDiagonal) {
  EXPECT_EQ(SymInvSqrt(SymMatrix::Identity(3)), SymMatrix::Identity(3));
  const double d[] = {4, 25};
  const double want[] = {0.5, 0.2};
  EXPECT_EQ(SymInvSqrt(SymMatrix::Diagonal(d)), SymMatrix::Diagonal(want));
}

TEST(SymInvSqrt, WhitensRandomPd) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 20; ++trial) {
    const SymMatrix a(RandomSpd(gen, 5, 0.1));
    const Matrix b = SymInvSqrt(a).matrix();
    EXPECT_LE((b * a.matrix() * b - Matrix::Identity(5, 5)).norm(), 1e-9);
  }
}

TEST(SymInvSqrt, RejectsSingular) {
  ExpectKind(ErrorKind::kSingularMatrix,
             [] { SymInvSqrt(SymMatrix(M({{1, 1}, {1, 1}}))); });
  ExpectKind(ErrorKind::kSingularMatrix,
             [] { SymInvSqrt(SymMatrix(M({{1, 0}, {0, 0}}))); });
}

TEST(MatrixSample, ValidatesShapesAndValues) {
  ExpectKind(ErrorKind::kInvalidArgument, [] { MatrixSample(std::vector<Matrix>{}); });
  ExpectKind(ErrorKind::kDimensionMismatch,
             [] { MatrixSample({Matrix::Zero(2, 2), Matrix::Zero(2, 3)}); });
  ExpectKind(ErrorKind::kInvalidArgument, [] {
    MatrixSample({M({{std::numeric_limits<double>::infinity()}})});
  });
  const MatrixSample s({M({{1, 2}}), M({{3, 6}})});
  EXPECT_EQ(s.n(), 2u);
  EXPECT_EQ(s.rows(), 1u);
  EXPECT_EQ(s.cols(), 2u);
  EXPECT_EQ(s.Sum(), M({{4, 8}}));
  EXPECT_EQ(s.Mean(), M({{2, 4}}));
}

TEST(TransposeSample, SmallExample) {
  const MatrixSample s({M({{1, 2}, {3, 4}})});
  EXPECT_EQ(TransposeSample(s)[0], M({{1, 3}, {2, 4}}));
}

TEST(TransposeSample, ShapeAndInvolution) {
  std::mt19937_64 gen(1);
  const MatrixSample s = testing::HeavyTailedSample(gen, 4, 2, 3);
  const MatrixSample t = TransposeSample(s);
  EXPECT_EQ(t.rows(), 3u);
  EXPECT_EQ(t.cols(), 2u);
  EXPECT_EQ(t.n(), 4u);
  for (std::size_t i = 0; i < s.n(); ++i) {
    for (Eigen::Index a = 0; a < 2; ++a) {
      for (Eigen::Index b = 0; b < 3; ++b) EXPECT_EQ(t[i](b, a), s[i](a, b));
    }
  }
  EXPECT_TRUE(TransposeSample(t) == s);
}

TEST(PairwiseGram, TwoUnitVectors) {
  const MatrixSample s({M({{1, 0}}), M({{0, 1}})});
  EXPECT_EQ(PairwiseGram(s, false), Matrix::Identity(2, 2));
}

TEST(PairwiseGram, MatchesDoubleLoop) {
  std::mt19937_64 gen(2);
  const MatrixSample s = testing::HeavyTailedSample(gen, 7, 3, 4);
  for (bool centered : {false, true}) {
    const Matrix g = PairwiseGram(s, centered);
    const Matrix mean = centered ? s.Mean() : Matrix::Zero(3, 4);
    for (std::size_t i = 0; i < s.n(); ++i) {
      for (std::size_t j = 0; j < s.n(); ++j) {
        const double want = ((s[i] - mean).array() * (s[j] - mean).array()).sum();
        EXPECT_LE(std::abs(g(i, j) - want), 1e-12 * std::max(1.0, std::abs(want)));
      }
    }
  }
}

TEST(PairwiseGram, CenteredRowsSumToZero) {
  std::mt19937_64 gen(4);
  const MatrixSample s = testing::GaussianSample(gen, 9, 2, 5);
  const Matrix g = PairwiseGram(s, true);
  const double scale = g.diagonal().sum();
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    EXPECT_NEAR(g.row(i).sum(), 0.0, 1e-12 * scale);
  }
}

TEST(PairwiseGram, SymmetricAndPsd) {
  std::mt19937_64 gen(6);
  const MatrixSample s = testing::HeavyTailedSample(gen, 12, 3, 3);
  const Matrix g = PairwiseGram(s, false);
  EXPECT_EQ(g, g.transpose());
  const double min_ev = Eigen::SelfAdjointEigenSolver<Matrix>(g).eigenvalues().minCoeff();
  EXPECT_GE(min_ev, -1e-10 * g.trace());
}

}  // namespace
}  // namespace hdtd
