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

#include "hdtd/trace_estimators.hpp"

#include <string>

#include "hdtd/error.hpp"
#include "hdtd/summation.hpp"

namespace hdtd {
namespace {

void RequireAtLeast(const MatrixSample& s, std::size_t min_n,
                    const char* estimator) {
  if (s.n() < min_n) {
    throw Error(ErrorKind::kSampleTooSmall,
                std::string(estimator) + " needs N >= " +
                    std::to_string(min_n) + ", got N = " +
                    std::to_string(s.n()));
  }
}

double Perm(std::size_t n, unsigned t) {
  return static_cast<double>(FallingFactorial(n, t));
}

// tr(A B) without forming the product.
double TraceOfProduct(const Matrix& a, const Matrix& b) {
  return (a.transpose().array() * b.array()).sum();
}

double SquaredNorm(const Matrix& a) { return a.squaredNorm(); }

// Every estimator here is location invariant, so subtracting the sample mean
// changes nothing in exact arithmetic but keeps the large kernel terms from
// cancelling when the data sit far from the origin.
std::vector<Matrix> Centered(const MatrixSample& s) {
  const Matrix mean = s.Mean();
  std::vector<Matrix> out;
  out.reserve(s.n());
  for (const Matrix& x : s.data()) out.emplace_back(x - mean);
  return out;
}

}  // namespace

uint128 FallingFactorial(std::uint64_t s, unsigned t) {
  if (t > 4 || s > 1'000'000 || s < t) {
    throw Error(ErrorKind::kInvalidArgument,
                "falling factorial P(" + std::to_string(s) + ", " +
                    std::to_string(t) + ") is outside its supported range");
  }
  uint128 p = 1;
  for (unsigned k = 0; k < t; ++k) p *= s - k;
  return p;
}

double T1n(const MatrixSample& s) {
  RequireAtLeast(s, 2, "T1N");
  const Matrix gram = PairwiseGram(s, /*centered=*/false);
  const auto n = static_cast<Eigen::Index>(s.n());
  CompensatedSum diag;
  CompensatedSum off;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      (i == j ? diag : off) += gram(i, j);
    }
  }
  const double c = static_cast<double>(s.cols());
  const double y1 = diag.value() / (c * static_cast<double>(s.n()));
  const double y3 = off.value() / (c * Perm(s.n(), 2));
  return y1 - y3;
}

double T2nNaive(const MatrixSample& s) {
  RequireAtLeast(s, 4, "T2N");
  const std::size_t n = s.n();
  const std::vector<Matrix> xs = Centered(s);
  // outer[i * n + j] = X_i X_j'
  std::vector<Matrix> outer(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      outer[i * n + j] = xs[i] * xs[j].transpose();
    }
  }
  auto k = [&](std::size_t i, std::size_t j) -> const Matrix& {
    return outer[i * n + j];
  };

  CompensatedSum y2;
  CompensatedSum y4;
  CompensatedSum y5;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      y2 += TraceOfProduct(k(i, i), k(j, j));
      for (std::size_t l = 0; l < n; ++l) {
        if (l == i || l == j) continue;
        y4 += TraceOfProduct(k(i, i), k(j, l));
        for (std::size_t m = 0; m < n; ++m) {
          if (m == i || m == j || m == l) continue;
          y5 += TraceOfProduct(k(i, j), k(l, m));
        }
      }
    }
  }
  const double c2 = static_cast<double>(s.cols()) * static_cast<double>(s.cols());
  return y2.value() / (c2 * Perm(n, 2)) - 2.0 * y4.value() / (c2 * Perm(n, 3)) +
         y5.value() / (c2 * Perm(n, 4));
}

namespace detail {

double T2nDecomposition(const std::vector<Matrix>& xs, ProductSide side) {
  const std::size_t n_count = xs.size();
  const Eigen::Index r = xs.front().rows();
  const Eigen::Index c = xs.front().cols();
  const bool use_cols =
      side == ProductSide::kColumns || (side == ProductSide::kAuto && c <= r);

  // Work with A_i = X_i (c x c products) or A_i = X_i' (r x r products); the
  // s x s products A_i'A_j are the small cross products either way.
  const Eigen::Index len = use_cols ? r : c;
  const Eigen::Index small = use_cols ? c : r;
  const auto n = static_cast<Eigen::Index>(n_count);
  Matrix stacked(len, n * small);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Matrix& x = xs[static_cast<std::size_t>(i)];
    if (use_cols) {
      stacked.middleCols(i * small, small) = x;
    } else {
      stacked.middleCols(i * small, small) = x.transpose();
    }
  }
  auto a = [&](Eigen::Index i) { return stacked.middleCols(i * small, small); };

  std::vector<Matrix> gram(n_count);
  Matrix sum_a = Matrix::Zero(len, small);
  for (Eigen::Index i = 0; i < n; ++i) {
    gram[static_cast<std::size_t>(i)] = a(i).transpose() * a(i);
    sum_a += a(i);
  }
  const Matrix mean_a = sum_a / static_cast<double>(n);

  // Pairwise sums over i != j, accumulated over i < j and doubled.
  CompensatedSum cross_norm;   // sum ||A_i'A_j||_F^2
  CompensatedSum cross_trace;  // sum tr((A_i'A_j)^2)
  CompensatedSum gram_dot;     // sum <A_i'A_i, A_j'A_j>
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const Eigen::Index rest = n - i - 1;
    const Matrix block =
        a(i).transpose() * stacked.rightCols(rest * small);
    for (Eigen::Index q = 0; q < rest; ++q) {
      const auto l = block.middleCols(q * small, small);
      cross_norm += 2.0 * l.squaredNorm();
      cross_trace += 2.0 * (l.array() * l.transpose().array()).sum();
      gram_dot += 2.0 * FrobeniusDot(gram[static_cast<std::size_t>(i)],
                                     gram[static_cast<std::size_t>(i + 1 + q)]);
    }
  }

  CompensatedSum y41;
  CompensatedSum y42;
  CompensatedSum y43;
  CompensatedSum y51;
  CompensatedSum y541;
  CompensatedSum y551;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Matrix& g = gram[static_cast<std::size_t>(i)];
    const Matrix dev = a(i) - mean_a;
    const Matrix dev_a = dev.transpose() * a(i);
    const Matrix dev_gram = dev.transpose() * dev;
    y42 += SquaredNorm(g);
    y43 += FrobeniusDot(a(i) * g, sum_a - a(i));
    y51 += SquaredNorm(dev_gram);
    y551 += TraceOfProduct(dev_a, dev_a);
    if (use_cols) {
      y41 += SquaredNorm(dev_a);
      y541 += FrobeniusDot(g, dev_gram);
    } else {
      y41 += FrobeniusDot(dev_gram, g);
      y541 += SquaredNorm(dev_a);
    }
  }

  const double nn = static_cast<double>(n);
  const double y2 = use_cols ? cross_norm.value() : gram_dot.value();
  const double y52 = use_cols ? gram_dot.value() : cross_norm.value();
  const double y53 = cross_trace.value();
  const double q = nn * nn - 3.0 * nn + 3.0;

  const double y4 = nn * nn * y41.value() - (nn - 1) * (nn - 1) * y42.value() -
                    y2 + 2.0 * (nn - 1) * y43.value();
  const double y54 = nn * nn * y541.value() + 2.0 * (nn - 1) * y43.value() -
                     (nn - 1) * (nn - 1) * y42.value() - y52;
  const double y55 = nn * nn * y551.value() + 2.0 * (nn - 1) * y43.value() -
                     (nn - 1) * (nn - 1) * y42.value() - y53;
  const double y5 = ((nn - 1) * q * y42.value() + (2 * nn - 3) * (y2 + y52 + y53) +
                     2 * (nn - 3) * (y4 + y54 + y55) - 4 * q * y43.value() -
                     nn * nn * nn * y51.value()) /
                    3.0;

  const double cc = static_cast<double>(c) * static_cast<double>(c);
  return y2 / (cc * Perm(n_count, 2)) - 2.0 * y4 / (cc * Perm(n_count, 3)) +
         y5 / (cc * Perm(n_count, 4));
}

}  // namespace detail

double T2nFast(const MatrixSample& s, ProductSide side) {
  RequireAtLeast(s, 4, "T2N");
  return detail::T2nDecomposition(Centered(s), side);
}

double T2nStarNaive(const MatrixSample& s) {
  RequireAtLeast(s, 4, "T*2N");
  const Matrix g = PairwiseGram(s, /*centered=*/true);
  const auto n = static_cast<Eigen::Index>(s.n());
  CompensatedSum first;
  CompensatedSum second;
  CompensatedSum third;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      first += g(i, j) * g(i, j);
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        second += g(i, j) * g(i, k);
        for (Eigen::Index l = 0; l < n; ++l) {
          if (l == i || l == j || l == k) continue;
          third += g(i, j) * g(k, l);
        }
      }
    }
  }
  return first.value() / Perm(s.n(), 2) - 2.0 * second.value() / Perm(s.n(), 3) +
         third.value() / Perm(s.n(), 4);
}

double T2nStarFast(const MatrixSample& s) {
  RequireAtLeast(s, 4, "T*2N");
  const Matrix g = PairwiseGram(s, /*centered=*/true);
  const double n = static_cast<double>(s.n());
  const double tr_s = g.trace() / (n - 1);
  const double tr_s2 = g.squaredNorm() / ((n - 1) * (n - 1));
  const double q = g.diagonal().squaredNorm() / (n - 1);
  return (n - 1) / (n * (n - 2) * (n - 3)) *
         ((n - 1) * (n - 2) * tr_s2 + tr_s * tr_s - n * q);
}

double T1nVectorized(const MatrixSample& s) {
  RequireAtLeast(s, 2, "T1N*");
  const Matrix g = PairwiseGram(s, /*centered=*/false);
  const auto n = static_cast<Eigen::Index>(s.n());
  CompensatedSum diag;
  CompensatedSum off;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      (i == j ? diag : off) += g(i, j);
    }
  }
  return diag.value() / static_cast<double>(n) - off.value() / Perm(s.n(), 2);
}

TraceEstimates EstimateAll(const MatrixSample& s, bool centered) {
  TraceEstimates est;
  est.n = s.n();
  est.rows = s.rows();
  est.cols = s.cols();
  if (centered) {
    RequireAtLeast(s, 2, "centered trace estimates");
    const double n = static_cast<double>(s.n());
    const double c = static_cast<double>(s.cols());
    // Leading terms only: Y1N, Y2N and the first term of T*2N.
    const Matrix g = PairwiseGram(s, /*centered=*/false);
    Matrix outer_sum = Matrix::Zero(static_cast<Eigen::Index>(s.rows()),
                                    static_cast<Eigen::Index>(s.rows()));
    CompensatedSum own_outer;
    for (const Matrix& x : s.data()) {
      const Matrix outer = x * x.transpose();
      own_outer += outer.squaredNorm();
      outer_sum += outer;
    }
    CompensatedSum gram_sq;
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      for (Eigen::Index i = 0; i < g.rows(); ++i) {
        if (i != j) gram_sq += g(i, j) * g(i, j);
      }
    }
    const double p2 = Perm(s.n(), 2);
    est.t1 = g.trace() / (c * n);
    est.t2 = (outer_sum.squaredNorm() - own_outer.value()) / (c * c * p2);
    est.t2_star = gram_sq.value() / p2;
  } else {
    RequireAtLeast(s, 4, "trace estimates");
    est.t1 = T1n(s);
    est.t2 = T2nFast(s);
    est.t2_star = T2nStarFast(s);
  }
  if (!(est.t2 > 0.0)) {
    throw Error(ErrorKind::kDegenerateSample,
                "T2N estimate is nonpositive (" + std::to_string(est.t2) + ")");
  }
  if (!(est.t2_star > 0.0)) {
    throw Error(ErrorKind::kDegenerateSample,
                "T*2N estimate is nonpositive (" + std::to_string(est.t2_star) +
                    ")");
  }
  est.tr_sigma_c2_hat = est.t2_star / est.t2;
  return est;
}

SymMatrix SampleRowCovariance(const MatrixSample& s) {
  RequireAtLeast(s, 2, "sample row covariance");
  const Matrix mean = s.Mean();
  const auto r = static_cast<Eigen::Index>(s.rows());
  Matrix acc = Matrix::Zero(r, r);
  for (const Matrix& x : s.data()) {
    const Matrix dev = x - mean;
    acc.selfadjointView<Eigen::Lower>().rankUpdate(dev);
  }
  acc.triangularView<Eigen::StrictlyUpper>() = acc.transpose();
  acc /= static_cast<double>(s.n() - 1) * static_cast<double>(s.cols());
  return SymMatrix(acc);
}

}  // namespace hdtd
