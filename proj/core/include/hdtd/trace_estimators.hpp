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
#include <vector>

#include "hdtd/matrix_core.hpp"

namespace hdtd {

// Unbiased U-statistic estimates of the trace functionals driving the tests.
struct TraceEstimates {
  double t1 = 0.0;               // estimates tr(Sigma_R)
  double t2 = 0.0;               // estimates tr(Sigma_R^2)
  double t2_star = 0.0;          // estimates tr(Omega^2), Omega = Sigma_C (x) Sigma_R
  double tr_sigma_c2_hat = 0.0;  // t2_star / t2, estimates tr(Sigma_C^2)
  std::size_t n = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
};

// P(s, t) = s! / (s - t)!, the number of ordered t-tuples of distinct indices
// drawn from s. Exact for s <= 1e6 and t <= 4; kInvalidArgument otherwise,
// including s < t.
__extension__ typedef unsigned __int128 uint128;

uint128 FallingFactorial(std::uint64_t s, unsigned t);

// Which cross-product orientation the O(N^2) evaluation uses. kAuto picks the
// smaller of r x r and c x c; the result does not depend on the choice.
enum class ProductSide { kAuto, kRows, kColumns };

// T1N = Y1N - Y3N. Requires n >= 2.
double T1n(const MatrixSample& s);

// T2N = Y2N - 2 Y4N + Y5N by enumerating every tuple of distinct indices.
// O(N^4); meant as a reference for small N. The tuples run over the centered
// matrices, which leaves the value unchanged. Requires n >= 4.
double T2nNaive(const MatrixSample& s);

// T2N through the O(N^2) decomposition into pairwise and per-matrix trace
// sums. The sample is centered first; T2N is location invariant, and centering
// removes the cancellation between the large terms. Requires n >= 4.
double T2nFast(const MatrixSample& s, ProductSide side = ProductSide::kAuto);

// T*2N over R_i = vec(X_i), enumerating distinct index tuples over the
// centered Gram matrix. O(N^4). Requires n >= 4.
double T2nStarNaive(const MatrixSample& s);

// T*2N via the closed form in tr(S), tr(S^2) and Q, all read off the centered
// N x N Gram matrix; the rc x rc sample covariance S is never formed.
double T2nStarFast(const MatrixSample& s);

// T1N* = (1/N) sum R_i'R_i - (1/P(N,2)) sum* R_i'R_j, the scalar estimator of
// tr(Sigma_R) tr(Sigma_C*) used by the known-covariance scale step.
double T1nVectorized(const MatrixSample& s);

// Bundles T1N, T2N, T*2N and their ratio. With `centered`, only the leading
// (non-subtracted) U-statistic terms are used, valid when the mean matrix is
// known to be zero; n >= 2 then suffices. Throws kDegenerateSample if
// t2 <= 0 or t2_star <= 0.
TraceEstimates EstimateAll(const MatrixSample& s, bool centered);

// (1 / ((N-1) c)) sum (X_i - Xbar)(X_i - Xbar)', an r x r estimate of
// Sigma_R under tr(Sigma_C) = c. Requires n >= 2.
SymMatrix SampleRowCovariance(const MatrixSample& s);

namespace detail {

// The fast T2N decomposition applied to the raw matrices without centering.
double T2nDecomposition(const std::vector<Matrix>& xs, ProductSide side);

}  // namespace detail
}  // namespace hdtd
