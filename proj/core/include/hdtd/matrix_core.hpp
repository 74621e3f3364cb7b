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
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hdtd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// A real symmetric matrix. Construction mirrors the upper triangle into the
// lower one, so entries satisfy A(a,b) == A(b,a) exactly.
class SymMatrix {
 public:
  SymMatrix() = default;

  // Throws kInvalidArgument if `a` is not square, has non-finite entries, or
  // is asymmetric beyond 1e-10 relative to its largest entry.
  explicit SymMatrix(const Matrix& a);

  static SymMatrix Identity(std::size_t dim);
  static SymMatrix Diagonal(std::span<const double> diag);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double operator()(std::size_t a, std::size_t b) const {
    return m_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  }
  double trace() const { return m_.trace(); }

  friend bool operator==(const SymMatrix& x, const SymMatrix& y) {
    return x.m_.rows() == y.m_.rows() && x.m_ == y.m_;
  }

 private:
  Matrix m_;
};

// N real r x c matrices X_1..X_N. All share dimensions and every entry is
// finite; both are checked once, at construction.
class MatrixSample {
 public:
  MatrixSample() = default;
  explicit MatrixSample(std::vector<Matrix> data);

  std::size_t n() const { return data_.size(); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  const Matrix& operator[](std::size_t i) const { return data_[i]; }
  const std::vector<Matrix>& data() const { return data_; }

  // Sum of all X_i; the sample mean times N.
  Matrix Sum() const;
  Matrix Mean() const;

  friend bool operator==(const MatrixSample& x, const MatrixSample& y);

 private:
  std::vector<Matrix> data_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
};

inline constexpr double kDefaultEigenTol = 1e-10;

// Symmetric PSD square root by spectral decomposition. Eigenvalues below
// tol * lambda_max are clamped to zero; anything below -tol * lambda_max is
// reported as kNotPositiveSemiDefinite.
SymMatrix SymSqrt(const SymMatrix& a, double tol = kDefaultEigenTol);

// Symmetric inverse square root. kSingularMatrix unless
// lambda_min > tol * lambda_max.
SymMatrix SymInvSqrt(const SymMatrix& a, double tol = kDefaultEigenTol);

MatrixSample TransposeSample(const MatrixSample& s);

// N x N matrix of inner products <vec(X_i - m), vec(X_j - m)> where m is the
// sample mean when `centered`, zero otherwise.
Matrix PairwiseGram(const MatrixSample& s, bool centered);

// Frobenius inner product <A, B> = tr(A'B).
inline double FrobeniusDot(const Matrix& a, const Matrix& b) {
  return (a.array() * b.array()).sum();
}

}  // namespace hdtd
