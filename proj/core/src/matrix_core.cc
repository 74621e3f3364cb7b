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

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "hdtd/error.hpp"

namespace hdtd {
namespace {

struct Spectrum {
  Vector values;
  Matrix vectors;
  double max_eigen = 0.0;
  bool diagonal = false;
};

bool IsDiagonal(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != 0.0) return false;
    }
  }
  return true;
}

// Diagonal inputs have the canonical basis as eigenvectors; skipping the
// solver keeps their roots exact.
Spectrum Decompose(const SymMatrix& a) {
  if (IsDiagonal(a.matrix())) {
    const auto d = a.matrix().rows();
    Spectrum s{a.matrix().diagonal(), Matrix::Identity(d, d), 0.0, true};
    s.max_eigen = d > 0 ? s.values.maxCoeff() : 0.0;
    return s;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::kInvalidArgument,
                "symmetric eigendecomposition did not converge");
  }
  Spectrum s{solver.eigenvalues(), solver.eigenvectors(), 0.0};
  s.max_eigen = s.values.size() > 0 ? s.values.maxCoeff() : 0.0;
  return s;
}

// V * diag(f) * V', symmetrized so the result is exactly symmetric.
SymMatrix Rebuild(const Spectrum& s, const Vector& f) {
  if (s.diagonal) return SymMatrix(Matrix(f.asDiagonal()));
  const Matrix scaled = s.vectors * f.asDiagonal();
  return SymMatrix(scaled * s.vectors.transpose());
}

}  // namespace

SymMatrix::SymMatrix(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::kInvalidArgument,
                "symmetric matrix must be square, got " +
                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  if (!a.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument,
                "symmetric matrix has non-finite entries");
  }
  const double scale = a.size() > 0 ? a.cwiseAbs().maxCoeff() : 0.0;
  const double asym = a.size() > 0 ? (a - a.transpose()).cwiseAbs().maxCoeff()
                                   : 0.0;
  if (asym > 1e-10 * std::max(scale, 1e-300)) {
    throw Error(ErrorKind::kInvalidArgument, "matrix is not symmetric");
  }
  m_ = a.triangularView<Eigen::Upper>();
  m_.triangularView<Eigen::StrictlyLower>() = a.transpose();
}

SymMatrix SymMatrix::Identity(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return SymMatrix(Matrix::Identity(d, d));
}

SymMatrix SymMatrix::Diagonal(std::span<const double> diag) {
  Vector v(static_cast<Eigen::Index>(diag.size()));
  for (std::size_t i = 0; i < diag.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = diag[i];
  }
  return SymMatrix(Matrix(v.asDiagonal()));
}

MatrixSample::MatrixSample(std::vector<Matrix> data) : data_(std::move(data)) {
  if (data_.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "sample must hold at least one matrix");
  }
  rows_ = static_cast<std::size_t>(data_.front().rows());
  cols_ = static_cast<std::size_t>(data_.front().cols());
  if (rows_ == 0 || cols_ == 0) {
    throw Error(ErrorKind::kInvalidArgument, "sample matrices must be non-empty");
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    const Matrix& x = data_[i];
    if (static_cast<std::size_t>(x.rows()) != rows_ ||
        static_cast<std::size_t>(x.cols()) != cols_) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "matrix " + std::to_string(i + 1) + " is " +
                      std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                      ", expected " + std::to_string(rows_) + "x" +
                      std::to_string(cols_));
    }
    if (!x.allFinite()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "matrix " + std::to_string(i + 1) + " has non-finite entries");
    }
  }
}

Matrix MatrixSample::Sum() const {
  Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(rows_),
                            static_cast<Eigen::Index>(cols_));
  for (const Matrix& x : data_) sum += x;
  return sum;
}

Matrix MatrixSample::Mean() const {
  return Sum() / static_cast<double>(n());
}

bool operator==(const MatrixSample& x, const MatrixSample& y) {
  if (x.n() != y.n() || x.rows() != y.rows() || x.cols() != y.cols()) {
    return false;
  }
  for (std::size_t i = 0; i < x.n(); ++i) {
    if (x[i] != y[i]) return false;
  }
  return true;
}

SymMatrix SymSqrt(const SymMatrix& a, double tol) {
  const Spectrum s = Decompose(a);
  const double floor = tol * s.max_eigen;
  Vector roots(s.values.size());
  for (Eigen::Index k = 0; k < s.values.size(); ++k) {
    const double lambda = s.values(k);
    if (lambda < -floor || (s.max_eigen <= 0.0 && lambda < 0.0)) {
      throw Error(ErrorKind::kNotPositiveSemiDefinite,
                  "eigenvalue " + std::to_string(lambda) +
                      " is below the PSD tolerance");
    }
    roots(k) = lambda < floor ? 0.0 : std::sqrt(lambda);
  }
  return Rebuild(s, roots);
}

SymMatrix SymInvSqrt(const SymMatrix& a, double tol) {
  const Spectrum s = Decompose(a);
  const double min_eigen = s.values.size() > 0 ? s.values.minCoeff() : 0.0;
  if (s.max_eigen <= 0.0 || min_eigen <= tol * s.max_eigen) {
    throw Error(ErrorKind::kSingularMatrix,
                "matrix is not positive definite (smallest eigenvalue " +
                    std::to_string(min_eigen) + ")");
  }
  return Rebuild(s, s.values.cwiseSqrt().cwiseInverse());
}

MatrixSample TransposeSample(const MatrixSample& s) {
  std::vector<Matrix> out;
  out.reserve(s.n());
  for (const Matrix& x : s.data()) out.emplace_back(x.transpose());
  return MatrixSample(std::move(out));
}

Matrix PairwiseGram(const MatrixSample& s, bool centered) {
  const auto n = static_cast<Eigen::Index>(s.n());
  const auto rc = static_cast<Eigen::Index>(s.rows() * s.cols());
  Matrix stacked(n, rc);
  for (Eigen::Index i = 0; i < n; ++i) {
    stacked.row(i) = s[static_cast<std::size_t>(i)].reshaped().transpose();
  }
  if (centered) {
    const Eigen::RowVectorXd mean = stacked.colwise().mean();
    stacked.rowwise() -= mean;
  }
  Matrix gram(n, n);
  gram.setZero();
  gram.selfadjointView<Eigen::Lower>().rankUpdate(stacked);
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
  return gram;
}

}  // namespace hdtd
