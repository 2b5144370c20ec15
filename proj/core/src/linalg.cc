// Copyright 2026 The pdhg_diag Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pdhg/linalg.h"

#include <cmath>
#include <random>
#include <string>


namespace pdhg {

bool AllFinite(const Vector& v) { return v.allFinite(); }
bool AllFinite(const Matrix& m) { return m.allFinite(); }

Vector Matvec(const Matrix& a, const Vector& x) {
  if (a.cols() != x.size()) {
    throw DimensionMismatch("Matvec: matrix has " + std::to_string(a.cols()) +
                            " columns but vector has " +
                            std::to_string(x.size()) + " entries");
  }
  return a * x;
}

Vector MatvecTranspose(const Matrix& a, const Vector& y) {
  if (a.rows() != y.size()) {
    throw DimensionMismatch("MatvecTranspose: matrix has " +
                            std::to_string(a.rows()) + " rows but vector has " +
                            std::to_string(y.size()) + " entries");
  }
  return a.transpose() * y;
}

double SymmetryDefect(const Matrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  if (m.size() == 0) return 0.0;
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

SpdFactorization SpdFactorization::Factorize(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw InvalidArgument("SpdFactorization: matrix is not square");
  }
  if (!m.allFinite()) {
    throw InvalidArgument("SpdFactorization: matrix has non-finite entries");
  }
  if (SymmetryDefect(m) > kSymmetryTolerance) {
    throw InvalidArgument("SpdFactorization: matrix is not symmetric");
  }
  // Plain left-looking Cholesky; a non-positive pivot means the input is not
  // positive definite, which for Id + sigma*H means H is not PSD.
  const Eigen::Index n = m.rows();
  Matrix lower = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = m(j, j);
    for (Eigen::Index k = 0; k < j; ++k) pivot -= lower(j, k) * lower(j, k);
    if (!(pivot > 0.0)) {
      throw NotPositiveDefinite("SpdFactorization: non-positive pivot " +
                                std::to_string(pivot) + " at index " +
                                std::to_string(j));
    }
    const double diag = std::sqrt(pivot);
    lower(j, j) = diag;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
      lower(i, j) = s / diag;
    }
  }
  return SpdFactorization(std::move(lower));
}

Vector SpdFactorization::Solve(const Vector& r) const {
  if (r.size() != lower_.rows()) {
    throw DimensionMismatch("SpdFactorization::Solve: expected " +
                            std::to_string(lower_.rows()) + " entries, got " +
                            std::to_string(r.size()));
  }
  Vector s = lower_.triangularView<Eigen::Lower>().solve(r);
  lower_.transpose().triangularView<Eigen::Upper>().solveInPlace(s);
  return s;
}

double OperatorNormEstimate(const Matrix& a,
                            const PowerIterationOptions& options) {
  if (a.size() == 0) {
    throw InvalidArgument("OperatorNormEstimate: matrix has no entries");
  }
  if (a.cwiseAbs().maxCoeff() == 0.0) return 0.0;

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector x(a.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = normal(rng);
  x.normalize();

  // Rayleigh quotient of A^T A, i.e. ||A x||^2 for unit x.
  double lambda = 0.0;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    Vector ax = a * x;
    const double next = ax.squaredNorm();
    Vector atax = a.transpose() * ax;
    const double norm = atax.norm();
    if (norm == 0.0) break;  // x landed in ker A; keep the last quotient
    x = atax / norm;
    const bool converged =
        iter > 0 && std::abs(next - lambda) <=
                        options.relative_tolerance * std::max(next, lambda);
    lambda = std::max(lambda, next);
    if (converged) break;
  }
  // One more quotient with the final direction.
  lambda = std::max(lambda, (a * x).squaredNorm());
  return std::sqrt(lambda) * (1.0 + options.inflation);
}

}  // namespace pdhg
