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

#ifndef PDHG_LINALG_H_
#define PDHG_LINALG_H_

#include <cstdint>

#include "Eigen/Core"
#include "pdhg/error.h"

// Dense linear-algebra kernel used by every solver layer. Storage is Eigen;
// this header adds the checked entry points (dimension errors are thrown, not
// asserted) plus a Cholesky wrapper and a deterministic spectral-norm estimate.
namespace pdhg {

using Vector = Eigen::VectorXd;
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

// Returns true iff every entry is finite.
bool AllFinite(const Vector& v);
bool AllFinite(const Matrix& m);

// Returns A * x. Throws DimensionMismatch if A.cols() != x.size().
Vector Matvec(const Matrix& a, const Vector& x);

// Returns A^T * y. Throws DimensionMismatch if A.rows() != y.size().
Vector MatvecTranspose(const Matrix& a, const Vector& y);

// Absolute symmetry tolerance applied to matrices handed to SpdFactorization
// and to the QP Hessian.
inline constexpr double kSymmetryTolerance = 1e-10;

// Max-norm of (M - M^T).
double SymmetryDefect(const Matrix& m);

// Cholesky factor L of a symmetric positive-definite matrix (M = L L^T).
class SpdFactorization {
 public:
  // Throws InvalidArgument if `m` is not square or not symmetric to
  // kSymmetryTolerance, NotPositiveDefinite on a non-positive pivot.
  static SpdFactorization Factorize(const Matrix& m);

  // Solves M s = r. Throws DimensionMismatch.
  Vector Solve(const Vector& r) const;

  const Matrix& lower() const { return lower_; }
  int dim() const { return static_cast<int>(lower_.rows()); }

 private:
  explicit SpdFactorization(Matrix lower) : lower_(std::move(lower)) {}

  Matrix lower_;
};

// Options for the power iteration behind OperatorNormEstimate.
struct PowerIterationOptions {
  int max_iterations = 200;
  double relative_tolerance = 1e-12;
  // The returned value is multiplied by (1 + inflation) so that step-size
  // checks built on it stay conservative.
  double inflation = 1e-9;
  std::uint64_t seed = 0;
};

// Estimates the spectral norm ||A||_2 by power iteration on A^T A. The start
// vector is a seeded Gaussian draw, so the result is deterministic. Returns 0
// for an all-zero matrix. Throws InvalidArgument if A has no entries.
double OperatorNormEstimate(const Matrix& a,
                            const PowerIterationOptions& options = {});

}  // namespace pdhg

#endif  // PDHG_LINALG_H_
