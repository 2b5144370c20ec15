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

#ifndef PDHG_ELLIPSOID_SEPARATION_H_
#define PDHG_ELLIPSOID_SEPARATION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdhg/conic_standard.h"
#include "pdhg/problems.h"

// Separation of two finite families of ellipsoids
//   E = {x : ||shape^{-1} (x - center)|| <= 1}
// by PDHG on a second-order cone feasibility problem. Either the convex hulls
// of the two families meet, and a common point is returned, or the dual
// displacement yields a strictly separating hyperplane.
namespace pdhg {

class SingularShapeMatrix : public InvalidArgument {
 public:
  explicit SingularShapeMatrix(int index);
  // Position in side_one followed by side_two.
  int index() const { return index_; }

 private:
  int index_;
};

class ZeroNormal : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

inline constexpr double kShapePivotTolerance = 1e-12;

struct Ellipsoid {
  Matrix shape;
  Vector center;

  int dim() const { return static_cast<int>(center.size()); }
};

struct SeparationInstance {
  int dimension = 0;
  std::vector<Ellipsoid> side_one;
  std::vector<Ellipsoid> side_two;

  int size() const {
    return static_cast<int>(side_one.size() + side_two.size());
  }
  // Ellipsoid by position in side_one followed by side_two.
  const Ellipsoid& at(int index) const;
};

// Throws InvalidArgument (empty side, non-finite data), DimensionMismatch,
// or SingularShapeMatrix when an LU pivot of a shape falls below
// kShapePivotTolerance.
void ValidateInstance(const SeparationInstance& inst);

// Variables are (k + l) blocks of size d + 1, each (scalar, d-vector) in
// SecondOrder(d + 1): (lambda_i, p_i) for side one, then (mu_j, q_j).
//   row 0:     sum_i lambda_i = 1
//   row 1:     sum_j mu_j = 1
//   rows 2..:  sum_i (lambda_i c_i + A_i p_i) + sum_j (-mu_j d_j + B_j q_j) = 0
// with c = 0.
ConicPrimalProblem Assemble(const SeparationInstance& inst);

struct CommonPoint {
  // sum_i lambda_i c_i + A_i p_i.
  Vector point;
  // sum_j mu_j d_j - B_j q_j; agrees with `point` up to reconstruction_gap.
  Vector point_from_side_two;
  double reconstruction_gap = 0.0;
  Vector lambda;
  Vector mu;
  std::vector<Vector> p;
  std::vector<Vector> q;
};

struct Separator {
  // v_dual = (s, t, w).
  Vector w;
  double s = 0.0;
  double t = 0.0;
  // Offset of the hyperplane <w, x> = s_prime; -s < s_prime < t.
  double s_prime = 0.0;
  // s_prime - ||A_i^T w|| - <c_i, w>, positive for every side-one ellipsoid.
  std::vector<double> margins_one;
  // -s_prime - ||B_j^T w|| + <d_j, w>, positive for every side-two ellipsoid.
  std::vector<double> margins_two;

  double MinMargin() const;
};

enum class SeparationStatus { kCommonPoint, kSeparator, kInconclusive };

std::string ToString(SeparationStatus status);

struct SeparationOptions {
  ConicSolveOptions solve;
  // Bound on the disagreement of the two reconstructions of a common point.
  double common_point_tol = 1e-6;
  // Bound on |sum lambda - 1| and |sum mu - 1|.
  double weight_tol = 1e-8;
};

struct SeparationOutcome {
  SeparationStatus status = SeparationStatus::kInconclusive;
  std::optional<CommonPoint> common_point;
  std::optional<Separator> separator;
  // The underlying conic run (partial when the iteration limit was hit).
  ConicSolveResult solve;
  std::string note;
};

SeparationOutcome Separate(const SeparationInstance& inst,
                           const SeparationOptions& options = {});

// Splits x into the blocks of Assemble and evaluates both reconstructions.
CommonPoint ReconstructCommonPoint(const SeparationInstance& inst,
                                   const Vector& x);

// Reads (s, t, w) off v_dual and evaluates the midpoint hyperplane.
Separator MakeSeparator(const SeparationInstance& inst, const Vector& v_dual);

struct ContainmentResult {
  bool contained = false;
  // s - ||shape^T w|| - <center, w>.
  double margin = 0.0;
};

// E lies in {x : <w, x> <= s} iff the margin is >= 0 (> 0 when strict).
// Throws ZeroNormal for w = 0.
ContainmentResult VerifyHalfspaceContainment(const Ellipsoid& e,
                                             const Vector& w, double s,
                                             bool strict);

enum class Side { kOne, kTwo };

// Minimum over `count` boundary points x = center + shape u (u uniform on the
// unit sphere) of every ellipsoid of s_prime - <w, x> (kOne) or
// <w, x> - s_prime (kTwo).
double SampleSideMargin(const std::vector<Ellipsoid>& ellipsoids,
                        const Vector& w, double s_prime, Side side, int count,
                        std::uint64_t seed);

// Worst sampled signed margin over both sides; positive for a valid
// separator.
double SampleCheckSeparation(const SeparationInstance& inst,
                             const Separator& sep, int count,
                             std::uint64_t seed);

}  // namespace pdhg

#endif  // PDHG_ELLIPSOID_SEPARATION_H_
