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

#include "pdhg/ellipsoid_separation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include "Eigen/LU"

namespace pdhg {

SingularShapeMatrix::SingularShapeMatrix(int index)
    : InvalidArgument("shape matrix of ellipsoid " + std::to_string(index) +
                      " is singular"),
      index_(index) {}

const Ellipsoid& SeparationInstance::at(int index) const {
  const int k = static_cast<int>(side_one.size());
  if (index < 0 || index >= size()) {
    throw InvalidArgument("ellipsoid index out of range");
  }
  return index < k ? side_one[index] : side_two[index - k];
}

std::string ToString(SeparationStatus status) {
  switch (status) {
    case SeparationStatus::kCommonPoint:
      return "common_point";
    case SeparationStatus::kSeparator:
      return "separator";
    case SeparationStatus::kInconclusive:
      return "inconclusive";
  }
  return "unknown";
}

void ValidateInstance(const SeparationInstance& inst) {
  const int d = inst.dimension;
  if (d < 1) throw InvalidArgument("dimension must be positive");
  if (inst.side_one.empty() || inst.side_two.empty()) {
    throw InvalidArgument("both sides need at least one ellipsoid");
  }
  for (int i = 0; i < inst.size(); ++i) {
    const Ellipsoid& e = inst.at(i);
    if (e.center.size() != d || e.shape.rows() != d || e.shape.cols() != d) {
      throw DimensionMismatch("ellipsoid " + std::to_string(i) +
                              " does not have dimension " + std::to_string(d));
    }
    if (!AllFinite(e.center) || !AllFinite(e.shape)) {
      throw InvalidArgument("ellipsoid " + std::to_string(i) +
                            " has non-finite data");
    }
    const Eigen::MatrixXd shape = e.shape;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(shape);
    if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() <
        kShapePivotTolerance) {
      throw SingularShapeMatrix(i);
    }
  }
}

ConicPrimalProblem Assemble(const SeparationInstance& inst) {
  ValidateInstance(inst);
  const int d = inst.dimension;
  const int k = static_cast<int>(inst.side_one.size());
  const int blocks = inst.size();
  const int n = blocks * (d + 1);
  ConicPrimalProblem cp;
  cp.a = Matrix::Zero(d + 2, n);
  for (int i = 0; i < blocks; ++i) {
    const Ellipsoid& e = inst.at(i);
    const int col = i * (d + 1);
    const bool first = i < k;
    cp.a(first ? 0 : 1, col) = 1.0;
    cp.a.block(2, col, d, 1) = first ? e.center : Vector(-e.center);
    cp.a.block(2, col + 1, d, d) = e.shape;
  }
  cp.b = Vector::Zero(d + 2);
  cp.b[0] = 1.0;
  cp.b[1] = 1.0;
  cp.c = Vector::Zero(n);
  cp.cone = Cone::Product(
      std::vector<Cone>(blocks, Cone::SecondOrder(d + 1)));
  return cp;
}

CommonPoint ReconstructCommonPoint(const SeparationInstance& inst,
                                   const Vector& x) {
  const int d = inst.dimension;
  const int k = static_cast<int>(inst.side_one.size());
  const int l = static_cast<int>(inst.side_two.size());
  if (x.size() != inst.size() * (d + 1)) {
    throw DimensionMismatch("primal point does not match the instance");
  }
  CommonPoint out;
  out.point = Vector::Zero(d);
  out.point_from_side_two = Vector::Zero(d);
  out.lambda.resize(k);
  out.mu.resize(l);
  for (int i = 0; i < inst.size(); ++i) {
    const Ellipsoid& e = inst.at(i);
    const double scalar = x[i * (d + 1)];
    Vector vec = x.segment(i * (d + 1) + 1, d);
    if (i < k) {
      out.lambda[i] = scalar;
      out.point += scalar * e.center + e.shape * vec;
      out.p.push_back(std::move(vec));
    } else {
      out.mu[i - k] = scalar;
      out.point_from_side_two += scalar * e.center - e.shape * vec;
      out.q.push_back(std::move(vec));
    }
  }
  out.reconstruction_gap = (out.point - out.point_from_side_two).norm();
  return out;
}

double Separator::MinMargin() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : margins_one) m = std::min(m, v);
  for (double v : margins_two) m = std::min(m, v);
  return m;
}

ContainmentResult VerifyHalfspaceContainment(const Ellipsoid& e,
                                             const Vector& w, double s,
                                             bool strict) {
  if (w.size() != e.dim()) throw DimensionMismatch("normal has wrong size");
  if (w.isZero(0.0)) throw ZeroNormal("half-space normal is zero");
  ContainmentResult out;
  out.margin = s - (e.shape.transpose() * w).norm() - e.center.dot(w);
  out.contained = strict ? out.margin > 0.0 : out.margin >= 0.0;
  return out;
}

Separator MakeSeparator(const SeparationInstance& inst, const Vector& v_dual) {
  const int d = inst.dimension;
  if (v_dual.size() != d + 2) {
    throw DimensionMismatch("dual displacement does not match the instance");
  }
  Separator sep;
  sep.s = v_dual[0];
  sep.t = v_dual[1];
  sep.w = v_dual.tail(d);
  sep.s_prime = 0.5 * (sep.t - sep.s);
  if (sep.w.isZero(0.0)) return sep;
  const Vector neg_w = -sep.w;
  for (const Ellipsoid& e : inst.side_one) {
    sep.margins_one.push_back(
        VerifyHalfspaceContainment(e, sep.w, sep.s_prime, true).margin);
  }
  for (const Ellipsoid& e : inst.side_two) {
    sep.margins_two.push_back(
        VerifyHalfspaceContainment(e, neg_w, -sep.s_prime, true).margin);
  }
  return sep;
}

SeparationOutcome Separate(const SeparationInstance& inst,
                           const SeparationOptions& options) {
  const ConicPrimalProblem cp = Assemble(inst);
  const PdhgIterate z0 = PdhgIterate::Zero(cp.n(), cp.m());
  SeparationOutcome out;
  try {
    out.solve = SolveConicWithLimit(cp, z0, options.solve);
  } catch (const IterationLimit& e) {
    out.solve = e.partial();
    out.note = e.what();
    return out;
  }

  if (out.solve.verdict.status == VerdictStatus::kConsistentCandidate) {
    CommonPoint point = ReconstructCommonPoint(inst, out.solve.x_bar);
    const bool weights_ok =
        std::abs(point.lambda.sum() - 1.0) <= options.weight_tol &&
        std::abs(point.mu.sum() - 1.0) <= options.weight_tol;
    if (point.reconstruction_gap <= options.common_point_tol && weights_ok) {
      out.status = SeparationStatus::kCommonPoint;
      out.common_point = std::move(point);
    } else {
      out.note = "fixed point does not reconstruct a common point";
    }
    return out;
  }

  const Vector& vd = out.solve.v.v_dual;
  if (vd.norm() > options.solve.thresholds.cert_tol) {
    Separator sep = MakeSeparator(inst, vd);
    if (sep.w.isZero(0.0)) {
      out.note = "dual displacement has a zero normal";
    } else if (!(sep.s + sep.t > 0.0)) {
      out.note = "dual displacement does not satisfy s > -t";
    } else if (!(sep.MinMargin() > 0.0)) {
      out.note = "separator margins are not strictly positive";
    } else {
      out.status = SeparationStatus::kSeparator;
      out.separator = std::move(sep);
    }
    return out;
  }
  out.note = "displacement is zero but the iteration did not converge";
  return out;
}

double SampleSideMargin(const std::vector<Ellipsoid>& ellipsoids,
                        const Vector& w, double s_prime, Side side, int count,
                        std::uint64_t seed) {
  if (count < 1) throw InvalidArgument("sample count must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = std::numeric_limits<double>::infinity();
  for (const Ellipsoid& e : ellipsoids) {
    if (w.size() != e.dim()) throw DimensionMismatch("normal has wrong size");
    Vector u(e.dim());
    for (int j = 0; j < count; ++j) {
      double norm = 0.0;
      while (norm == 0.0) {
        for (int i = 0; i < u.size(); ++i) u[i] = normal(rng);
        norm = u.norm();
      }
      const Vector x = e.center + e.shape * (u / norm);
      const double val =
          side == Side::kOne ? s_prime - w.dot(x) : w.dot(x) - s_prime;
      worst = std::min(worst, val);
    }
  }
  return worst;
}

double SampleCheckSeparation(const SeparationInstance& inst,
                             const Separator& sep, int count,
                             std::uint64_t seed) {
  return std::min(
      SampleSideMargin(inst.side_one, sep.w, sep.s_prime, Side::kOne, count,
                       seed),
      SampleSideMargin(inst.side_two, sep.w, sep.s_prime, Side::kTwo, count,
                       seed + 1));
}

}  // namespace pdhg
