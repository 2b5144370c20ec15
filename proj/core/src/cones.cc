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

#include "pdhg/cones.h"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace pdhg {
namespace {

void CheckDim(int dim, const char* what) {
  if (dim < 0) {
    throw InvalidArgument(std::string(what) + ": negative dimension");
  }
}

// Projection onto {(t, x) : ||x|| <= t}.
void ProjectSecondOrderInPlace(Eigen::Ref<Vector> z) {
  const double t = z(0);
  if (z.size() == 1) {
    z(0) = std::max(t, 0.0);
    return;
  }
  const double norm_x = z.tail(z.size() - 1).norm();
  if (norm_x <= t) return;
  // Boundary t = -||x|| included: the apex is the limit from both branches.
  if (norm_x <= -t) {
    z.setZero();
    return;
  }
  const double alpha = 0.5 * (norm_x + t);
  z(0) = alpha;
  z.tail(z.size() - 1) *= alpha / norm_x;
}

void ProjectInPlace(const Cone& cone, Eigen::Ref<Vector> z) {
  switch (cone.kind()) {
    case Cone::Kind::kZero:
      z.setZero();
      return;
    case Cone::Kind::kFree:
      return;
    case Cone::Kind::kNonnegOrthant:
      z = z.cwiseMax(0.0);
      return;
    case Cone::Kind::kNonposOrthant:
      z = z.cwiseMin(0.0);
      return;
    case Cone::Kind::kSecondOrder:
      ProjectSecondOrderInPlace(z);
      return;
    case Cone::Kind::kNegSecondOrder:
      // P_{-K}(z) = -P_K(-z).
      z = -z;
      ProjectSecondOrderInPlace(z);
      z = -z;
      return;
    case Cone::Kind::kProduct: {
      Eigen::Index offset = 0;
      for (const Cone& factor : cone.factors()) {
        ProjectInPlace(factor, z.segment(offset, factor.dim()));
        offset += factor.dim();
      }
      return;
    }
  }
}

void CheckQuery(const Cone& cone, const Vector& z, const char* what) {
  if (z.size() != cone.dim()) {
    throw DimensionMismatch(std::string(what) + ": cone has dimension " +
                            std::to_string(cone.dim()) + " but point has " +
                            std::to_string(z.size()) + " entries");
  }
}

}  // namespace

Cone Cone::Zero(int dim) {
  CheckDim(dim, "Cone::Zero");
  return Cone(Kind::kZero, dim);
}

Cone Cone::Free(int dim) {
  CheckDim(dim, "Cone::Free");
  return Cone(Kind::kFree, dim);
}

Cone Cone::NonnegOrthant(int dim) {
  CheckDim(dim, "Cone::NonnegOrthant");
  return Cone(Kind::kNonnegOrthant, dim);
}

Cone Cone::NonposOrthant(int dim) {
  CheckDim(dim, "Cone::NonposOrthant");
  return Cone(Kind::kNonposOrthant, dim);
}

Cone Cone::SecondOrder(int dim) {
  if (dim < 1) {
    throw InvalidArgument("Cone::SecondOrder: dimension must be >= 1");
  }
  return Cone(Kind::kSecondOrder, dim);
}

Cone Cone::Product(std::vector<Cone> factors) {
  const int dim = std::accumulate(
      factors.begin(), factors.end(), 0,
      [](int acc, const Cone& c) { return acc + c.dim(); });
  Cone cone(Kind::kProduct, dim);
  cone.factors_ = std::move(factors);
  return cone;
}

Cone Cone::Polar() const {
  switch (kind_) {
    case Kind::kZero:
      return Cone(Kind::kFree, dim_);
    case Kind::kFree:
      return Cone(Kind::kZero, dim_);
    case Kind::kNonnegOrthant:
      return Cone(Kind::kNonposOrthant, dim_);
    case Kind::kNonposOrthant:
      return Cone(Kind::kNonnegOrthant, dim_);
    case Kind::kSecondOrder:
      return Cone(Kind::kNegSecondOrder, dim_);
    case Kind::kNegSecondOrder:
      return Cone(Kind::kSecondOrder, dim_);
    case Kind::kProduct: {
      std::vector<Cone> polars;
      polars.reserve(factors_.size());
      for (const Cone& f : factors_) polars.push_back(f.Polar());
      return Product(std::move(polars));
    }
  }
  return *this;
}

bool Cone::IsPolyhedral() const {
  switch (kind_) {
    case Kind::kSecondOrder:
    case Kind::kNegSecondOrder:
      // Dimension 1 and 2 second-order cones are polyhedral, but we keep the
      // classification structural.
      return false;
    case Kind::kProduct:
      for (const Cone& f : factors_) {
        if (!f.IsPolyhedral()) return false;
      }
      return true;
    default:
      return true;
  }
}

std::vector<Cone> Cone::Leaves() const {
  if (kind_ != Kind::kProduct) return {*this};
  std::vector<Cone> leaves;
  for (const Cone& f : factors_) {
    std::vector<Cone> sub = f.Leaves();
    leaves.insert(leaves.end(), sub.begin(), sub.end());
  }
  return leaves;
}

std::string Cone::DebugString() const {
  const std::string d = std::to_string(dim_);
  switch (kind_) {
    case Kind::kZero:
      return "Zero(" + d + ")";
    case Kind::kFree:
      return "Free(" + d + ")";
    case Kind::kNonnegOrthant:
      return "NonnegOrthant(" + d + ")";
    case Kind::kNonposOrthant:
      return "NonposOrthant(" + d + ")";
    case Kind::kSecondOrder:
      return "SecondOrder(" + d + ")";
    case Kind::kNegSecondOrder:
      return "-SecondOrder(" + d + ")";
    case Kind::kProduct: {
      std::string out = "Product(";
      for (size_t i = 0; i < factors_.size(); ++i) {
        if (i > 0) out += ", ";
        out += factors_[i].DebugString();
      }
      return out + ")";
    }
  }
  return "?";
}

bool operator==(const Cone& a, const Cone& b) {
  return a.kind_ == b.kind_ && a.dim_ == b.dim_ && a.factors_ == b.factors_;
}

Vector Project(const Cone& cone, const Vector& z) {
  CheckQuery(cone, z, "Project");
  Vector out = z;
  ProjectInPlace(cone, out);
  return out;
}

Vector ProjectPolar(const Cone& cone, const Vector& z) {
  CheckQuery(cone, z, "ProjectPolar");
  return z - Project(cone, z);
}

ConeMembershipReport Membership(const Cone& cone, const Vector& z,
                                double tol) {
  if (!(tol >= 0.0)) {
    throw InvalidArgument("Membership: tolerance must be nonnegative");
  }
  CheckQuery(cone, z, "Membership");
  ConeMembershipReport report;
  report.distance = (z - Project(cone, z)).norm();
  report.in_cone = report.distance <= tol;
  return report;
}

}  // namespace pdhg
