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

#ifndef PDHG_CONES_H_
#define PDHG_CONES_H_

#include <string>
#include <vector>

#include "pdhg/linalg.h"

namespace pdhg {

// Closed convex cone descriptor. Second-order blocks use the layout
// (t, x_1, ..., x_{dim-1}) with membership ||x|| <= t. kNegSecondOrder is the
// polar of kSecondOrder and exists so that Polar() is closed over the type.
class Cone {
 public:
  enum class Kind {
    kZero,
    kFree,
    kNonnegOrthant,
    kNonposOrthant,
    kSecondOrder,
    kNegSecondOrder,
    kProduct,
  };

  static Cone Zero(int dim);
  static Cone Free(int dim);
  static Cone NonnegOrthant(int dim);
  static Cone NonposOrthant(int dim);
  // dim >= 1; a one-dimensional second-order cone is the half-line [0, inf).
  static Cone SecondOrder(int dim);
  static Cone Product(std::vector<Cone> factors);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  // Empty unless kind() == kProduct.
  const std::vector<Cone>& factors() const { return factors_; }

  // The polar cone {u : <u, k> <= 0 for all k in K}.
  Cone Polar() const;

  // True for products of zero, free and orthant blocks.
  bool IsPolyhedral() const;

  // Product factors flattened into leaf blocks in order. A non-product cone
  // returns itself.
  std::vector<Cone> Leaves() const;

  std::string DebugString() const;

  friend bool operator==(const Cone& a, const Cone& b);

 private:
  Cone(Kind kind, int dim) : kind_(kind), dim_(dim) {}

  Kind kind_;
  int dim_;
  std::vector<Cone> factors_;
};

// Euclidean projection onto `cone`. Throws DimensionMismatch.
Vector Project(const Cone& cone, const Vector& z);

// Projection onto the polar cone, computed as z - Project(cone, z).
Vector ProjectPolar(const Cone& cone, const Vector& z);

struct ConeMembershipReport {
  bool in_cone = false;
  // Euclidean distance from the query point to the cone.
  double distance = 0.0;
};

// distance = ||z - Project(cone, z)||; in_cone iff distance <= tol.
// Throws InvalidArgument for tol < 0 and DimensionMismatch.
ConeMembershipReport Membership(const Cone& cone, const Vector& z, double tol);

}  // namespace pdhg

#endif  // PDHG_CONES_H_
