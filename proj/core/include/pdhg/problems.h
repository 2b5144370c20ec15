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

#ifndef PDHG_PROBLEMS_H_
#define PDHG_PROBLEMS_H_

#include "pdhg/cones.h"
#include "pdhg/linalg.h"

namespace pdhg {

// min 1/2 <x, H x> + <c, x>  subject to  A x - b in K.
//
// H is n x n symmetric PSD, A is m x n, K has dimension m and must be
// polyhedral. K = NonposOrthant(m) gives the inequality form A x <= b.
struct QpProblem {
  Matrix h;
  Vector c;
  Matrix a;
  Vector b;
  Cone cone = Cone::NonposOrthant(0);

  int n() const { return static_cast<int>(c.size()); }
  int m() const { return static_cast<int>(b.size()); }
};

// min <c, x>  subject to  A x = b,  x in C.
struct ConicPrimalProblem {
  Cone cone = Cone::Zero(0);
  Matrix a;
  Vector b;
  Vector c;

  int n() const { return static_cast<int>(c.size()); }
  int m() const { return static_cast<int>(b.size()); }
};

}  // namespace pdhg

#endif  // PDHG_PROBLEMS_H_
