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

#ifndef PDHG_TESTS_SUPPORT_ORACLES_H_
#define PDHG_TESTS_SUPPORT_ORACLES_H_

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "pdhg/ellipsoid_separation.h"
#include "pdhg/linalg.h"
#include "pdhg/qp.h"

// Reference computations used by the tests. None of them call into the code
// under test beyond plain data types.
namespace pdhg::testing {

// The 4 x 2 inequality example: c = (1, -2), b = (-2, 1, 0, 0).
Matrix ExampleA();
Vector ExampleB();
Vector ExampleC();
QpProblem ExampleLp();
QpProblem ExampleQp();
PdhgIterate ExampleStart();
inline constexpr double kExampleStep = 0.3;

// Largest singular value from a full SVD.
double SpectralNormBySvd(const Matrix& a);

// Projection onto {(t, x) : ||x|| <= t} by golden-section search over the
// boundary ray through x, compared against the apex and the point itself.
Vector SocProjectionBySearch(const Vector& z);

// Some x with G x >= h, found by enumerating vertices (n x n row subsets).
// Requires G to have full column rank.
std::optional<Vector> PointInPolyhedron(const Matrix& g, const Vector& h);

// Some s >= 0 with M s = e, found by enumerating column bases.
std::optional<Vector> NonnegativeSolution(const Matrix& m, const Vector& e);

// Random dense matrix with N(0, 1) entries.
Matrix RandomMatrix(int rows, int cols, std::mt19937_64& rng);
Vector RandomVector(int n, std::mt19937_64& rng);

// Feasible inequality rows around a random point, followed by the
// contradictory pair <a, x> <= -1, <-a, x> <= -1.
QpProblem RandomInfeasibleLp(int n, int m_base, std::mt19937_64& rng);

// Families in R^d on either side of the slab |<u, x>| < gap / 2 for a random
// unit u.
SeparationInstance RandomDisjointInstance(int d, int k, int l, double gap,
                                          std::mt19937_64& rng);

// Families whose first members both contain a common random point.
SeparationInstance RandomOverlappingInstance(int d, int k, int l,
                                             std::mt19937_64& rng);

// Well-conditioned random shape with singular values in [0.5, 1.5].
Matrix RandomShape(int d, std::mt19937_64& rng);

}  // namespace pdhg::testing

#endif  // PDHG_TESTS_SUPPORT_ORACLES_H_
