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

#include "pdhg_io/scenarios.h"

namespace pdhg::io {

std::optional<Scenario> FindScenario(std::string_view name) {
  const bool lp = name == "lp-example";
  if (!lp && name != "qp-example") return std::nullopt;
  Matrix a(4, 2);
  a << -1, 1, 1, -1, -1, 0, 0, -1;
  Vector c(2);
  c << 1, -2;
  Vector b(4);
  b << -2, 1, 0, 0;
  Matrix h = lp ? Matrix(Matrix::Zero(2, 2)) : Matrix(Matrix::Identity(2, 2));
  Scenario s;
  s.name = std::string(name);
  s.qp = MakeInequalityQp(std::move(h), std::move(c), std::move(a),
                          std::move(b));
  s.z0 = PdhgIterate::Zero(2, 4);
  s.z0.y << 0, 0, -1, -1;
  s.trace_rows = lp ? 50 : 150;
  return s;
}

}  // namespace pdhg::io
