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

#ifndef PDHG_IO_SCENARIOS_H_
#define PDHG_IO_SCENARIOS_H_

#include <optional>
#include <string>
#include <string_view>

#include "pdhg/pdhg_core.h"
#include "pdhg/qp.h"

// Built-in inconsistent QP scenarios:
//   min <c, x> (+ 1/2 ||x||^2)  s.t.  A x <= b
// with c = (1, -2), b = (-2, 1, 0, 0), A = [[-1, 1], [1, -1], [-1, 0],
// [0, -1]], run with sigma = tau = 0.3 from x0 = (0, 0), y0 = (0, 0, -1, -1).
namespace pdhg::io {

struct Scenario {
  std::string name;
  QpProblem qp;
  double sigma = 0.3;
  double tau = 0.3;
  PdhgIterate z0;
  // Rows of the short trace table.
  int trace_rows = 0;
  // Length of the long run used for the displacement estimate.
  int long_run = 10000;
};

// "lp-example" (H = 0) or "qp-example" (H = Id); nullopt otherwise.
std::optional<Scenario> FindScenario(std::string_view name);

}  // namespace pdhg::io

#endif  // PDHG_IO_SCENARIOS_H_
