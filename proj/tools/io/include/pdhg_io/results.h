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

#ifndef PDHG_IO_RESULTS_H_
#define PDHG_IO_RESULTS_H_

#include <string>
#include <vector>

#include "pdhg/conic_standard.h"
#include "pdhg/ellipsoid_separation.h"
#include "pdhg/qp.h"
#include "pdhg_io/json_writer.h"

// Result documents and trace tables written by the command-line tool.
namespace pdhg::io {

inline constexpr int kResultSchemaVersion = 1;

Json ToJson(const ResidualReport& report);
Json ToJson(const InfeasibilityCertificate& cert);
Json ToJson(const DisplacementEstimate& v);

// Documents carry "schema_version" and "kind"; "wall_time_seconds" is the
// only field that varies between identical runs.
Json QpResultDocument(const QpSolveResult& result, double wall_time_seconds);
Json ConicResultDocument(const ConicSolveResult& result,
                         double wall_time_seconds);
Json SeparationDocument(const SeparationOutcome& outcome,
                        double wall_time_seconds);

// CSV with header k,norm_dx,norm_dy,residual_m,norm_z.
std::string IterationCsv(const IterateTrace& trace);

// CSV with header
// k,norm_dx,norm_dy,norm_dx_minus_vR,norm_dy_minus_vD,shifted_resid_x,
// shifted_resid_y.
std::string ShiftedIterateCsv(const std::vector<ShiftedIterateRow>& rows);

}  // namespace pdhg::io

#endif  // PDHG_IO_RESULTS_H_
