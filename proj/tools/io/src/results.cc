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

#include "pdhg_io/results.h"

#include <utility>

namespace pdhg::io {

Json ToJson(const ResidualReport& report) {
  Json entries = Json::object();
  for (const auto& e : report.entries) entries[e.name] = e.value;
  return Json{{"tol", report.tol},
              {"passed", report.Passed()},
              {"residuals", std::move(entries)}};
}

Json ToJson(const InfeasibilityCertificate& cert) {
  return Json{{"kind", ToString(cert.kind)},
              {"vector", ToJson(cert.vector)},
              {"eq_residual", cert.eq_residual},
              {"cone_residual", cert.cone_residual},
              {"strict_margin", cert.strict_margin},
              {"displacement_gap", cert.displacement_gap}};
}

Json ToJson(const DisplacementEstimate& v) {
  return Json{{"v_primal", ToJson(v.v_primal)},
              {"v_dual", ToJson(v.v_dual)},
              {"m_norm", v.m_norm},
              {"method", ToString(v.method.kind)},
              {"window", v.method.window},
              {"iterations_used", v.iterations_used}};
}

namespace {

Json Header(const char* kind, const std::string& status) {
  Json doc;
  doc["schema_version"] = kResultSchemaVersion;
  doc["kind"] = kind;
  doc["status"] = status;
  return doc;
}

void AddRun(Json& doc, double sigma, double tau, const IterateTrace& trace,
            const DisplacementEstimate& v, const InconsistencyVerdict& verdict,
            const std::vector<InfeasibilityCertificate>& certs) {
  doc["iterations"] = trace.iterations;
  doc["stop_reason"] = ToString(trace.stop_reason);
  doc["sigma"] = sigma;
  doc["tau"] = tau;
  doc["final_residual_m"] =
      trace.scalars.empty() ? 0.0 : trace.last_scalars().residual_m;
  doc["displacement"] = ToJson(v);
  Json cert_arr = Json::array();
  for (const auto& c : certs) cert_arr.push_back(ToJson(c));
  doc["certificates"] = std::move(cert_arr);
  doc["residual_report"] = ToJson(verdict.residual_report);
  if (!verdict.note.empty()) doc["note"] = verdict.note;
}

}  // namespace

Json QpResultDocument(const QpSolveResult& result, double wall_time_seconds) {
  Json doc = Header("qp_result", ToString(result.verdict.status));
  AddRun(doc, result.sigma, result.tau, result.trace, result.v, result.verdict,
         result.certificates);
  if (result.verdict.status == VerdictStatus::kConsistentCandidate) {
    doc["solution"] = Json{{"x", ToJson(result.trace.final_iterate.x)},
                           {"y", ToJson(result.trace.final_iterate.y)}};
  }
  doc["wall_time_seconds"] = wall_time_seconds;
  return doc;
}

Json ConicResultDocument(const ConicSolveResult& result,
                         double wall_time_seconds) {
  Json doc = Header("conic_result", ToString(result.verdict.status));
  AddRun(doc, result.sigma, result.tau, result.trace, result.v, result.verdict,
         result.certificates);
  doc["converged"] = result.converged;
  doc["x_bar"] = ToJson(result.x_bar);
  doc["kernel_condition"] =
      Json{{"holds", result.kernel_condition.holds},
           {"min_norm_ax", result.kernel_condition.min_norm_ax},
           {"heuristic", result.kernel_condition.heuristic}};
  Json warnings = Json::array();
  for (const auto& w : result.warnings) warnings.push_back(w);
  doc["warnings"] = std::move(warnings);
  doc["wall_time_seconds"] = wall_time_seconds;
  return doc;
}

Json SeparationDocument(const SeparationOutcome& outcome,
                        double wall_time_seconds) {
  Json doc = Header("separation_result", ToString(outcome.status));
  if (outcome.separator) {
    const Separator& sep = *outcome.separator;
    doc["w"] = ToJson(sep.w);
    doc["s"] = sep.s;
    doc["t"] = sep.t;
    doc["s_prime"] = sep.s_prime;
    Json margins = Json::array();
    for (double m : sep.margins_one) margins.push_back(m);
    for (double m : sep.margins_two) margins.push_back(m);
    doc["margins"] = std::move(margins);
  }
  if (outcome.common_point) {
    const CommonPoint& cp = *outcome.common_point;
    doc["point"] = ToJson(cp.point);
    doc["reconstruction_gap"] = cp.reconstruction_gap;
    doc["lambda"] = ToJson(cp.lambda);
    doc["mu"] = ToJson(cp.mu);
  }
  const ConicSolveResult& run = outcome.solve;
  doc["iterations"] = run.trace.iterations;
  doc["sigma"] = run.sigma;
  doc["tau"] = run.tau;
  doc["displacement"] = ToJson(run.v);
  if (!outcome.note.empty()) doc["note"] = outcome.note;
  doc["wall_time_seconds"] = wall_time_seconds;
  return doc;
}

std::string IterationCsv(const IterateTrace& trace) {
  std::string out = "k,norm_dx,norm_dy,residual_m,norm_z\n";
  for (std::size_t k = 0; k < trace.scalars.size(); ++k) {
    const auto& s = trace.scalars[k];
    out += std::to_string(k) + "," + FormatDouble(s.norm_dx) + "," +
           FormatDouble(s.norm_dy) + "," + FormatDouble(s.residual_m) + "," +
           FormatDouble(s.norm_z) + "\n";
  }
  return out;
}

std::string ShiftedIterateCsv(const std::vector<ShiftedIterateRow>& rows) {
  std::string out =
      "k,norm_dx,norm_dy,norm_dx_minus_vR,norm_dy_minus_vD,shifted_resid_x,"
      "shifted_resid_y\n";
  for (const auto& r : rows) {
    out += std::to_string(r.k) + "," + FormatDouble(r.norm_dx) + "," +
           FormatDouble(r.norm_dy) + "," + FormatDouble(r.norm_dx_minus_vR) +
           "," + FormatDouble(r.norm_dy_minus_vD) + "," +
           FormatDouble(r.shifted_resid_x) + "," +
           FormatDouble(r.shifted_resid_y) + "\n";
  }
  return out;
}

}  // namespace pdhg::io
