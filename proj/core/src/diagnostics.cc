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

#include "pdhg/diagnostics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

namespace pdhg {

std::string ToString(EstimationMethod::Kind kind) {
  switch (kind) {
    case EstimationMethod::Kind::kLastDifference:
      return "last_difference";
    case EstimationMethod::Kind::kAveragedDifferences:
      return "averaged_differences";
    case EstimationMethod::Kind::kPazyScaled:
      return "pazy_scaled";
  }
  return "unknown";
}

std::string ToString(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::kConsistentCandidate:
      return "consistent_candidate";
    case VerdictStatus::kPrimalInfeasible:
      return "primal_infeasible";
    case VerdictStatus::kDualInfeasible:
      return "dual_infeasible";
    case VerdictStatus::kBothInfeasible:
      return "both_infeasible";
    case VerdictStatus::kInconclusive:
      return "inconclusive";
  }
  return "unknown";
}

std::string ToString(InfeasibilityCertificate::Kind kind) {
  switch (kind) {
    case InfeasibilityCertificate::Kind::kDualInfeasibleRay:
      return "dual_infeasible_ray";
    case InfeasibilityCertificate::Kind::kPrimalInfeasibleMultiplier:
      return "primal_infeasible_multiplier";
  }
  return "unknown";
}

DisplacementEstimate EstimateDisplacement(const IterateTrace& trace,
                                          const MetricM& metric,
                                          EstimationMethod method) {
  if (trace.iterations < 1) throw EmptyTrace("trace has no iterations");
  PdhgIterate v;
  int used = 0;
  switch (method.kind) {
    case EstimationMethod::Kind::kLastDifference: {
      if (trace.differences.empty()) {
        throw EmptyTrace("trace stores no differences");
      }
      v = trace.differences.back().z;
      used = 1;
      break;
    }
    case EstimationMethod::Kind::kAveragedDifferences: {
      if (method.window < 1) {
        throw InvalidArgument("averaging window must be positive");
      }
      const int available = static_cast<int>(trace.differences.size());
      if (available < method.window + 1) {
        throw EmptyTrace("trace stores " + std::to_string(available) +
                         " differences, need " +
                         std::to_string(method.window + 1));
      }
      v = PdhgIterate::Zero(static_cast<int>(trace.final_iterate.x.size()),
                            static_cast<int>(trace.final_iterate.y.size()));
      for (int i = available - method.window; i < available; ++i) {
        v += trace.differences[i].z;
      }
      v *= 1.0 / method.window;
      used = method.window;
      break;
    }
    case EstimationMethod::Kind::kPazyScaled: {
      v = (-1.0 / trace.iterations) * trace.final_iterate;
      used = trace.iterations;
      break;
    }
  }
  DisplacementEstimate out;
  out.m_norm = metric.Norm(v);
  out.v_primal = std::move(v.x);
  out.v_dual = std::move(v.y);
  out.method = method;
  out.iterations_used = used;
  return out;
}

DisplacementEstimate EstimateDisplacementAuto(const IterateTrace& trace,
                                              const MetricM& metric) {
  const auto averaged = EstimationMethod::AveragedDifferences();
  if (trace.stop_reason != StopReason::kResidualTolerance &&
      static_cast<int>(trace.differences.size()) >= averaged.window + 1) {
    return EstimateDisplacement(trace, metric, averaged);
  }
  return EstimateDisplacement(trace, metric,
                              EstimationMethod::LastDifference());
}

RangeSample MakeRangeSample(const QpProblem& qp, Vector u, Vector p, Vector w,
                            Vector q) {
  if (u.size() != qp.n() || w.size() != qp.n() || p.size() != qp.m() ||
      q.size() != qp.m()) {
    throw DimensionMismatch("range sample generators have wrong dimensions");
  }
  RangeSample s;
  s.r = Matvec(qp.h, u) + MatvecTranspose(qp.a, p) + qp.c;
  s.d = q + Matvec(qp.a, w) + qp.b;
  s.witness = {std::move(u), std::move(p), std::move(w), std::move(q)};
  return s;
}

namespace {

// Fills `out` (dimension of `cone`) with a random element of the cone.
void DrawFromCone(const Cone& cone, std::mt19937_64& rng,
                  std::normal_distribution<double>& normal, Vector& out,
                  int offset) {
  switch (cone.kind()) {
    case Cone::Kind::kZero:
      for (int i = 0; i < cone.dim(); ++i) out[offset + i] = 0.0;
      return;
    case Cone::Kind::kFree:
      for (int i = 0; i < cone.dim(); ++i) out[offset + i] = normal(rng);
      return;
    case Cone::Kind::kNonnegOrthant:
      for (int i = 0; i < cone.dim(); ++i) {
        out[offset + i] = std::abs(normal(rng));
      }
      return;
    case Cone::Kind::kNonposOrthant:
      for (int i = 0; i < cone.dim(); ++i) {
        out[offset + i] = -std::abs(normal(rng));
      }
      return;
    case Cone::Kind::kProduct:
      for (const Cone& f : cone.factors()) {
        DrawFromCone(f, rng, normal, out, offset);
        offset += f.dim();
      }
      return;
    case Cone::Kind::kSecondOrder:
    case Cone::Kind::kNegSecondOrder:
      break;
  }
  throw NonPolyhedralCone("range sampling needs a polyhedral cone, got " +
                          cone.DebugString());
}

}  // namespace

std::vector<RangeSample> SampleRange(const QpProblem& qp, int count,
                                     std::uint64_t seed) {
  if (count < 0) throw InvalidArgument("sample count must be nonnegative");
  if (!qp.cone.IsPolyhedral()) {
    throw NonPolyhedralCone("range sampling needs a polyhedral cone, got " +
                            qp.cone.DebugString());
  }
  if (qp.cone.dim() != qp.m()) {
    throw DimensionMismatch("cone dimension does not match b");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Cone polar = qp.cone.Polar();
  std::vector<RangeSample> out;
  out.reserve(count);
  for (int s = 0; s < count; ++s) {
    Vector u(qp.n()), w(qp.n()), p(qp.m()), q(qp.m());
    for (int i = 0; i < qp.n(); ++i) u[i] = normal(rng);
    for (int i = 0; i < qp.n(); ++i) w[i] = normal(rng);
    DrawFromCone(polar, rng, normal, p, 0);
    DrawFromCone(qp.cone, rng, normal, q, 0);
    out.push_back(MakeRangeSample(qp, std::move(u), std::move(p), std::move(w),
                                  std::move(q)));
  }
  return out;
}

std::vector<RangeSample> SampleRangeConic(const ConicPrimalProblem& cp,
                                          int count, std::uint64_t seed) {
  if (count < 0) throw InvalidArgument("sample count must be nonnegative");
  if (cp.cone.dim() != cp.n() || cp.a.rows() != cp.m() ||
      cp.a.cols() != cp.n()) {
    throw DimensionMismatch("conic problem dimensions are inconsistent");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<RangeSample> out;
  out.reserve(count);
  for (int s = 0; s < count; ++s) {
    Vector g(cp.n()), y(cp.m());
    for (int i = 0; i < cp.n(); ++i) g[i] = normal(rng);
    for (int i = 0; i < cp.m(); ++i) y[i] = normal(rng);
    Vector x = Project(cp.cone, g);
    Vector n = g - x;
    RangeSample sample;
    sample.r = cp.c + n + MatvecTranspose(cp.a, y);
    sample.d = cp.b - Matvec(cp.a, x);
    sample.witness = {std::move(x), std::move(y), std::move(n), Vector()};
    out.push_back(std::move(sample));
  }
  return out;
}

VOptimalityResult CheckVOptimality(const DisplacementEstimate& v,
                                   const MetricM& metric,
                                   std::span<const RangeSample> samples,
                                   double tol) {
  if (samples.empty()) throw InvalidArgument("no range samples given");
  const PdhgIterate vz = v.AsIterate();
  const PdhgIterate mv = metric.Apply(vz);
  const double base = vz.x.dot(mv.x) + vz.y.dot(mv.y);
  VOptimalityResult out;
  out.worst_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double val =
        base - vz.x.dot(samples[i].r) - vz.y.dot(samples[i].d);
    if (val > out.worst_violation) {
      out.worst_violation = val;
      out.worst_index = static_cast<int>(i);
    }
  }
  out.optimal = out.worst_violation <= tol;
  return out;
}

void ResidualReport::Add(std::string name, double value) {
  entries.push_back({std::move(name), value});
}

bool ResidualReport::Passed() const {
  for (const auto& e : entries) {
    if (!(e.value <= tol)) return false;
  }
  return true;
}

double ResidualReport::Worst() const {
  double worst = 0.0;
  for (const auto& e : entries) {
    if (std::isnan(e.value)) return e.value;
    worst = std::max(worst, e.value);
  }
  return worst;
}

double ResidualReport::Get(std::string_view name) const {
  for (const auto& e : entries) {
    if (e.name == name) return e.value;
  }
  throw InvalidArgument("no residual named " + std::string(name));
}

bool ResidualReport::Has(std::string_view name) const {
  return std::any_of(entries.begin(), entries.end(),
                     [&](const Entry& e) { return e.name == name; });
}

namespace {

void CheckPositiveSteps(double sigma, double tau, double tol) {
  if (!(sigma > 0.0) || !(tau > 0.0)) {
    throw InvalidArgument("step sizes must be positive");
  }
  if (!(tol >= 0.0)) throw InvalidArgument("tolerance must be nonnegative");
}

}  // namespace

ResidualReport CheckMembershipVQp(const QpProblem& qp, double sigma,
                                  double tau, const Vector& r, const Vector& d,
                                  const Vector& witness_w,
                                  const Vector& witness_y, double tol) {
  CheckPositiveSteps(sigma, tau, tol);
  if (r.size() != qp.n() || witness_w.size() != qp.n() ||
      d.size() != qp.m() || witness_y.size() != qp.m()) {
    throw DimensionMismatch("membership arguments have wrong dimensions");
  }
  ResidualReport rep;
  rep.tol = tol;
  const Vector primal = d / tau - (Matvec(qp.a, witness_w) + qp.b);
  rep.Add("primal_cone", Membership(qp.cone, primal, tol).distance);
  rep.Add("dual_cone",
          Membership(qp.cone.Polar(), witness_y - d, tol).distance);
  const Vector stat = r / sigma - Matvec(qp.h, r) + Matvec(qp.h, witness_w) -
                      MatvecTranspose(qp.a, witness_y) - qp.c;
  rep.Add("stationarity", stat.norm());
  return rep;
}

ResidualReport CheckMembershipVConic(const ConicPrimalProblem& cp,
                                     double sigma, double tau, const Vector& r,
                                     const Vector& d, const Vector& witness_w,
                                     const Vector& witness_y, double tol) {
  CheckPositiveSteps(sigma, tau, tol);
  if (r.size() != cp.n() || witness_w.size() != cp.n() ||
      d.size() != cp.m() || witness_y.size() != cp.m()) {
    throw DimensionMismatch("membership arguments have wrong dimensions");
  }
  ResidualReport rep;
  rep.tol = tol;
  rep.Add("equation", (d / tau - Matvec(cp.a, witness_w) - cp.b).norm());
  rep.Add("primal_cone", Membership(cp.cone, r - witness_w, tol).distance);
  const Vector dual = r / sigma - (MatvecTranspose(cp.a, witness_y) + cp.c);
  rep.Add("dual_cone", Membership(cp.cone.Polar(), dual, tol).distance);
  return rep;
}

InconsistencyVerdict Classify(const IterateTrace& trace,
                              const DisplacementEstimate& v,
                              const ClassifyThresholds& thresholds,
                              const CertificateValidator& validator) {
  if (trace.scalars.empty()) throw EmptyTrace("trace has no iterations");
  InconsistencyVerdict out;
  out.residual_report.tol = thresholds.residual_tol;
  const double final_residual = trace.last_scalars().residual_m;
  double max_norm = trace.initial.Norm();
  for (const auto& s : trace.scalars) max_norm = std::max(max_norm, s.norm_z);
  max_norm = std::max(max_norm, trace.final_iterate.Norm());
  out.residual_report.Add("fixed_point_residual", final_residual);

  const double norm_vp = v.v_primal.norm();
  const double norm_vd = v.v_dual.norm();
  const bool vp_nonzero = norm_vp > thresholds.cert_tol;
  const bool vd_nonzero = norm_vd > thresholds.cert_tol;

  if (final_residual < thresholds.residual_tol &&
      max_norm > thresholds.growth_factor * (1.0 + trace.initial.Norm())) {
    out.status = VerdictStatus::kInconclusive;
    out.note = "iterates diverge while differences vanish";
    return out;
  }

  if (vp_nonzero || vd_nonzero) {
    out.evidence = v;
    if (!validator) {
      out.status = VerdictStatus::kInconclusive;
      out.note = "nonzero displacement but no certificate validator";
      return out;
    }
    CertificateCheck check = validator(v);
    out.residual_report = std::move(check.residuals);
    const bool primal_inf = vd_nonzero && check.primal_infeasibility_certified;
    const bool dual_inf = vp_nonzero && check.dual_infeasibility_certified;
    if (primal_inf && dual_inf) {
      out.status = VerdictStatus::kBothInfeasible;
    } else if (primal_inf) {
      out.status = VerdictStatus::kPrimalInfeasible;
    } else if (dual_inf) {
      out.status = VerdictStatus::kDualInfeasible;
    } else {
      out.status = VerdictStatus::kInconclusive;
      out.note = "nonzero displacement failed certificate validation";
    }
    return out;
  }

  if (final_residual <= thresholds.residual_tol &&
      v.m_norm <= thresholds.cert_tol) {
    out.status = VerdictStatus::kConsistentCandidate;
  } else {
    out.status = VerdictStatus::kInconclusive;
    out.note = "iteration budget exhausted before convergence";
  }
  return out;
}

}  // namespace pdhg
