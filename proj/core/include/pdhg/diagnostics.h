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

#ifndef PDHG_DIAGNOSTICS_H_
#define PDHG_DIAGNOSTICS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdhg/pdhg_core.h"
#include "pdhg/problems.h"

// Tools for reading an inconsistent PDHG run: the infimal displacement vector
// v (the minimal M-norm element of the closure of ran(Id - T)) is estimated
// from the iterate differences, checked against sampled points of
// ran(dF + S), and turned into a verdict.
namespace pdhg {

class EmptyTrace : public Error {
 public:
  using Error::Error;
};

class NonPolyhedralCone : public Error {
 public:
  using Error::Error;
};

struct EstimationMethod {
  enum class Kind { kLastDifference, kAveragedDifferences, kPazyScaled };

  Kind kind = Kind::kAveragedDifferences;
  int window = 10;

  static EstimationMethod LastDifference() {
    return {Kind::kLastDifference, 1};
  }
  static EstimationMethod AveragedDifferences(int window = 10) {
    return {Kind::kAveragedDifferences, window};
  }
  static EstimationMethod PazyScaled() { return {Kind::kPazyScaled, 1}; }
};

std::string ToString(EstimationMethod::Kind kind);

struct DisplacementEstimate {
  Vector v_primal;
  Vector v_dual;
  EstimationMethod method;
  double m_norm = 0.0;
  int iterations_used = 0;

  PdhgIterate AsIterate() const { return {v_primal, v_dual}; }
};

// Estimates v from a trace.
//   LastDifference:      z_{K-1} - z_K
//   AveragedDifferences: mean of the last `window` stored differences
//   PazyScaled:          -z_K / K
// The averaged window is taken from the tail of the run; with the default
// trace depth and K >= 2 * window it lies past the K/2 burn-in.
// Throws EmptyTrace when the trace holds fewer than window + 1 differences
// (averaged) or none at all.
DisplacementEstimate EstimateDisplacement(
    const IterateTrace& trace, const MetricM& metric,
    EstimationMethod method = EstimationMethod::AveragedDifferences());

// LastDifference when the run reached a fixed point (the last difference is
// then the best estimate of zero) or the trace is too short for
// AveragedDifferences(10), which is used otherwise.
DisplacementEstimate EstimateDisplacementAuto(const IterateTrace& trace,
                                              const MetricM& metric);

// A point (r, d) of ran(dF + S) for a polyhedral QP, built from
//   r = H u + A^T p + c,  p in K-polar
//   d = q + A w + b,      q in K.
struct RangeSample {
  Vector r;
  Vector d;
  struct Witness {
    Vector u;
    Vector p;
    Vector w;
    Vector q;
  } witness;
};

// Builds the sample for explicit generators (no cone checks on p, q).
RangeSample MakeRangeSample(const QpProblem& qp, Vector u, Vector p, Vector w,
                            Vector q);

// Draws `count` samples: u, w ~ N(0, 1); p, q coordinates ~ |N(0, 1)| with
// the sign of their orthant block (zero on zero blocks, N(0, 1) on free
// blocks). Deterministic under `seed`. Throws NonPolyhedralCone.
std::vector<RangeSample> SampleRange(const QpProblem& qp, int count,
                                     std::uint64_t seed);

// Samples of ran(dF + S) for standard conic form:
//   r = c + n + A^T y,  d = b - A x
// with x = P_C(g), n = P_{C-polar}(g) for g ~ N(0, 1) (so n is normal to C
// at x) and y ~ N(0, 1). The witness holds u = x, p = y, w = n and an empty
// q. Works for every cone, including second-order blocks.
std::vector<RangeSample> SampleRangeConic(const ConicPrimalProblem& cp,
                                          int count, std::uint64_t seed);

struct VOptimalityResult {
  bool optimal = false;
  // max over samples of <v, M v - (r, d)>.
  double worst_violation = 0.0;
  int worst_index = -1;
};

// Tests the variational inequality <v, M v - y> <= tol over the samples.
// Throws InvalidArgument when `samples` is empty.
VOptimalityResult CheckVOptimality(const DisplacementEstimate& v,
                                   const MetricM& metric,
                                   std::span<const RangeSample> samples,
                                   double tol);

// Named nonnegative residuals; passes iff all are <= tol.
struct ResidualReport {
  struct Entry {
    std::string name;
    double value = 0.0;
  };

  double tol = 0.0;
  std::vector<Entry> entries;

  void Add(std::string name, double value);
  bool Passed() const;
  double Worst() const;
  // Throws InvalidArgument if `name` is absent.
  double Get(std::string_view name) const;
  bool Has(std::string_view name) const;
};

// Membership of (r, d) in ran(Id - T) for a polyhedral QP, with witnesses
// (w, y):
//   primal_cone:  (1/tau) d - (A w + b) in K
//   dual_cone:    y - d in K-polar
//   stationarity: (1/sigma) r - H r = -H w + A^T y + c
ResidualReport CheckMembershipVQp(const QpProblem& qp, double sigma,
                                  double tau, const Vector& r, const Vector& d,
                                  const Vector& witness_w,
                                  const Vector& witness_y, double tol);

// Membership of (r, d) in ran(Id - T) for standard conic form, witnesses
// (w, y):
//   equation:  (1/tau) d = A w + b
//   primal_cone:  r - w in C
//   dual_cone:    (1/sigma) r - (A^T y + c) in C-polar
ResidualReport CheckMembershipVConic(const ConicPrimalProblem& cp,
                                     double sigma, double tau, const Vector& r,
                                     const Vector& d, const Vector& witness_w,
                                     const Vector& witness_y, double tol);

enum class VerdictStatus {
  kConsistentCandidate,
  kPrimalInfeasible,
  kDualInfeasible,
  kBothInfeasible,
  kInconclusive,
};

std::string ToString(VerdictStatus status);

struct ClassifyThresholds {
  // ||v_primal|| or ||v_dual|| above this counts as nonzero.
  double cert_tol = 1e-6;
  // Fixed-point residual (M-norm) that counts as converged.
  double residual_tol = 1e-9;
  // ||z_k|| > growth_factor * (1 + ||z_0||) with vanishing differences marks
  // the undetectable case 0 in cl ran(Id - T) \ ran(Id - T).
  double growth_factor = 1e6;
};

// Result of validating v against a problem's certificate conditions.
struct CertificateCheck {
  // v_dual proves the primal infeasible.
  bool primal_infeasibility_certified = false;
  // v_primal proves the dual infeasible.
  bool dual_infeasibility_certified = false;
  ResidualReport residuals;
};

// A unit-norm infeasibility certificate read off one block of v. A ray
// (from v_primal) proves the dual infeasible, a multiplier (from v_dual)
// proves the primal infeasible.
struct InfeasibilityCertificate {
  enum class Kind { kDualInfeasibleRay, kPrimalInfeasibleMultiplier };

  Kind kind = Kind::kPrimalInfeasibleMultiplier;
  // Unit Euclidean norm.
  Vector vector;
  // Equation residual of the unit vector u (H u or A u for a ray, A^T u for
  // a multiplier).
  double eq_residual = 0.0;
  // Distance to the required cone.
  double cone_residual = 0.0;
  // <c, u> for a ray, <b, u> for a multiplier; positive when valid.
  double strict_margin = 0.0;
  // <c, v_R> - ||v_R||^2 / sigma (ray) or <b, v_D> - ||v_D||^2 / tau
  // (multiplier) on the unnormalized estimate; nonnegative when valid.
  double displacement_gap = 0.0;
};

std::string ToString(InfeasibilityCertificate::Kind kind);

struct CertificateTolerances {
  // Blocks with norm above this are treated as nonzero.
  double cert_tol = 1e-6;
  // Bound on the residuals of the unit-normalized certificate.
  double residual_tol = 1e-8;
};

using CertificateValidator =
    std::function<CertificateCheck(const DisplacementEstimate&)>;

struct InconsistencyVerdict {
  VerdictStatus status = VerdictStatus::kInconclusive;
  std::optional<DisplacementEstimate> evidence;
  ResidualReport residual_report;
  std::string note;
};

// Combines the trace, the displacement estimate and (optionally) a
// problem-specific certificate validator into a verdict. Without a validator
// no infeasibility status can be certified.
InconsistencyVerdict Classify(const IterateTrace& trace,
                              const DisplacementEstimate& v,
                              const ClassifyThresholds& thresholds,
                              const CertificateValidator& validator = nullptr);

}  // namespace pdhg

#endif  // PDHG_DIAGNOSTICS_H_
