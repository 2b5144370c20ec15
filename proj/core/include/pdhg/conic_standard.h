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

#ifndef PDHG_CONIC_STANDARD_H_
#define PDHG_CONIC_STANDARD_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdhg/diagnostics.h"
#include "pdhg/pdhg_core.h"
#include "pdhg/problems.h"

// Standard conic form  min <c, x>  s.t.  A x = b,  x in C.
namespace pdhg {

// Checks shapes, finiteness and dim(C) = n. Throws DimensionMismatch or
// InvalidArgument.
void ValidateConic(const ConicPrimalProblem& cp);

// PDHG instance:
//   prox_f(x)  = P_C(x - sigma c)
//   prox_g*(y) = y - tau b
SaddleProblem BuildSaddleConic(const ConicPrimalProblem& cp,
                               std::optional<double> sigma = std::nullopt,
                               std::optional<double> tau = std::nullopt);

struct KernelConditionReport {
  // False when a unit x in C with ||A x|| <= tol was found.
  bool holds = true;
  // Smallest ||A x|| seen over unit x in C (infinity if C = {0}).
  double min_norm_ax = 0.0;
  Vector witness;
  int starts = 0;
  int steps_per_start = 0;
  // Always true: the search is a local heuristic, not a proof.
  bool heuristic = true;
};

// Numerical test of ker A intersect C = {0}: projected gradient on ||A x||^2
// over the unit sphere of C from 50 seeded starts, 500 steps of 1/||A||^2.
KernelConditionReport CheckKernelCondition(const ConicPrimalProblem& cp,
                                           double tol = 1e-6,
                                           std::uint64_t seed = 0);

struct ConicDisplacementOptions {
  double tol = 1e-8;
  // Points of C used to test v_D against the polar of A(C).
  int image_samples = 1000;
  std::uint64_t seed = 0;
  // Limit point of the primal iterates, enabling the shifted-equation checks.
  std::optional<Vector> x_bar;
  // Computed with CheckKernelCondition when absent.
  std::optional<bool> kernel_condition;
};

// Residuals of the identities satisfied by v:
//   neg_cone_primal    v_R in -C
//   projection_polar   sigma A^T v_D = P_{C-polar}(-v_R + sigma A^T v_D)
//   projection_cone    -v_R = P_C(-v_R + sigma A^T v_D)
//   dual_polar         sigma A^T v_D in C-polar
//   image_polar        max_j <A x_j, v_D>^+ over sampled unit x_j in C
// and, when the kernel condition holds and c = 0,
//   v_r_zero           ||v_R||
//   dual_gap           |<b, v_D> - ||v_D||^2 / tau|
// and, given x_bar,
//   shifted_equation   A x_bar = b - v_D / tau
//   x_bar_cone         x_bar in C
//   complementarity    <x_bar, A^T v_D> = 0
ResidualReport CheckConicDisplacement(const ConicPrimalProblem& cp,
                                      double sigma, double tau,
                                      const DisplacementEstimate& v,
                                      const ConicDisplacementOptions& options =
                                          {});

// Ray: -u in C, A u = 0, <c, u> > 0. Multiplier: A^T u in C-polar,
// <b, u> > 0. Residual names are prefixed "ray_" and "multiplier_".
CertificateCheck ValidateConicCertificates(
    const ConicPrimalProblem& cp, double sigma, double tau,
    const DisplacementEstimate& v, const CertificateTolerances& tols = {});

class ConicCertificateFailed : public Error {
 public:
  ConicCertificateFailed(const std::string& what, ResidualReport report)
      : Error(what), report_(std::move(report)) {}
  const ResidualReport& report() const { return report_; }

 private:
  ResidualReport report_;
};

// Validated certificates for the nonzero blocks of v. Throws
// ConicCertificateFailed when a nonzero block does not validate.
std::vector<InfeasibilityCertificate> ExtractConicCertificates(
    const ConicPrimalProblem& cp, double sigma, double tau,
    const DisplacementEstimate& v, const CertificateTolerances& tols = {});

struct ConicSolveOptions {
  std::optional<double> sigma;
  std::optional<double> tau;
  int max_iterations = 100000;
  // Fixed-point residual (M-norm) for the consistent case.
  double residual_tol = 1e-9;
  // Stop once
  //   ||x_k - x_{k+1}|| <= x_tol * (1 + ||x_{k+1}|| + sigma ||A^T y_{k+1}||),
  //   the dual differences change by at most
  //   difference_tol * (1 + ||y_{k+1}||) between steps,
  // and the candidate pair (x_{k+1}, v_D = y_k - y_{k+1}) satisfies
  //   dist(sigma A^T v_D, C-polar) <= limit_tol,
  //   |<x_{k+1}, sigma A^T v_D>| <= limit_tol * (1 + ||x_{k+1}||).
  // The scaling follows the rounding floor of the growing dual iterates; the
  // limit conditions keep a transient plateau of x from passing as a limit.
  double x_tol = 1e-13;
  double difference_tol = 1e-13;
  double limit_tol = 1e-9;
  int trace_depth = 64;
  std::uint64_t seed = 0;
  ClassifyThresholds thresholds;
  CertificateTolerances certificates;
};

struct ConicSolveResult {
  double sigma = 0.0;
  double tau = 0.0;
  Vector x_bar;
  DisplacementEstimate v;
  IterateTrace trace;
  bool converged = false;
  KernelConditionReport kernel_condition;
  InconsistencyVerdict verdict;
  std::vector<InfeasibilityCertificate> certificates;
  // E.g. c != 0 or the kernel condition failing.
  std::vector<std::string> warnings;
};

class IterationLimit : public Error {
 public:
  IterationLimit(const std::string& what,
                 std::shared_ptr<const ConicSolveResult> partial)
      : Error(what), partial_(std::move(partial)) {}
  const ConicSolveResult& partial() const { return *partial_; }

 private:
  std::shared_ptr<const ConicSolveResult> partial_;
};

// Runs PDHG until the primal iterates settle. With c = 0 and the kernel
// condition, x_k converges to some x_bar in C with A x_bar = b - v_D / tau.
// Throws IterationLimit (carrying the partial result) when max_iterations
// is reached first.
ConicSolveResult SolveConicWithLimit(const ConicPrimalProblem& cp,
                                     const PdhgIterate& z0,
                                     const ConicSolveOptions& options = {});

}  // namespace pdhg

#endif  // PDHG_CONIC_STANDARD_H_
