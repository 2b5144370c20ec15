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

#ifndef PDHG_QP_H_
#define PDHG_QP_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdhg/diagnostics.h"
#include "pdhg/pdhg_core.h"
#include "pdhg/problems.h"

// Quadratic programs  min 1/2 <x, H x> + <c, x>  s.t.  A x - b in K,
// solved by PDHG with the resolvent of sigma H as the primal prox.
namespace pdhg {

class NotPositiveSemidefinite : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class CertificateValidationFailed : public Error {
 public:
  CertificateValidationFailed(const std::string& what, ResidualReport report)
      : Error(what), report_(std::move(report)) {}
  const ResidualReport& report() const { return report_; }

 private:
  ResidualReport report_;
};

// Builds the inequality form A x <= b (K = NonposOrthant(m)). An empty `h`
// stands for the zero matrix.
QpProblem MakeInequalityQp(Matrix h, Vector c, Matrix a, Vector b);

// Checks shapes, finiteness, symmetry of H (kSymmetryTolerance), that K is
// polyhedral with dimension m, and <x, H x> >= -1e-10 on 100 seeded unit
// probes. Throws DimensionMismatch, InvalidArgument, NonPolyhedralCone or
// NotPositiveSemidefinite.
void ValidateQp(const QpProblem& qp, std::uint64_t seed = 0);

// The Lagrangian dual
//   max -1/2 <q, H q> - <b, y>  s.t.  H q = -(c + A^T y),  y in K-polar.
struct QpDual {
  const QpProblem* primal = nullptr;

  double Objective(const Vector& q, const Vector& y) const;
  // Residuals "equation" and "dual_cone".
  ResidualReport Feasibility(const Vector& q, const Vector& y,
                             double tol) const;
};

double PrimalObjective(const QpProblem& qp, const Vector& x);

// Optimality conditions at (x, y): stationarity H x + c + A^T y = 0,
// A x - b in K, y in K-polar, <y, A x - b> = 0.
ResidualReport CheckKkt(const QpProblem& qp, const Vector& x, const Vector& y,
                        double tol);

// PDHG instance for the QP:
//   prox_f(x)  = (Id + sigma H)^{-1} (x - sigma c)
//   prox_g*(y) = P_{K-polar}(y - tau b)
// The Cholesky factor of Id + sigma H is computed on first use and reused
// until a different sigma arrives. Validates the problem first.
SaddleProblem BuildSaddle(const QpProblem& qp,
                          std::optional<double> sigma = std::nullopt,
                          std::optional<double> tau = std::nullopt);

// (Id + sigma H)^{-1} x.
Vector ResolventH(const QpProblem& qp, double sigma, const Vector& x);

// Residuals of the identities satisfied by the displacement vector of a QP:
//   projection_dual     -v_D = P_{K-polar}(-v_D - tau A v_R)
//   projection_primal   -tau A v_R = P_K(-v_D - tau A v_R)
//   orthogonality       <A v_R, v_D> = 0
//   stationarity        A^T v_D + H v_R = 0
//   kernel_h            H v_R = 0
//   kernel_at           A^T v_D = 0
//   resolvent_fixed     J_{sigma H}(v_R) = v_R
//   complementarity     max_i |(A v_R)_i (v_D)_i|
//   sign_primal         distance of A v_R from -K
//   sign_dual           distance of v_D from -K-polar
ResidualReport CheckStaticDisplacement(const QpProblem& qp, double sigma,
                                       double tau,
                                       const DisplacementEstimate& v,
                                       double tol);

using QpCertificate = InfeasibilityCertificate;

// Evaluates both certificate candidates without throwing. Residual names are
// prefixed "ray_" and "multiplier_".
CertificateCheck ValidateQpCertificates(const QpProblem& qp, double sigma,
                                        double tau,
                                        const DisplacementEstimate& v,
                                        const CertificateTolerances& tols = {});

// Returns the validated certificates (empty for v = 0). Throws
// CertificateValidationFailed when a block is nonzero but its certificate
// does not validate.
std::vector<QpCertificate> ExtractCertificates(
    const QpProblem& qp, double sigma, double tau,
    const DisplacementEstimate& v, const CertificateTolerances& tols = {});

struct ShiftedIterateRow {
  int k = 0;
  double norm_dx = 0.0;
  double norm_dy = 0.0;
  double norm_dx_minus_vR = 0.0;
  double norm_dy_minus_vD = 0.0;
  // Blocks of (z_k + k v) - (v + T)(z_k + k v).
  double shifted_resid_x = 0.0;
  double shifted_resid_y = 0.0;
};

// One row per k = 0, ..., iterations - 1 of the plain PDHG run from z0.
std::vector<ShiftedIterateRow> ShiftedIterateExperiment(
    const QpProblem& qp, double sigma, double tau, const PdhgIterate& z0,
    const PdhgIterate& v_ref, int iterations);

struct QpSolveOptions {
  std::optional<double> sigma;
  std::optional<double> tau;
  IterateOptions iterate;
  ClassifyThresholds thresholds;
  CertificateTolerances certificates;
};

struct QpSolveResult {
  double sigma = 0.0;
  double tau = 0.0;
  IterateTrace trace;
  DisplacementEstimate v;
  InconsistencyVerdict verdict;
  std::vector<QpCertificate> certificates;
};

// Iterates, estimates v, classifies and extracts the certificates that
// validate.
QpSolveResult SolveQp(const QpProblem& qp, const PdhgIterate& z0,
                      const QpSolveOptions& options = {});

}  // namespace pdhg

#endif  // PDHG_QP_H_
