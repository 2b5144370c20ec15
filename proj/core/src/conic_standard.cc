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

#include "pdhg/conic_standard.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

namespace pdhg {

namespace {

constexpr int kKernelStarts = 50;
constexpr int kKernelSteps = 500;
constexpr int kDrawAttempts = 100;

bool IsTrivial(const Cone& cone) {
  for (const Cone& leaf : cone.Leaves()) {
    if (leaf.kind() != Cone::Kind::kZero && leaf.dim() > 0) return false;
  }
  return true;
}

// A unit vector of the cone, or an empty vector when draws keep landing on 0.
Vector DrawUnitInCone(const Cone& cone, std::mt19937_64& rng,
                      std::normal_distribution<double>& normal) {
  Vector g(cone.dim());
  for (int attempt = 0; attempt < kDrawAttempts; ++attempt) {
    for (int i = 0; i < g.size(); ++i) g[i] = normal(rng);
    Vector p = Project(cone, g);
    const double norm = p.norm();
    if (norm > 0.0) return p / norm;
  }
  return Vector();
}

}  // namespace

void ValidateConic(const ConicPrimalProblem& cp) {
  if (cp.cone.dim() != cp.n()) {
    throw DimensionMismatch("cone dimension " + std::to_string(cp.cone.dim()) +
                            " does not match n = " + std::to_string(cp.n()));
  }
  if (cp.a.rows() != cp.m() || cp.a.cols() != cp.n()) {
    throw DimensionMismatch("A must be m x n with m = dim(b), n = dim(c)");
  }
  if (!AllFinite(cp.a) || !AllFinite(cp.b) || !AllFinite(cp.c)) {
    throw InvalidArgument("conic data contains non-finite entries");
  }
}

SaddleProblem BuildSaddleConic(const ConicPrimalProblem& cp,
                               std::optional<double> sigma,
                               std::optional<double> tau) {
  ValidateConic(cp);
  Cone cone = cp.cone;
  Vector c = cp.c;
  Vector b = cp.b;
  ProxOracle prox_f = [cone, c](double step, const Vector& x) {
    return Project(cone, x - step * c);
  };
  ProxOracle prox_gstar = [b](double step, const Vector& y) {
    return Vector(y - step * b);
  };
  return SaddleProblem(cp.a, std::move(prox_f), std::move(prox_gstar), sigma,
                       tau);
}

KernelConditionReport CheckKernelCondition(const ConicPrimalProblem& cp,
                                           double tol, std::uint64_t seed) {
  ValidateConic(cp);
  if (!(tol >= 0.0)) throw InvalidArgument("tolerance must be nonnegative");
  KernelConditionReport rep;
  rep.starts = kKernelStarts;
  rep.steps_per_start = kKernelSteps;
  rep.min_norm_ax = std::numeric_limits<double>::infinity();
  if (IsTrivial(cp.cone)) return rep;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double norm_a = cp.a.size() == 0 ? 0.0 : OperatorNormEstimate(cp.a);
  auto consider = [&](const Vector& x) {
    const double val = Matvec(cp.a, x).norm();
    if (val < rep.min_norm_ax) {
      rep.min_norm_ax = val;
      rep.witness = x;
    }
    return val <= tol;
  };

  for (int start = 0; start < kKernelStarts; ++start) {
    Vector x = DrawUnitInCone(cp.cone, rng, normal);
    if (x.size() == 0) continue;
    if (consider(x)) {
      rep.holds = false;
      return rep;
    }
    if (norm_a == 0.0) continue;
    const double step = 1.0 / (norm_a * norm_a);
    for (int it = 0; it < kKernelSteps; ++it) {
      const Vector grad = MatvecTranspose(cp.a, Matvec(cp.a, x));
      Vector next = Project(cp.cone, x - step * grad);
      const double norm = next.norm();
      if (!(norm > 0.0)) break;
      x = next / norm;
      if (consider(x)) {
        rep.holds = false;
        return rep;
      }
    }
  }
  return rep;
}

ResidualReport CheckConicDisplacement(const ConicPrimalProblem& cp,
                                      double sigma, double tau,
                                      const DisplacementEstimate& v,
                                      const ConicDisplacementOptions& options) {
  ValidateConic(cp);
  if (v.v_primal.size() != cp.n() || v.v_dual.size() != cp.m()) {
    throw DimensionMismatch("displacement does not match the problem");
  }
  if (!(sigma > 0.0) || !(tau > 0.0)) {
    throw InvalidArgument("step sizes must be positive");
  }
  const double tol = options.tol;
  const Vector& vr = v.v_primal;
  const Vector& vd = v.v_dual;
  const Cone polar = cp.cone.Polar();
  const Vector satvd = sigma * MatvecTranspose(cp.a, vd);
  const Vector point = -vr + satvd;

  ResidualReport rep;
  rep.tol = tol;
  rep.Add("neg_cone_primal", Membership(cp.cone, -vr, tol).distance);
  rep.Add("projection_polar", (satvd - Project(polar, point)).norm());
  rep.Add("projection_cone", (-vr - Project(cp.cone, point)).norm());
  rep.Add("dual_polar", Membership(polar, satvd, tol).distance);

  double image = 0.0;
  if (!IsTrivial(cp.cone)) {
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int j = 0; j < options.image_samples; ++j) {
      const Vector x = DrawUnitInCone(cp.cone, rng, normal);
      if (x.size() == 0) continue;
      image = std::max(image, Matvec(cp.a, x).dot(vd));
    }
  }
  rep.Add("image_polar", image);

  const bool kernel = options.kernel_condition.has_value()
                          ? *options.kernel_condition
                          : CheckKernelCondition(cp, 1e-6, options.seed).holds;
  if (kernel && cp.c.isZero(0.0)) {
    rep.Add("v_r_zero", vr.norm());
    rep.Add("dual_gap", std::abs(cp.b.dot(vd) - vd.squaredNorm() / tau));
  }
  if (options.x_bar) {
    const Vector& xb = *options.x_bar;
    if (xb.size() != cp.n()) throw DimensionMismatch("x_bar has wrong size");
    rep.Add("shifted_equation",
            (Matvec(cp.a, xb) - (cp.b - vd / tau)).norm());
    rep.Add("x_bar_cone", Membership(cp.cone, xb, tol).distance);
    rep.Add("complementarity",
            std::abs(xb.dot(MatvecTranspose(cp.a, vd))));
  }
  return rep;
}

namespace {

struct ConicCandidates {
  std::optional<InfeasibilityCertificate> ray;
  std::optional<InfeasibilityCertificate> multiplier;
  CertificateCheck check;
};

void Record(const InfeasibilityCertificate& cert, const std::string& prefix,
            ResidualReport& rep) {
  rep.Add(prefix + "eq", cert.eq_residual);
  rep.Add(prefix + "cone", cert.cone_residual);
  rep.Add(prefix + "gap", std::max(0.0, -cert.displacement_gap));
}

bool Valid(const InfeasibilityCertificate& cert, double tol) {
  return cert.eq_residual <= tol && cert.cone_residual <= tol &&
         cert.displacement_gap >= -tol && cert.strict_margin > 0.0;
}

ConicCandidates Evaluate(const ConicPrimalProblem& cp, double sigma,
                         double tau, const DisplacementEstimate& v,
                         const CertificateTolerances& tols) {
  if (v.v_primal.size() != cp.n() || v.v_dual.size() != cp.m()) {
    throw DimensionMismatch("displacement does not match the problem");
  }
  ConicCandidates out;
  out.check.residuals.tol = tols.residual_tol;
  const Vector& vr = v.v_primal;
  const Vector& vd = v.v_dual;
  if (vr.norm() > tols.cert_tol) {
    InfeasibilityCertificate cert;
    cert.kind = InfeasibilityCertificate::Kind::kDualInfeasibleRay;
    cert.vector = vr / vr.norm();
    cert.eq_residual = Matvec(cp.a, cert.vector).norm();
    cert.cone_residual = Membership(cp.cone, -cert.vector, 0.0).distance;
    cert.strict_margin = cp.c.dot(cert.vector);
    cert.displacement_gap = cp.c.dot(vr) - vr.squaredNorm() / sigma;
    Record(cert, "ray_", out.check.residuals);
    out.check.dual_infeasibility_certified = Valid(cert, tols.residual_tol);
    out.ray = std::move(cert);
  }
  if (vd.norm() > tols.cert_tol) {
    InfeasibilityCertificate cert;
    cert.kind = InfeasibilityCertificate::Kind::kPrimalInfeasibleMultiplier;
    cert.vector = vd / vd.norm();
    cert.eq_residual = 0.0;
    cert.cone_residual =
        Membership(cp.cone.Polar(), MatvecTranspose(cp.a, cert.vector), 0.0)
            .distance;
    cert.strict_margin = cp.b.dot(cert.vector);
    cert.displacement_gap = cp.b.dot(vd) - vd.squaredNorm() / tau;
    Record(cert, "multiplier_", out.check.residuals);
    out.check.primal_infeasibility_certified = Valid(cert, tols.residual_tol);
    out.multiplier = std::move(cert);
  }
  return out;
}

}  // namespace

CertificateCheck ValidateConicCertificates(const ConicPrimalProblem& cp,
                                           double sigma, double tau,
                                           const DisplacementEstimate& v,
                                           const CertificateTolerances& tols) {
  return Evaluate(cp, sigma, tau, v, tols).check;
}

std::vector<InfeasibilityCertificate> ExtractConicCertificates(
    const ConicPrimalProblem& cp, double sigma, double tau,
    const DisplacementEstimate& v, const CertificateTolerances& tols) {
  ConicCandidates cand = Evaluate(cp, sigma, tau, v, tols);
  std::vector<InfeasibilityCertificate> out;
  if (cand.ray) {
    if (!cand.check.dual_infeasibility_certified) {
      throw ConicCertificateFailed(
          "nonzero primal displacement is not a valid recession ray",
          cand.check.residuals);
    }
    out.push_back(*cand.ray);
  }
  if (cand.multiplier) {
    if (!cand.check.primal_infeasibility_certified) {
      throw ConicCertificateFailed(
          "nonzero dual displacement is not a valid multiplier",
          cand.check.residuals);
    }
    out.push_back(*cand.multiplier);
  }
  return out;
}

ConicSolveResult SolveConicWithLimit(const ConicPrimalProblem& cp,
                                     const PdhgIterate& z0,
                                     const ConicSolveOptions& options) {
  const SaddleProblem problem =
      BuildSaddleConic(cp, options.sigma, options.tau);
  const MetricM metric = ValidateSteps(problem);

  ConicSolveResult out;
  out.sigma = problem.sigma();
  out.tau = problem.tau();
  out.kernel_condition = CheckKernelCondition(cp, 1e-6, options.seed);
  if (!cp.c.isZero(0.0)) {
    out.warnings.push_back("objective is nonzero; the primal limit is not "
                           "guaranteed");
  }
  if (!out.kernel_condition.holds) {
    out.warnings.push_back("ker A meets C; the primal limit is not "
                           "guaranteed");
  }

  IterateOptions it;
  it.max_iterations = options.max_iterations;
  it.residual_tol = options.residual_tol;
  it.trace_depth = options.trace_depth;
  const Cone polar = cp.cone.Polar();
  it.stop_when = [&](const StepInfo& info) {
    if (info.previous_difference == nullptr) return false;
    const Vector& x = info.next->x;
    const Vector& y = info.next->y;
    const double sigma = problem.sigma();
    const Vector aty = MatvecTranspose(cp.a, y);
    if (info.difference->x.norm() >
        options.x_tol * (1.0 + x.norm() + sigma * aty.norm())) {
      return false;
    }
    if ((info.difference->y - info.previous_difference->y).norm() >
        options.difference_tol * (1.0 + y.norm())) {
      return false;
    }
    const Vector g = sigma * MatvecTranspose(cp.a, info.difference->y);
    return Membership(polar, g, 0.0).distance <= options.limit_tol &&
           std::abs(x.dot(g)) <= options.limit_tol * (1.0 + x.norm());
  };
  out.trace = Iterate(problem, z0, it);
  out.x_bar = out.trace.final_iterate.x;
  out.v = EstimateDisplacementAuto(out.trace, metric);
  out.converged = out.trace.stop_reason != StopReason::kMaxIterations;

  const double sigma = out.sigma;
  const double tau = out.tau;
  const CertificateTolerances tols = options.certificates;
  ConicCandidates cand;
  CertificateValidator validator = [&](const DisplacementEstimate& v) {
    cand = Evaluate(cp, sigma, tau, v, tols);
    return cand.check;
  };
  out.verdict = Classify(out.trace, out.v, options.thresholds, validator);
  const VerdictStatus s = out.verdict.status;
  if (cand.ray && cand.check.dual_infeasibility_certified &&
      (s == VerdictStatus::kDualInfeasible ||
       s == VerdictStatus::kBothInfeasible)) {
    out.certificates.push_back(*cand.ray);
  }
  if (cand.multiplier && cand.check.primal_infeasibility_certified &&
      (s == VerdictStatus::kPrimalInfeasible ||
       s == VerdictStatus::kBothInfeasible)) {
    out.certificates.push_back(*cand.multiplier);
  }

  if (!out.converged) {
    const int iterations = out.trace.iterations;
    throw IterationLimit(
        "primal iterates did not settle within " + std::to_string(iterations) +
            " iterations",
        std::make_shared<const ConicSolveResult>(std::move(out)));
  }
  return out;
}

}  // namespace pdhg
