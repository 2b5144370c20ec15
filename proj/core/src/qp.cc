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

#include "pdhg/qp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <random>
#include <utility>

namespace pdhg {

namespace {

constexpr int kRayleighProbes = 100;
constexpr double kRayleighTolerance = 1e-10;

Matrix IdentityPlus(const Matrix& h, double sigma) {
  Matrix m = sigma * h;
  m.diagonal().array() += 1.0;
  return m;
}

// Factor of Id + sigma H, rebuilt when sigma changes.
class ResolventCache {
 public:
  explicit ResolventCache(Matrix h)
      : h_(std::move(h)), zero_(h_.isZero(0.0)) {}

  Vector Apply(double sigma, const Vector& x) {
    if (zero_) return x;
    return Get(sigma)->Solve(x);
  }

 private:
  std::shared_ptr<const SpdFactorization> Get(double sigma) {
    std::lock_guard<std::mutex> lock(mu_);
    if (!factor_ || sigma != sigma_) {
      factor_ = std::make_shared<const SpdFactorization>(
          SpdFactorization::Factorize(IdentityPlus(h_, sigma)));
      sigma_ = sigma;
    }
    return factor_;
  }

  const Matrix h_;
  const bool zero_;
  std::mutex mu_;
  double sigma_ = std::numeric_limits<double>::quiet_NaN();
  std::shared_ptr<const SpdFactorization> factor_;
};

}  // namespace

QpProblem MakeInequalityQp(Matrix h, Vector c, Matrix a, Vector b) {
  if (h.size() == 0) h = Matrix::Zero(c.size(), c.size());
  const int m = static_cast<int>(b.size());
  return QpProblem{std::move(h), std::move(c), std::move(a), std::move(b),
                   Cone::NonposOrthant(m)};
}

void ValidateQp(const QpProblem& qp, std::uint64_t seed) {
  const int n = qp.n();
  const int m = qp.m();
  if (qp.h.rows() != n || qp.h.cols() != n) {
    throw DimensionMismatch("H must be n x n with n = dim(c)");
  }
  if (qp.a.rows() != m || qp.a.cols() != n) {
    throw DimensionMismatch("A must be m x n with m = dim(b), n = dim(c)");
  }
  if (qp.cone.dim() != m) {
    throw DimensionMismatch("cone dimension " + std::to_string(qp.cone.dim()) +
                            " does not match m = " + std::to_string(m));
  }
  if (!qp.cone.IsPolyhedral()) {
    throw NonPolyhedralCone("QP cone must be polyhedral, got " +
                            qp.cone.DebugString());
  }
  if (!AllFinite(qp.h) || !AllFinite(qp.c) || !AllFinite(qp.a) ||
      !AllFinite(qp.b)) {
    throw InvalidArgument("QP data contains non-finite entries");
  }
  if (n > 0 && SymmetryDefect(qp.h) > kSymmetryTolerance) {
    throw InvalidArgument("H is not symmetric");
  }
  if (n == 0 || qp.h.isZero(0.0)) return;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector x(n);
  for (int probe = 0; probe < kRayleighProbes; ++probe) {
    for (int i = 0; i < n; ++i) x[i] = normal(rng);
    x.normalize();
    if (x.dot(qp.h * x) < -kRayleighTolerance) {
      throw NotPositiveSemidefinite("H has a negative Rayleigh quotient");
    }
  }
}

double QpDual::Objective(const Vector& q, const Vector& y) const {
  return -0.5 * q.dot(Matvec(primal->h, q)) - primal->b.dot(y);
}

ResidualReport QpDual::Feasibility(const Vector& q, const Vector& y,
                                   double tol) const {
  ResidualReport rep;
  rep.tol = tol;
  rep.Add("equation",
          (Matvec(primal->h, q) + primal->c + MatvecTranspose(primal->a, y))
              .norm());
  rep.Add("dual_cone", Membership(primal->cone.Polar(), y, tol).distance);
  return rep;
}

double PrimalObjective(const QpProblem& qp, const Vector& x) {
  return 0.5 * x.dot(Matvec(qp.h, x)) + qp.c.dot(x);
}

ResidualReport CheckKkt(const QpProblem& qp, const Vector& x, const Vector& y,
                        double tol) {
  const Vector slack = Matvec(qp.a, x) - qp.b;
  ResidualReport rep;
  rep.tol = tol;
  rep.Add("stationarity",
          (Matvec(qp.h, x) + qp.c + MatvecTranspose(qp.a, y)).norm());
  rep.Add("primal_cone", Membership(qp.cone, slack, tol).distance);
  rep.Add("dual_cone", Membership(qp.cone.Polar(), y, tol).distance);
  rep.Add("complementarity", std::abs(y.dot(slack)));
  return rep;
}

SaddleProblem BuildSaddle(const QpProblem& qp, std::optional<double> sigma,
                          std::optional<double> tau) {
  ValidateQp(qp);
  auto cache = std::make_shared<ResolventCache>(qp.h);
  Vector c = qp.c;
  Vector b = qp.b;
  Cone polar = qp.cone.Polar();
  ProxOracle prox_f = [cache, c](double step, const Vector& x) {
    return cache->Apply(step, x - step * c);
  };
  ProxOracle prox_gstar = [polar, b](double step, const Vector& y) {
    return Project(polar, y - step * b);
  };
  SaddleProblem problem(qp.a, std::move(prox_f), std::move(prox_gstar), sigma,
                        tau);
  // Surfaces NotPositiveDefinite here instead of inside the first step.
  cache->Apply(problem.sigma(), Vector::Zero(qp.n()));
  return problem;
}

Vector ResolventH(const QpProblem& qp, double sigma, const Vector& x) {
  if (qp.h.isZero(0.0)) return x;
  return SpdFactorization::Factorize(IdentityPlus(qp.h, sigma)).Solve(x);
}

ResidualReport CheckStaticDisplacement(const QpProblem& qp, double sigma,
                                       double tau,
                                       const DisplacementEstimate& v,
                                       double tol) {
  if (v.v_primal.size() != qp.n() || v.v_dual.size() != qp.m()) {
    throw DimensionMismatch("displacement does not match the QP dimensions");
  }
  const Vector& vr = v.v_primal;
  const Vector& vd = v.v_dual;
  const Vector avr = Matvec(qp.a, vr);
  const Vector atvd = MatvecTranspose(qp.a, vd);
  const Vector hvr = Matvec(qp.h, vr);
  const Vector point = -vd - tau * avr;
  const Cone polar = qp.cone.Polar();

  ResidualReport rep;
  rep.tol = tol;
  rep.Add("projection_dual", (-vd - Project(polar, point)).norm());
  rep.Add("projection_primal", (-tau * avr - Project(qp.cone, point)).norm());
  rep.Add("orthogonality", std::abs(avr.dot(vd)));
  rep.Add("stationarity", (atvd + hvr).norm());
  rep.Add("kernel_h", hvr.norm());
  rep.Add("kernel_at", atvd.norm());
  rep.Add("resolvent_fixed", (ResolventH(qp, sigma, vr) - vr).norm());
  double comp = 0.0;
  for (int i = 0; i < qp.m(); ++i) {
    comp = std::max(comp, std::min(std::abs(avr[i]), std::abs(vd[i])));
  }
  rep.Add("complementarity", comp);
  rep.Add("sign_primal", Membership(qp.cone, -avr, tol).distance);
  rep.Add("sign_dual", Membership(polar, -vd, tol).distance);
  return rep;
}

namespace {

QpCertificate MakeRay(const QpProblem& qp, double sigma, const Vector& vr) {
  QpCertificate cert;
  cert.kind = QpCertificate::Kind::kDualInfeasibleRay;
  cert.vector = vr / vr.norm();
  cert.eq_residual = Matvec(qp.h, cert.vector).norm();
  cert.cone_residual =
      Membership(qp.cone, -Matvec(qp.a, cert.vector), 0.0).distance;
  cert.strict_margin = qp.c.dot(cert.vector);
  cert.displacement_gap = qp.c.dot(vr) - vr.squaredNorm() / sigma;
  return cert;
}

QpCertificate MakeMultiplier(const QpProblem& qp, double tau,
                             const Vector& vd) {
  QpCertificate cert;
  cert.kind = QpCertificate::Kind::kPrimalInfeasibleMultiplier;
  cert.vector = vd / vd.norm();
  cert.eq_residual = MatvecTranspose(qp.a, cert.vector).norm();
  cert.cone_residual =
      Membership(qp.cone.Polar(), -cert.vector, 0.0).distance;
  cert.strict_margin = qp.b.dot(cert.vector);
  cert.displacement_gap = qp.b.dot(vd) - vd.squaredNorm() / tau;
  return cert;
}

void Record(const QpCertificate& cert, const std::string& prefix,
            ResidualReport& rep) {
  rep.Add(prefix + "eq", cert.eq_residual);
  rep.Add(prefix + "cone", cert.cone_residual);
  rep.Add(prefix + "gap", std::max(0.0, -cert.displacement_gap));
}

bool Valid(const QpCertificate& cert, double tol) {
  return cert.eq_residual <= tol && cert.cone_residual <= tol &&
         cert.displacement_gap >= -tol && cert.strict_margin > 0.0;
}

struct Candidates {
  std::optional<QpCertificate> ray;
  std::optional<QpCertificate> multiplier;
  CertificateCheck check;
};

Candidates Evaluate(const QpProblem& qp, double sigma, double tau,
                    const DisplacementEstimate& v,
                    const CertificateTolerances& tols) {
  if (v.v_primal.size() != qp.n() || v.v_dual.size() != qp.m()) {
    throw DimensionMismatch("displacement does not match the QP dimensions");
  }
  Candidates out;
  out.check.residuals.tol = tols.residual_tol;
  if (v.v_primal.norm() > tols.cert_tol) {
    out.ray = MakeRay(qp, sigma, v.v_primal);
    Record(*out.ray, "ray_", out.check.residuals);
    out.check.dual_infeasibility_certified = Valid(*out.ray, tols.residual_tol);
  }
  if (v.v_dual.norm() > tols.cert_tol) {
    out.multiplier = MakeMultiplier(qp, tau, v.v_dual);
    Record(*out.multiplier, "multiplier_", out.check.residuals);
    out.check.primal_infeasibility_certified =
        Valid(*out.multiplier, tols.residual_tol);
  }
  return out;
}

}  // namespace

CertificateCheck ValidateQpCertificates(const QpProblem& qp, double sigma,
                                        double tau,
                                        const DisplacementEstimate& v,
                                        const CertificateTolerances& tols) {
  return Evaluate(qp, sigma, tau, v, tols).check;
}

std::vector<QpCertificate> ExtractCertificates(
    const QpProblem& qp, double sigma, double tau,
    const DisplacementEstimate& v, const CertificateTolerances& tols) {
  Candidates cand = Evaluate(qp, sigma, tau, v, tols);
  std::vector<QpCertificate> out;
  if (cand.ray) {
    if (!cand.check.dual_infeasibility_certified) {
      throw CertificateValidationFailed(
          "nonzero primal displacement is not a valid recession ray",
          cand.check.residuals);
    }
    out.push_back(*cand.ray);
  }
  if (cand.multiplier) {
    if (!cand.check.primal_infeasibility_certified) {
      throw CertificateValidationFailed(
          "nonzero dual displacement is not a valid Farkas multiplier",
          cand.check.residuals);
    }
    out.push_back(*cand.multiplier);
  }
  return out;
}

std::vector<ShiftedIterateRow> ShiftedIterateExperiment(
    const QpProblem& qp, double sigma, double tau, const PdhgIterate& z0,
    const PdhgIterate& v_ref, int iterations) {
  if (iterations < 0) throw InvalidArgument("iterations must be nonnegative");
  const SaddleProblem problem = BuildSaddle(qp, sigma, tau);
  ValidateSteps(problem);
  std::vector<ShiftedIterateRow> rows;
  rows.reserve(iterations);
  PdhgIterate z = z0;
  for (int k = 0; k < iterations; ++k) {
    PdhgIterate next = ApplyT(problem, z);
    const PdhgIterate diff = z - next;
    const PdhgIterate shifted = z + static_cast<double>(k) * v_ref;
    const PdhgIterate resid = shifted - ApplyShiftedT(problem, v_ref, shifted);
    ShiftedIterateRow row;
    row.k = k;
    row.norm_dx = diff.x.norm();
    row.norm_dy = diff.y.norm();
    row.norm_dx_minus_vR = (diff.x - v_ref.x).norm();
    row.norm_dy_minus_vD = (diff.y - v_ref.y).norm();
    row.shifted_resid_x = resid.x.norm();
    row.shifted_resid_y = resid.y.norm();
    rows.push_back(row);
    z = std::move(next);
    if (!z.AllFinite()) throw NonFiniteIterate(k + 1);
  }
  return rows;
}

QpSolveResult SolveQp(const QpProblem& qp, const PdhgIterate& z0,
                      const QpSolveOptions& options) {
  const SaddleProblem problem = BuildSaddle(qp, options.sigma, options.tau);
  const MetricM metric = ValidateSteps(problem);
  QpSolveResult out;
  out.sigma = problem.sigma();
  out.tau = problem.tau();
  out.trace = Iterate(problem, z0, options.iterate);
  out.v = EstimateDisplacementAuto(out.trace, metric);
  const double sigma = out.sigma;
  const double tau = out.tau;
  const CertificateTolerances tols = options.certificates;
  Candidates cand;
  CertificateValidator validator = [&](const DisplacementEstimate& v) {
    cand = Evaluate(qp, sigma, tau, v, tols);
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
  return out;
}

}  // namespace pdhg
