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

#include <cmath>
#include <limits>
#include <random>

#include "gtest/gtest.h"
#include "support/oracles.h"

namespace pdhg {
namespace {

using testing::ExampleLp;
using testing::ExampleQp;
using testing::ExampleStart;
using testing::kExampleStep;

DisplacementEstimate ExampleV() {
  DisplacementEstimate v;
  v.v_primal = Vector::Constant(2, -0.15);
  v.v_dual = Vector::Zero(4);
  v.v_dual << -0.15, -0.15, 0, 0;
  return v;
}

DisplacementEstimate ExampleQpV() {
  DisplacementEstimate v = ExampleV();
  v.v_primal.setZero();
  return v;
}

TEST(ValidateQpTest, RejectsMalformedProblems) {
  QpProblem qp = ExampleQp();
  EXPECT_NO_THROW(ValidateQp(qp));

  QpProblem wrong_b = qp;
  wrong_b.b = Vector::Zero(3);
  EXPECT_THROW(ValidateQp(wrong_b), DimensionMismatch);

  QpProblem nan = qp;
  nan.c[1] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(ValidateQp(nan), InvalidArgument);

  QpProblem asym = qp;
  asym.h(0, 1) = 1.0;
  EXPECT_THROW(ValidateQp(asym), InvalidArgument);

  QpProblem indefinite = qp;
  indefinite.h(0, 0) = -1.0;
  EXPECT_THROW(ValidateQp(indefinite), NotPositiveSemidefinite);

  QpProblem soc = qp;
  soc.cone = Cone::SecondOrder(4);
  EXPECT_THROW(ValidateQp(soc), NonPolyhedralCone);

  QpProblem cone_dim = qp;
  cone_dim.cone = Cone::NonposOrthant(3);
  EXPECT_THROW(ValidateQp(cone_dim), DimensionMismatch);
}

TEST(BuildSaddleTest, ProxMatchesClosedForms) {
  const QpProblem qp = ExampleQp();
  const SaddleProblem p = BuildSaddle(qp, 0.3, 0.3);
  Vector x(2);
  x << 1.0, -2.0;
  // (I + 0.3 I)^{-1} (x - 0.3 c).
  const Vector expected_x = (x - 0.3 * qp.c) / 1.3;
  EXPECT_LE((p.ProxF(x) - expected_x).norm(), 1e-14);

  Vector y(4);
  y << 1.0, -1.0, 0.5, 2.0;
  // b = (-1, -1, 1, 1) in NonposOrthant form, polar is R_+^4.
  Vector expected_y = (y - 0.3 * qp.b).cwiseMax(0.0);
  EXPECT_LE((p.ProxGStar(y) - expected_y).norm(), 1e-15);

  EXPECT_LE((ResolventH(qp, 0.3, x) - x / 1.3).norm(), 1e-14);

  const SaddleProblem lp = BuildSaddle(ExampleLp(), 0.3, 0.3);
  EXPECT_LE((lp.ProxF(x) - (x - 0.3 * qp.c)).norm(), 1e-15);
}

TEST(BuildSaddleTest, GeneralHessianResolvent) {
  std::mt19937_64 rng(11);
  const Matrix l = testing::RandomMatrix(4, 4, rng);
  QpProblem qp = MakeInequalityQp(l * l.transpose(),
                                  testing::RandomVector(4, rng),
                                  testing::RandomMatrix(3, 4, rng),
                                  testing::RandomVector(3, rng));
  const Vector x = testing::RandomVector(4, rng);
  for (double sigma : {0.1, 0.7, 0.1}) {
    const Vector r = ResolventH(qp, sigma, x);
    const Vector back = r + sigma * Matvec(qp.h, r);
    EXPECT_LE((back - x).norm(), 1e-12) << sigma;
  }
}

TEST(StaticDisplacementTest, ExampleVectorsSatisfyAllIdentities) {
  const ResidualReport lp =
      CheckStaticDisplacement(ExampleLp(), 0.3, 0.3, ExampleV(), 1e-12);
  EXPECT_TRUE(lp.Passed()) << lp.Worst();
  const ResidualReport qp =
      CheckStaticDisplacement(ExampleQp(), 0.3, 0.3, ExampleQpV(), 1e-12);
  EXPECT_TRUE(qp.Passed()) << qp.Worst();
}

TEST(StaticDisplacementTest, WrongSignIsDetected) {
  DisplacementEstimate v = ExampleV();
  v.v_dual[0] = 0.15;
  const ResidualReport rep =
      CheckStaticDisplacement(ExampleLp(), 0.3, 0.3, v, 1e-12);
  EXPECT_FALSE(rep.Passed());
  EXPECT_GE(rep.Worst(), 0.15 - 1e-12);
}

TEST(StaticDisplacementTest, QpRejectsNonzeroPrimalBlock) {
  const ResidualReport rep =
      CheckStaticDisplacement(ExampleQp(), 0.3, 0.3, ExampleV(), 1e-12);
  EXPECT_FALSE(rep.Passed());
  EXPECT_NEAR(rep.Get("kernel_h"), 0.15 * std::sqrt(2.0), 1e-12);
}

TEST(CertificatesTest, LpHasBothCertificates) {
  const DisplacementEstimate v = ExampleV();
  const QpProblem lp = ExampleLp();
  // <b, v_D> equals ||v_D||^2 / tau.
  EXPECT_NEAR(lp.b.dot(v.v_dual), 0.15, 1e-15);
  EXPECT_NEAR(v.v_dual.squaredNorm() / 0.3, 0.15, 1e-15);
  EXPECT_NEAR(lp.c.dot(v.v_primal), 0.15, 1e-15);

  const auto certs = ExtractCertificates(lp, 0.3, 0.3, v);
  ASSERT_EQ(certs.size(), 2u);
  for (const auto& cert : certs) {
    EXPECT_NEAR(cert.vector.norm(), 1.0, 1e-15);
    EXPECT_GT(cert.strict_margin, 0.0);
    EXPECT_LE(cert.eq_residual, 1e-12);
    EXPECT_LE(cert.cone_residual, 1e-12);
  }
  const auto ray = certs[0].kind == QpCertificate::Kind::kDualInfeasibleRay
                       ? certs[0]
                       : certs[1];
  // -u is a recession direction of A x <= b along which <c, x> decreases.
  EXPECT_GE(Matvec(lp.a, ray.vector).minCoeff(), -1e-15);
  EXPECT_GT(lp.c.dot(ray.vector), 0.0);
}

TEST(CertificatesTest, QpHasOnlyMultiplier) {
  const auto certs = ExtractCertificates(ExampleQp(), 0.3, 0.3, ExampleQpV());
  ASSERT_EQ(certs.size(), 1u);
  EXPECT_EQ(certs[0].kind, QpCertificate::Kind::kPrimalInfeasibleMultiplier);
  // Farkas: y >= 0, A^T y = 0, <b, y> < 0.
  const Vector y = -certs[0].vector;
  EXPECT_GE(y.minCoeff(), -1e-15);
  EXPECT_LE(MatvecTranspose(ExampleQp().a, y).norm(), 1e-15);
  EXPECT_LT(ExampleQp().b.dot(y), 0.0);
}

TEST(CertificatesTest, ZeroDisplacementAndInvalidVectors) {
  DisplacementEstimate zero;
  zero.v_primal = Vector::Zero(2);
  zero.v_dual = Vector::Zero(4);
  EXPECT_TRUE(ExtractCertificates(ExampleLp(), 0.3, 0.3, zero).empty());

  DisplacementEstimate bad = ExampleV();
  bad.v_dual << 0.15, 0.15, 0, 0;
  EXPECT_THROW(ExtractCertificates(ExampleLp(), 0.3, 0.3, bad),
               CertificateValidationFailed);
  const CertificateCheck check =
      ValidateQpCertificates(ExampleLp(), 0.3, 0.3, bad);
  EXPECT_FALSE(check.primal_infeasibility_certified);
}

TEST(ShiftedIterateTest, LpRowsApproachDisplacement) {
  const auto rows = ShiftedIterateExperiment(
      ExampleLp(), kExampleStep, kExampleStep, ExampleStart(),
      ExampleV().AsIterate(), 50);
  ASSERT_EQ(rows.size(), 50u);
  EXPECT_EQ(rows.front().k, 0);
  EXPECT_EQ(rows.back().k, 49);
  EXPECT_LT(rows.back().norm_dx_minus_vR, rows.front().norm_dx_minus_vR);
  EXPECT_LE(rows.back().norm_dx_minus_vR, 1e-3);
  EXPECT_LE(rows.back().norm_dy_minus_vD, 1e-3);
}

TEST(ShiftedIterateTest, FeasibleProblemResidualsDecay) {
  const QpProblem qp = MakeInequalityQp(Matrix(), Vector::Ones(1),
                                        -Matrix::Ones(1, 1), Vector::Zero(1));
  PdhgIterate z0{Vector::Constant(1, 3.0), Vector::Constant(1, -2.0)};
  const auto rows = ShiftedIterateExperiment(qp, 0.5, 0.5, z0,
                                             PdhgIterate::Zero(1, 1), 200);
  EXPECT_LE(rows.back().shifted_resid_x + rows.back().shifted_resid_y, 1e-8);
  EXPECT_LE(rows.back().norm_dx_minus_vR, 1e-8);
}

TEST(KktTest, ConsistentQpSolutionAndDual) {
  // min 1/2 ||x||^2 - <(1, 1), x> s.t. x1 + x2 <= 1.
  const QpProblem qp = MakeInequalityQp(
      Matrix::Identity(2, 2), -Vector::Ones(2), Matrix::Ones(1, 2),
      Vector::Ones(1));
  QpSolveOptions opts;
  opts.iterate.residual_tol = 1e-12;
  const QpSolveResult res = SolveQp(qp, PdhgIterate::Zero(2, 1), opts);
  EXPECT_EQ(res.verdict.status, VerdictStatus::kConsistentCandidate);
  EXPECT_TRUE(res.certificates.empty());
  const Vector& x = res.trace.final_iterate.x;
  const Vector& y = res.trace.final_iterate.y;
  EXPECT_LE((x - Vector::Constant(2, 0.5)).norm(), 1e-9);
  EXPECT_NEAR(y[0], 0.5, 1e-9);
  EXPECT_TRUE(CheckKkt(qp, x, y, 1e-9).Passed());

  // Strong duality with q = x.
  const QpDual dual{&qp};
  EXPECT_TRUE(dual.Feasibility(x, y, 1e-9).Passed());
  EXPECT_NEAR(dual.Objective(x, y), PrimalObjective(qp, x), 1e-9);
  EXPECT_NEAR(PrimalObjective(qp, x), -0.75, 1e-9);
}

TEST(SolveQpTest, InfeasibleExamples) {
  QpSolveOptions opts;
  opts.sigma = kExampleStep;
  opts.tau = kExampleStep;
  opts.iterate.max_iterations = 10000;
  const QpSolveResult lp = SolveQp(ExampleLp(), ExampleStart(), opts);
  EXPECT_EQ(lp.verdict.status, VerdictStatus::kBothInfeasible);
  EXPECT_EQ(lp.certificates.size(), 2u);
  const QpSolveResult qp = SolveQp(ExampleQp(), ExampleStart(), opts);
  EXPECT_EQ(qp.verdict.status, VerdictStatus::kPrimalInfeasible);
  ASSERT_EQ(qp.certificates.size(), 1u);
}

TEST(QpInvariantsTest, DisplacementIndependentOfStart) {
  std::mt19937_64 rng(21);
  QpSolveOptions opts;
  opts.iterate.max_iterations = 20000;
  opts.iterate.residual_tol = 0.0;
  DisplacementEstimate first;
  for (int s = 0; s < 5; ++s) {
    PdhgIterate z0{10.0 * testing::RandomVector(2, rng),
                   10.0 * testing::RandomVector(4, rng)};
    const QpSolveResult res = SolveQp(ExampleQp(), z0, opts);
    if (s == 0) {
      first = res.v;
      continue;
    }
    EXPECT_LE((res.v.v_primal - first.v_primal).norm() +
                  (res.v.v_dual - first.v_dual).norm(),
              1e-5);
  }
}

TEST(QpInvariantsTest, DifferencesAreCauchy) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 3; ++t) {
    const QpProblem qp = testing::RandomInfeasibleLp(3, 4, rng);
    const SaddleProblem p = BuildSaddle(qp);
    IterateOptions opts;
    opts.max_iterations = 20000;
    opts.residual_tol = 0.0;
    opts.trace_depth = 200;
    const IterateTrace tr = Iterate(p, PdhgIterate::Zero(qp.n(), qp.m()),
                                    opts);
    double spread = 0.0;
    for (const auto& a : tr.differences) {
      for (const auto& b : tr.differences) {
        spread = std::max(spread, (a.z - b.z).Norm());
      }
    }
    EXPECT_LE(spread, 1e-6);
  }
}

TEST(QpInvariantsTest, RandomInfeasibleLpsCertifyAndComplement) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 5; ++t) {
    const QpProblem qp = testing::RandomInfeasibleLp(3, 3, rng);
    QpSolveOptions opts;
    opts.iterate.max_iterations = 100000;
    opts.iterate.residual_tol = 0.0;
    const QpSolveResult res =
        SolveQp(qp, PdhgIterate::Zero(qp.n(), qp.m()), opts);
    EXPECT_TRUE(res.verdict.status == VerdictStatus::kPrimalInfeasible ||
                res.verdict.status == VerdictStatus::kBothInfeasible)
        << ToString(res.verdict.status) << " " << res.verdict.note;
    const ResidualReport rep =
        CheckStaticDisplacement(qp, res.sigma, res.tau, res.v, 1e-7);
    EXPECT_LE(rep.Get("complementarity"), 1e-7);
    EXPECT_LE(rep.Get("orthogonality"), 1e-7);
  }
}

}  // namespace
}  // namespace pdhg
