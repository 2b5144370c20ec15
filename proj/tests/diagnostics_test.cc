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

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "pdhg/qp.h"
#include "support/oracles.h"

namespace pdhg {
namespace {

using testing::ExampleLp;
using testing::ExampleQp;
using testing::ExampleStart;
using testing::kExampleStep;

PdhgIterate ExampleV() {
  PdhgIterate v{Vector::Constant(2, -0.15), Vector::Zero(4)};
  v.y << -0.15, -0.15, 0, 0;
  return v;
}

DisplacementEstimate AsEstimate(const PdhgIterate& v, const MetricM& m) {
  DisplacementEstimate e;
  e.v_primal = v.x;
  e.v_dual = v.y;
  e.m_norm = m.Norm(v);
  return e;
}

struct ExampleRun {
  SaddleProblem problem;
  MetricM metric;
  IterateTrace trace;
};

ExampleRun RunExample(const QpProblem& qp, int iterations, int depth = 64) {
  SaddleProblem p = BuildSaddle(qp, kExampleStep, kExampleStep);
  MetricM m = ValidateSteps(p);
  IterateOptions opts;
  opts.max_iterations = iterations;
  opts.residual_tol = 0.0;
  opts.trace_depth = depth;
  IterateTrace t = Iterate(p, ExampleStart(), opts);
  return {std::move(p), std::move(m), std::move(t)};
}

QpProblem FeasibleLp() {
  // min x s.t. x >= 0.
  return MakeInequalityQp(Matrix(), Vector::Ones(1), -Matrix::Ones(1, 1),
                          Vector::Zero(1));
}

TEST(EstimateDisplacementTest, AllMethodsRecoverTheExampleVector) {
  const ExampleRun run = RunExample(ExampleLp(), 10000);
  const PdhgIterate v = ExampleV();
  for (auto method : {EstimationMethod::LastDifference(),
                      EstimationMethod::AveragedDifferences(10)}) {
    const DisplacementEstimate e =
        EstimateDisplacement(run.trace, run.metric, method);
    EXPECT_LE((e.v_primal - v.x).norm(), 1e-6);
    EXPECT_LE((e.v_dual - v.y).norm(), 1e-6);
    EXPECT_NEAR(e.m_norm, run.metric.Norm(v), 1e-6);
  }
  const DisplacementEstimate pazy = EstimateDisplacement(
      run.trace, run.metric, EstimationMethod::PazyScaled());
  EXPECT_LE((pazy.AsIterate() - v).Norm(), 1e-3);
  EXPECT_EQ(pazy.iterations_used, 10000);
}

TEST(EstimateDisplacementTest, QpExampleHasZeroPrimalBlock) {
  const ExampleRun run = RunExample(ExampleQp(), 10000);
  const DisplacementEstimate e = EstimateDisplacement(run.trace, run.metric);
  EXPECT_LE(e.v_primal.norm(), 1e-6);
  EXPECT_LE((e.v_dual - ExampleV().y).norm(), 1e-6);
}

TEST(EstimateDisplacementTest, FeasibleInstanceGivesZero) {
  const SaddleProblem p = BuildSaddle(FeasibleLp());
  const MetricM m = ValidateSteps(p);
  const IterateTrace t = Iterate(p, PdhgIterate::Zero(1, 1));
  ASSERT_EQ(t.stop_reason, StopReason::kResidualTolerance);
  const DisplacementEstimate e = EstimateDisplacementAuto(t, m);
  EXPECT_EQ(e.method.kind, EstimationMethod::Kind::kLastDifference);
  EXPECT_LE(e.m_norm, 1e-9);
}

TEST(EstimateDisplacementTest, ShortTracesThrow) {
  const ExampleRun shallow = RunExample(ExampleLp(), 100, 5);
  EXPECT_THROW(EstimateDisplacement(shallow.trace, shallow.metric,
                                    EstimationMethod::AveragedDifferences(10)),
               EmptyTrace);
  EXPECT_NO_THROW(EstimateDisplacement(shallow.trace, shallow.metric,
                                       EstimationMethod::LastDifference()));
  const ExampleRun none = RunExample(ExampleLp(), 10, 0);
  EXPECT_THROW(EstimateDisplacement(none.trace, none.metric,
                                    EstimationMethod::LastDifference()),
               EmptyTrace);
  EXPECT_EQ(EstimateDisplacementAuto(shallow.trace, shallow.metric)
                .method.kind,
            EstimationMethod::Kind::kLastDifference);
}

TEST(DisplacementInvariantsTest, OrthogonalityAndMNormIdentity) {
  std::mt19937_64 rng(4);
  std::vector<QpProblem> problems = {ExampleLp(), ExampleQp()};
  for (int i = 0; i < 5; ++i) {
    problems.push_back(testing::RandomInfeasibleLp(3, 3, rng));
  }
  for (const QpProblem& qp : problems) {
    const SaddleProblem p = BuildSaddle(qp);
    const MetricM m = ValidateSteps(p);
    IterateOptions opts;
    opts.max_iterations = 20000;
    opts.residual_tol = 0.0;
    const IterateTrace t =
        Iterate(p, PdhgIterate::Zero(qp.n(), qp.m()), opts);
    const DisplacementEstimate e = EstimateDisplacement(t, m);
    const double inner = Matvec(qp.a, e.v_primal).dot(e.v_dual);
    const double vsq = e.v_primal.squaredNorm() + e.v_dual.squaredNorm();
    EXPECT_LE(std::abs(inner), 1e-8 * (1 + vsq));
    const double identity = e.v_primal.squaredNorm() / p.sigma() +
                            e.v_dual.squaredNorm() / p.tau();
    EXPECT_NEAR(e.m_norm * e.m_norm, identity, 1e-8 * (1 + identity));
  }
}

TEST(SampleRangeTest, ExampleWitnessesReproduceDisplacementBlocks) {
  const QpProblem qp = ExampleLp();
  Vector p(4);
  p << 1.5, 0, 0, 0;
  Vector q(4);
  q << 0, 0, -2.65, -1.15;
  Vector w(2);
  w << -2.5, -1;
  const RangeSample s =
      MakeRangeSample(qp, Vector::Constant(2, 7.0), p, w, q);
  // r = v_R / sigma.
  EXPECT_LE((s.r - Vector::Constant(2, -0.5)).norm(), 1e-15);
  // d = v_D / tau - A v_R.
  Vector expected_d(4);
  expected_d << -0.5, -0.5, -0.15, -0.15;
  EXPECT_LE((s.d - expected_d).norm(), 1e-14);
  const Vector other = ExampleV().y / kExampleStep -
                       Matvec(qp.a, ExampleV().x);
  EXPECT_LE((s.d - other).norm(), 1e-14);
}

TEST(SampleRangeTest, DeterministicAndConeRespecting) {
  QpProblem qp = ExampleLp();
  qp.cone = Cone::Product({Cone::NonposOrthant(2), Cone::Zero(1),
                           Cone::Free(1)});
  const auto a = SampleRange(qp, 10, 99);
  const auto b = SampleRange(qp, 10, 99);
  ASSERT_EQ(a.size(), 10u);
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(a[i].r, b[i].r);
    EXPECT_EQ(a[i].d, b[i].d);
    EXPECT_TRUE(Membership(qp.cone.Polar(), a[i].witness.p, 0).in_cone);
    EXPECT_TRUE(Membership(qp.cone, a[i].witness.q, 0).in_cone);
    EXPECT_EQ(a[i].witness.q[2], 0.0);
    EXPECT_EQ(a[i].witness.p[3], 0.0);
  }
  EXPECT_NE(SampleRange(qp, 1, 100)[0].r, a[0].r);
}

TEST(SampleRangeTest, RejectsSecondOrderBlocks) {
  QpProblem qp = ExampleLp();
  qp.cone = Cone::Product({Cone::NonposOrthant(1), Cone::SecondOrder(3)});
  EXPECT_THROW(SampleRange(qp, 3, 0), NonPolyhedralCone);
}

TEST(CheckVOptimalityTest, ExampleVectorPassesAndPerturbationFails) {
  const QpProblem qp = ExampleLp();
  const SaddleProblem p = BuildSaddle(qp, kExampleStep, kExampleStep);
  const MetricM m = ValidateSteps(p);
  const auto samples = SampleRange(qp, 1000, 1);
  const VOptimalityResult ok =
      CheckVOptimality(AsEstimate(ExampleV(), m), m, samples, 1e-8);
  EXPECT_TRUE(ok.optimal);
  EXPECT_LE(ok.worst_violation, 1e-8);

  PdhgIterate bad = ExampleV();
  bad.x[0] += 0.1;
  const VOptimalityResult fail =
      CheckVOptimality(AsEstimate(bad, m), m, samples, 1e-8);
  EXPECT_FALSE(fail.optimal);
  EXPECT_GT(fail.worst_violation, 1e-8);
  ASSERT_GE(fail.worst_index, 0);
  // Brute force over the samples agrees on the maximizer.
  double worst = -1e300;
  for (const auto& s : samples) {
    const PdhgIterate mv = m.Apply(bad);
    worst = std::max(worst, bad.x.dot(mv.x - s.r) + bad.y.dot(mv.y - s.d));
  }
  EXPECT_NEAR(worst, fail.worst_violation, 1e-12);
}

TEST(CheckVOptimalityTest, ZeroOnFeasibleProblemAndMonotoneInTol) {
  const QpProblem qp = FeasibleLp();
  const SaddleProblem p = BuildSaddle(qp);
  const MetricM m = ValidateSteps(p);
  const auto samples = SampleRange(qp, 100, 2);
  const VOptimalityResult r = CheckVOptimality(
      AsEstimate(PdhgIterate::Zero(1, 1), m), m, samples, 0.0);
  EXPECT_TRUE(r.optimal);
  EXPECT_LE(r.worst_violation, 0.0);

  PdhgIterate u{Vector::Constant(1, 0.3), Vector::Constant(1, -0.2)};
  const auto est = AsEstimate(u, m);
  bool passed = false;
  for (double tol : {1e-6, 1e-3, 1e-1, 1.0, 10.0, 100.0}) {
    const bool now = CheckVOptimality(est, m, samples, tol).optimal;
    EXPECT_TRUE(!passed || now) << tol;
    passed = now;
  }
  EXPECT_THROW(CheckVOptimality(est, m, {}, 1.0), InvalidArgument);
}

TEST(MembershipVQpTest, ZeroWithFeasiblePairOfConsistentQp) {
  // min 1/2 x^2 - x s.t. x <= 0.5: x = 0.5, y = 0.5.
  const QpProblem qp = MakeInequalityQp(Matrix::Identity(1, 1),
                                        -Vector::Ones(1), Matrix::Ones(1, 1),
                                        Vector::Constant(1, 0.5));
  const Vector x = Vector::Constant(1, 0.5);
  const Vector y = Vector::Constant(1, 0.5);
  ASSERT_TRUE(CheckKkt(qp, x, y, 1e-15).Passed());
  const ResidualReport rep = CheckMembershipVQp(
      qp, 0.4, 0.4, Vector::Zero(1), Vector::Zero(1), -x, y, 1e-12);
  EXPECT_TRUE(rep.Passed()) << rep.Worst();
}

TEST(MembershipVQpTest, ExampleDisplacementWithEnumeratedWitnesses) {
  const QpProblem qp = ExampleLp();
  const PdhgIterate v = ExampleV();
  const double sigma = kExampleStep;
  const double tau = kExampleStep;
  // y = d + s with s >= 0 and A^T s = r / sigma - c - A^T d.
  const Vector rhs = v.x / sigma - qp.c - MatvecTranspose(qp.a, v.y);
  const auto s = testing::NonnegativeSolution(qp.a.transpose(), rhs);
  ASSERT_TRUE(s.has_value());
  const Vector y = v.y + *s;
  // A w >= d / tau - b.
  const auto w = testing::PointInPolyhedron(qp.a, v.y / tau - qp.b);
  ASSERT_TRUE(w.has_value());
  const ResidualReport rep =
      CheckMembershipVQp(qp, sigma, tau, v.x, v.y, *w, y, 1e-12);
  EXPECT_TRUE(rep.Passed()) << rep.Worst();

  Vector r_bad = v.x;
  r_bad[0] += sigma;
  const ResidualReport bad =
      CheckMembershipVQp(qp, sigma, tau, r_bad, v.y, *w, y, 1e-12);
  EXPECT_FALSE(bad.Passed());
  EXPECT_NEAR(bad.Get("stationarity"), 1.0, 1e-12);
  EXPECT_LE(bad.Get("primal_cone"), 1e-12);
}

TEST(MembershipVConicTest, FeasiblePointAndRandomNonMember) {
  ConicPrimalProblem cp;
  cp.cone = Cone::NonnegOrthant(2);
  cp.a = Matrix::Ones(1, 2);
  cp.b = Vector::Ones(1);
  cp.c = Vector::Zero(2);
  Vector xbar(2);
  xbar << 0.25, 0.75;
  const ResidualReport rep = CheckMembershipVConic(
      cp, 0.5, 0.5, Vector::Zero(2), Vector::Zero(1), -xbar, Vector::Zero(1),
      1e-12);
  EXPECT_TRUE(rep.Passed());
  std::mt19937_64 rng(6);
  const ResidualReport bad = CheckMembershipVConic(
      cp, 0.5, 0.5, testing::RandomVector(2, rng),
      testing::RandomVector(1, rng), testing::RandomVector(2, rng),
      testing::RandomVector(1, rng), 1e-12);
  EXPECT_FALSE(bad.Passed());
  EXPECT_GT(bad.Worst(), 0.0);
}

TEST(ResidualReportTest, Accessors) {
  ResidualReport rep;
  rep.tol = 0.5;
  rep.Add("a", 0.1);
  rep.Add("b", 0.4);
  EXPECT_TRUE(rep.Passed());
  EXPECT_DOUBLE_EQ(rep.Worst(), 0.4);
  EXPECT_TRUE(rep.Has("a"));
  EXPECT_THROW(rep.Get("c"), InvalidArgument);
  rep.Add("c", 0.6);
  EXPECT_FALSE(rep.Passed());
}

CertificateValidator QpValidator(const QpProblem& qp, double sigma,
                                 double tau) {
  return [qp, sigma, tau](const DisplacementEstimate& v) {
    return ValidateQpCertificates(qp, sigma, tau, v);
  };
}

TEST(ClassifyTest, ExamplesAndFeasibleProblem) {
  {
    const ExampleRun run = RunExample(ExampleLp(), 10000);
    const auto v = EstimateDisplacement(run.trace, run.metric);
    const auto verdict = Classify(run.trace, v, {},
                                  QpValidator(ExampleLp(), 0.3, 0.3));
    EXPECT_EQ(verdict.status, VerdictStatus::kBothInfeasible);
    ASSERT_TRUE(verdict.evidence.has_value());
    EXPECT_TRUE(verdict.residual_report.Passed());
    EXPECT_EQ(Classify(run.trace, v, {}).status,
              VerdictStatus::kInconclusive);
  }
  {
    const ExampleRun run = RunExample(ExampleQp(), 10000);
    const auto v = EstimateDisplacement(run.trace, run.metric);
    EXPECT_EQ(Classify(run.trace, v, {}, QpValidator(ExampleQp(), 0.3, 0.3))
                  .status,
              VerdictStatus::kPrimalInfeasible);
  }
  {
    const QpProblem qp = FeasibleLp();
    const SaddleProblem p = BuildSaddle(qp);
    const MetricM m = ValidateSteps(p);
    const IterateTrace t = Iterate(p, PdhgIterate::Zero(1, 1));
    const auto v = EstimateDisplacementAuto(t, m);
    EXPECT_EQ(Classify(t, v, {}, QpValidator(qp, p.sigma(), p.tau())).status,
              VerdictStatus::kConsistentCandidate);
  }
}

TEST(ClassifyTest, BudgetExhaustedOrDivergingIsInconclusive) {
  const QpProblem qp = FeasibleLp();
  const SaddleProblem p = BuildSaddle(qp);
  const MetricM m = ValidateSteps(p);
  IterateOptions opts;
  opts.max_iterations = 2;
  const IterateTrace t = Iterate(p, PdhgIterate::Zero(1, 1), opts);
  const auto v = EstimateDisplacement(t, m, EstimationMethod::LastDifference());
  ClassifyThresholds loose;
  loose.cert_tol = 10.0;
  EXPECT_EQ(Classify(t, v, loose).status, VerdictStatus::kInconclusive);

  IterateTrace fake = t;
  fake.scalars.back().residual_m = 0.0;
  fake.scalars.back().norm_z = 1e9;
  DisplacementEstimate zero = v;
  zero.v_primal.setZero();
  zero.v_dual.setZero();
  zero.m_norm = 0.0;
  const auto verdict = Classify(fake, zero, {});
  EXPECT_EQ(verdict.status, VerdictStatus::kInconclusive);
  EXPECT_FALSE(verdict.note.empty());
}

}  // namespace
}  // namespace pdhg
