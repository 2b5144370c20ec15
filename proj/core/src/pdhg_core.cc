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

#include "pdhg/pdhg_core.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace pdhg {
namespace {

constexpr double kDefaultStepScale = 0.9;

void CheckIterate(const SaddleProblem& problem, const PdhgIterate& z,
                  const char* what) {
  if (z.x.size() != problem.dim_x() || z.y.size() != problem.dim_y()) {
    throw DimensionMismatch(std::string(what) + ": iterate has blocks (" +
                            std::to_string(z.x.size()) + ", " +
                            std::to_string(z.y.size()) + "), problem has (" +
                            std::to_string(problem.dim_x()) + ", " +
                            std::to_string(problem.dim_y()) + ")");
  }
}

}  // namespace

StepSizeTooLarge::StepSizeTooLarge(double product)
    : Error("sigma * tau * ||A||^2 = " + std::to_string(product) +
            " must be < 1"),
      product_(product) {}

NonFiniteIterate::NonFiniteIterate(int iteration)
    : Error("non-finite iterate at iteration " + std::to_string(iteration)),
      iteration_(iteration) {}

PdhgIterate PdhgIterate::Zero(int dim_x, int dim_y) {
  return {Vector::Zero(dim_x), Vector::Zero(dim_y)};
}

PdhgIterate& PdhgIterate::operator+=(const PdhgIterate& other) {
  x += other.x;
  y += other.y;
  return *this;
}

PdhgIterate& PdhgIterate::operator-=(const PdhgIterate& other) {
  x -= other.x;
  y -= other.y;
  return *this;
}

PdhgIterate& PdhgIterate::operator*=(double alpha) {
  x *= alpha;
  y *= alpha;
  return *this;
}

bool PdhgIterate::AllFinite() const { return x.allFinite() && y.allFinite(); }

double PdhgIterate::Norm() const {
  return std::sqrt(x.squaredNorm() + y.squaredNorm());
}

PdhgIterate operator+(PdhgIterate a, const PdhgIterate& b) { return a += b; }
PdhgIterate operator-(PdhgIterate a, const PdhgIterate& b) { return a -= b; }
PdhgIterate operator*(double alpha, PdhgIterate a) { return a *= alpha; }

SaddleProblem::SaddleProblem(Matrix a, ProxOracle prox_f,
                             ProxOracle prox_gstar,
                             std::optional<double> sigma,
                             std::optional<double> tau)
    : a_(std::make_shared<const Matrix>(std::move(a))),
      prox_f_(std::move(prox_f)),
      prox_gstar_(std::move(prox_gstar)),
      norm_a_(a_->size() == 0 ? 0.0 : OperatorNormEstimate(*a_)) {
  if (!prox_f_ || !prox_gstar_) {
    throw InvalidArgument("SaddleProblem: prox oracles must be callable");
  }
  if (!a_->allFinite()) {
    throw InvalidArgument("SaddleProblem: A has non-finite entries");
  }
  const double target = kDefaultStepScale * kDefaultStepScale;
  if (norm_a_ == 0.0) {
    sigma_ = sigma.value_or(1.0);
    tau_ = tau.value_or(1.0);
  } else if (sigma && tau) {
    sigma_ = *sigma;
    tau_ = *tau;
  } else if (sigma) {
    sigma_ = *sigma;
    tau_ = target / (sigma_ * norm_a_ * norm_a_);
  } else if (tau) {
    tau_ = *tau;
    sigma_ = target / (tau_ * norm_a_ * norm_a_);
  } else {
    sigma_ = tau_ = kDefaultStepScale / norm_a_;
  }
}

MetricM::MetricM(double sigma, double tau, std::shared_ptr<const Matrix> a,
                 double norm_a)
    : sigma_(sigma), tau_(tau), a_(std::move(a)), norm_a_(norm_a) {}

PdhgIterate MetricM::Apply(const PdhgIterate& u) const {
  if (u.x.size() != a_->cols() || u.y.size() != a_->rows()) {
    throw DimensionMismatch("MetricM::Apply: block sizes do not match A");
  }
  return {u.x / sigma_ - a_->transpose() * u.y, u.y / tau_ - (*a_) * u.x};
}

double MetricM::Inner(const PdhgIterate& u, const PdhgIterate& w) const {
  if (u.x.size() != w.x.size() || u.y.size() != w.y.size()) {
    throw DimensionMismatch("MetricM::Inner: iterates differ in shape");
  }
  const PdhgIterate mw = Apply(w);
  return u.x.dot(mw.x) + u.y.dot(mw.y);
}

double MetricM::Norm(const PdhgIterate& u) const {
  return std::sqrt(std::max(Inner(u, u), 0.0));
}

double MetricM::Modulus() const {
  return std::min(1.0 / sigma_, 1.0 / tau_) *
         (1.0 - std::sqrt(sigma_ * tau_) * norm_a_);
}

MetricM ValidateSteps(const SaddleProblem& problem) {
  if (!(problem.sigma() > 0.0) || !(problem.tau() > 0.0)) {
    throw InvalidArgument("ValidateSteps: sigma and tau must be positive");
  }
  const double product =
      problem.sigma() * problem.tau() * problem.norm_a() * problem.norm_a();
  if (!(product < 1.0)) throw StepSizeTooLarge(product);
  return MetricM(problem.sigma(), problem.tau(), problem.shared_a(),
                 problem.norm_a());
}

PdhgIterate ApplyT(const SaddleProblem& problem, const PdhgIterate& z) {
  CheckIterate(problem, z, "ApplyT");
  const Matrix& a = problem.a();
  PdhgIterate next;
  next.x = problem.ProxF(z.x - problem.sigma() * (a.transpose() * z.y));
  next.y = problem.ProxGStar(z.y +
                             problem.tau() * (a * (2.0 * next.x - z.x)));
  return next;
}

PdhgIterate ApplyShiftedT(const SaddleProblem& problem, const PdhgIterate& v,
                          const PdhgIterate& z) {
  CheckIterate(problem, v, "ApplyShiftedT");
  return v + ApplyT(problem, z);
}

std::string ToString(StopReason reason) {
  switch (reason) {
    case StopReason::kMaxIterations:
      return "max_iterations";
    case StopReason::kResidualTolerance:
      return "residual_tolerance";
    case StopReason::kStopPredicate:
      return "stop_predicate";
  }
  return "unknown";
}

IterateTrace Iterate(const SaddleProblem& problem, const PdhgIterate& z0,
                     const IterateOptions& options) {
  if (options.max_iterations < 1) {
    throw InvalidArgument("Iterate: max_iterations must be >= 1");
  }
  if (options.trace_depth < 0) {
    throw InvalidArgument("Iterate: trace_depth must be >= 0");
  }
  CheckIterate(problem, z0, "Iterate");
  if (!z0.AllFinite()) throw NonFiniteIterate(0);
  const MetricM metric = ValidateSteps(problem);

  IterateTrace trace;
  trace.sigma = problem.sigma();
  trace.tau = problem.tau();
  trace.initial = z0;
  trace.scalars.reserve(std::min(options.max_iterations, 1 << 20));

  const auto keep = [&](std::deque<IndexedIterate>& ring, int k,
                        const PdhgIterate& value) {
    if (options.trace_depth == 0) return;
    if (static_cast<int>(ring.size()) == options.trace_depth) ring.pop_front();
    ring.push_back({k, value});
  };
  const auto maybe_pin = [&](int k, const PdhgIterate& value) {
    if (std::find(options.pinned.begin(), options.pinned.end(), k) !=
        options.pinned.end()) {
      trace.pinned.push_back({k, value});
    }
  };

  PdhgIterate current = z0;
  PdhgIterate previous_difference;
  keep(trace.iterates, 0, current);
  maybe_pin(0, current);

  for (int k = 0; k < options.max_iterations; ++k) {
    PdhgIterate next = ApplyT(problem, current);
    if (!next.AllFinite()) throw NonFiniteIterate(k + 1);
    PdhgIterate difference = current - next;

    IterationScalars scalars;
    scalars.norm_dx = difference.x.norm();
    scalars.norm_dy = difference.y.norm();
    scalars.residual_m = metric.Norm(difference);
    scalars.norm_z = current.Norm();
    trace.scalars.push_back(scalars);

    keep(trace.differences, k, difference);
    keep(trace.iterates, k + 1, next);
    maybe_pin(k + 1, next);
    trace.iterations = k + 1;

    bool stop = false;
    if (scalars.residual_m <= options.residual_tol) {
      trace.stop_reason = StopReason::kResidualTolerance;
      stop = true;
    } else if (options.stop_when) {
      StepInfo info;
      info.k = k;
      info.next = &next;
      info.difference = &difference;
      info.previous_difference = k > 0 ? &previous_difference : nullptr;
      info.residual_m = scalars.residual_m;
      if (options.stop_when(info)) {
        trace.stop_reason = StopReason::kStopPredicate;
        stop = true;
      }
    }
    previous_difference = std::move(difference);
    current = std::move(next);
    if (stop) break;
  }
  trace.final_iterate = std::move(current);
  return trace;
}

}  // namespace pdhg
