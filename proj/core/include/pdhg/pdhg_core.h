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

#ifndef PDHG_PDHG_CORE_H_
#define PDHG_PDHG_CORE_H_

#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pdhg/linalg.h"

// The abstract primal-dual hybrid gradient engine for
//
//   min_x max_y  f(x) - g*(y) + <y, A x>
//
// with the update
//
//   x+ = prox_{sigma f}(x - sigma A^T y)
//   y+ = prox_{tau g*}(y + tau A (2 x+ - x)).
//
// Problem front-ends (qp.h, conic_standard.h) supply the two prox oracles.
namespace pdhg {

// (step, point) -> prox_{step * h}(point). Oracles must be re-entrant.
using ProxOracle = std::function<Vector(double step, const Vector& point)>;

class StepSizeTooLarge : public Error {
 public:
  explicit StepSizeTooLarge(double product);
  // sigma * tau * ||A||^2 as measured.
  double product() const { return product_; }

 private:
  double product_;
};

class NonFiniteIterate : public Error {
 public:
  explicit NonFiniteIterate(int iteration);
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

// A primal-dual pair z = (x, y).
struct PdhgIterate {
  Vector x;
  Vector y;

  static PdhgIterate Zero(int dim_x, int dim_y);

  PdhgIterate& operator+=(const PdhgIterate& other);
  PdhgIterate& operator-=(const PdhgIterate& other);
  PdhgIterate& operator*=(double alpha);
  bool AllFinite() const;
  // Euclidean norm of the stacked vector (x, y).
  double Norm() const;
};

PdhgIterate operator+(PdhgIterate a, const PdhgIterate& b);
PdhgIterate operator-(PdhgIterate a, const PdhgIterate& b);
PdhgIterate operator*(double alpha, PdhgIterate a);

class SaddleProblem {
 public:
  // Caches an estimate of ||A||. Missing step sizes default to 0.9 / ||A||
  // (1 when A is zero); if exactly one is given, the other is chosen so that
  // sigma * tau * ||A||^2 = 0.81. Steps are not validated here; see
  // ValidateSteps.
  SaddleProblem(Matrix a, ProxOracle prox_f, ProxOracle prox_gstar,
                std::optional<double> sigma = std::nullopt,
                std::optional<double> tau = std::nullopt);

  int dim_x() const { return static_cast<int>(a_->cols()); }
  int dim_y() const { return static_cast<int>(a_->rows()); }
  const Matrix& a() const { return *a_; }
  const std::shared_ptr<const Matrix>& shared_a() const { return a_; }
  double sigma() const { return sigma_; }
  double tau() const { return tau_; }
  double norm_a() const { return norm_a_; }

  Vector ProxF(const Vector& point) const { return prox_f_(sigma_, point); }
  Vector ProxGStar(const Vector& point) const {
    return prox_gstar_(tau_, point);
  }

 private:
  std::shared_ptr<const Matrix> a_;
  ProxOracle prox_f_;
  ProxOracle prox_gstar_;
  double norm_a_;
  double sigma_;
  double tau_;
};

// M = [[Id/sigma, -A^T], [-A, Id/tau]], the metric in which the PDHG operator
// is firmly nonexpansive.
class MetricM {
 public:
  MetricM(double sigma, double tau, std::shared_ptr<const Matrix> a,
          double norm_a);

  double sigma() const { return sigma_; }
  double tau() const { return tau_; }
  const Matrix& a() const { return *a_; }

  // M u.
  PdhgIterate Apply(const PdhgIterate& u) const;
  // <u, M w> = <u_x, w_x>/sigma - <u_x, A^T w_y> - <u_y, A w_x> + <u_y, w_y>/tau.
  double Inner(const PdhgIterate& u, const PdhgIterate& w) const;
  double Norm(const PdhgIterate& u) const;
  // Strong monotonicity constant min(1/sigma, 1/tau) (1 - sqrt(sigma tau) ||A||).
  double Modulus() const;

 private:
  double sigma_;
  double tau_;
  std::shared_ptr<const Matrix> a_;
  double norm_a_;
};

// Checks sigma, tau > 0 and sigma * tau * ||A||^2 < 1 and returns the metric.
// Throws InvalidArgument or StepSizeTooLarge.
MetricM ValidateSteps(const SaddleProblem& problem);

// One PDHG step z -> T z. Throws DimensionMismatch.
PdhgIterate ApplyT(const SaddleProblem& problem, const PdhgIterate& z);

// v + T z.
PdhgIterate ApplyShiftedT(const SaddleProblem& problem, const PdhgIterate& v,
                          const PdhgIterate& z);

// What the iteration loop exposes to a custom stopping rule after computing
// z_{k+1}.
struct StepInfo {
  int k = 0;
  const PdhgIterate* next = nullptr;
  // z_k - z_{k+1}.
  const PdhgIterate* difference = nullptr;
  // z_{k-1} - z_k, null at k = 0.
  const PdhgIterate* previous_difference = nullptr;
  double residual_m = 0.0;
};

struct IterateOptions {
  int max_iterations = 100000;
  // Stop once ||z_k - z_{k+1}||_M <= residual_tol.
  double residual_tol = 1e-9;
  // Number of trailing iterates (and differences) kept in the trace.
  int trace_depth = 64;
  // Iterate indices kept regardless of trace_depth.
  std::vector<int> pinned;
  // Optional extra stopping rule.
  std::function<bool(const StepInfo&)> stop_when;
};

struct IterationScalars {
  double norm_dx = 0.0;  // ||x_k - x_{k+1}||
  double norm_dy = 0.0;  // ||y_k - y_{k+1}||
  double residual_m = 0.0;  // ||z_k - z_{k+1}||_M
  double norm_z = 0.0;  // ||z_k||
};

struct IndexedIterate {
  int k = 0;
  PdhgIterate z;
};

enum class StopReason { kMaxIterations, kResidualTolerance, kStopPredicate };

std::string ToString(StopReason reason);

struct IterateTrace {
  double sigma = 0.0;
  double tau = 0.0;
  PdhgIterate initial;
  // z_K where K == iterations.
  PdhgIterate final_iterate;
  int iterations = 0;
  StopReason stop_reason = StopReason::kMaxIterations;
  // scalars[k] describes the step z_k -> z_{k+1}.
  std::vector<IterationScalars> scalars;
  // Trailing iterates z_k, oldest first.
  std::deque<IndexedIterate> iterates;
  // Trailing differences z_k - z_{k+1} (indexed by k), oldest first.
  std::deque<IndexedIterate> differences;
  std::vector<IndexedIterate> pinned;

  const IterationScalars& last_scalars() const { return scalars.back(); }
};

// Runs z_{k+1} = T z_k from z0. Throws NonFiniteIterate, InvalidArgument
// (max_iterations < 1), or the errors of ValidateSteps.
IterateTrace Iterate(const SaddleProblem& problem, const PdhgIterate& z0,
                     const IterateOptions& options = {});

}  // namespace pdhg

#endif  // PDHG_PDHG_CORE_H_
