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

#include <random>

#include "benchmark/benchmark.h"
#include "pdhg/cones.h"
#include "pdhg/ellipsoid_separation.h"
#include "pdhg/linalg.h"
#include "pdhg/pdhg_core.h"
#include "pdhg/qp.h"

namespace pdhg {
namespace {

Vector Gaussian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

Matrix GaussianMatrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix a(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) a(i, j) = normal(rng);
  }
  return a;
}

void BM_ApplyTLp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  const QpProblem qp = MakeInequalityQp(Matrix(), Gaussian(n, rng),
                                        GaussianMatrix(2 * n, n, rng),
                                        Gaussian(2 * n, rng));
  const SaddleProblem p = BuildSaddle(qp);
  PdhgIterate z{Gaussian(n, rng), Gaussian(2 * n, rng)};
  for (auto _ : state) {
    z = ApplyT(p, z);
    benchmark::DoNotOptimize(z.x.data());
  }
}
BENCHMARK(BM_ApplyTLp)->Arg(10)->Arg(100)->Arg(400);

void BM_ApplyTQp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  const Matrix l = GaussianMatrix(n, n, rng);
  const QpProblem qp = MakeInequalityQp(l * l.transpose(), Gaussian(n, rng),
                                        GaussianMatrix(2 * n, n, rng),
                                        Gaussian(2 * n, rng));
  const SaddleProblem p = BuildSaddle(qp);
  PdhgIterate z{Gaussian(n, rng), Gaussian(2 * n, rng)};
  for (auto _ : state) {
    z = ApplyT(p, z);
    benchmark::DoNotOptimize(z.x.data());
  }
}
BENCHMARK(BM_ApplyTQp)->Arg(10)->Arg(100)->Arg(400);

void BM_ProjectSecondOrder(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  const Cone k = Cone::SecondOrder(n);
  const Vector z = Gaussian(n, rng);
  for (auto _ : state) {
    Vector p = Project(k, z);
    benchmark::DoNotOptimize(p.data());
  }
}
BENCHMARK(BM_ProjectSecondOrder)->Arg(3)->Arg(64)->Arg(1024);

void BM_OperatorNorm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(4);
  const Matrix a = GaussianMatrix(n, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(OperatorNormEstimate(a));
}
BENCHMARK(BM_OperatorNorm)->Arg(50)->Arg(200);

void BM_SeparateDisks(benchmark::State& state) {
  const double offset = state.range(0) == 0 ? 0.5 : 3.0;
  SeparationInstance inst;
  inst.dimension = 2;
  Vector left(2);
  left << -offset, 0.0;
  inst.side_one.push_back({Matrix::Identity(2, 2), left});
  inst.side_two.push_back({Matrix::Identity(2, 2), Vector(-left)});
  for (auto _ : state) {
    SeparationOutcome out = Separate(inst);
    benchmark::DoNotOptimize(out.status);
  }
}
BENCHMARK(BM_SeparateDisks)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace pdhg

BENCHMARK_MAIN();
