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

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pdhg/conic_standard.h"
#include "pdhg/ellipsoid_separation.h"
#include "pdhg/qp.h"
#include "pdhg_io/problem_io.h"
#include "pdhg_io/results.h"
#include "pdhg_io/scenarios.h"
#include "spdlog/sinks/stdout_color_sinks.h"
#include "spdlog/spdlog.h"

namespace {

namespace io = pdhg::io;

constexpr int kExitConsistent = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitInconclusive = 3;

struct RunConfig {
  std::string mode;
  std::string input;
  std::optional<double> sigma;
  std::optional<double> tau;
  int max_iter = 100000;
  double residual_tol = 1e-9;
  double cert_tol = 1e-6;
  std::uint64_t seed = 0;
  std::string trace;
  std::string out;
};

void AddRunFlags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--sigma", cfg.sigma, "Primal step size")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tau", cfg.tau, "Dual step size")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", cfg.max_iter, "Iteration limit")
      ->check(CLI::Range(1, 1 << 30));
  cmd->add_option("--tol", cfg.residual_tol,
                  "Fixed-point residual tolerance (M-norm)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--cert-tol", cfg.cert_tol,
                  "Norm above which a displacement block counts as nonzero")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", cfg.seed, "Seed for randomized checks");
  cmd->add_option("--trace", cfg.trace, "Write a per-iteration CSV trace");
  cmd->add_option("--out", cfg.out,
                  "Write the result document here (default: stdout)");
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

void Emit(const RunConfig& cfg, const io::Json& doc) {
  const std::string text = io::DumpJson(doc);
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    io::WriteFile(cfg.out, text);
  }
}

pdhg::ClassifyThresholds Thresholds(const RunConfig& cfg) {
  pdhg::ClassifyThresholds t;
  t.cert_tol = cfg.cert_tol;
  t.residual_tol = cfg.residual_tol;
  return t;
}

int ExitFor(pdhg::VerdictStatus status) {
  switch (status) {
    case pdhg::VerdictStatus::kConsistentCandidate:
      return kExitConsistent;
    case pdhg::VerdictStatus::kPrimalInfeasible:
    case pdhg::VerdictStatus::kDualInfeasible:
    case pdhg::VerdictStatus::kBothInfeasible:
      return kExitInfeasible;
    case pdhg::VerdictStatus::kInconclusive:
      return kExitInconclusive;
  }
  return kExitError;
}

int RunSeparate(const RunConfig& cfg) {
  const pdhg::SeparationInstance inst =
      io::ParseInstance(io::ReadFile(cfg.input));
  pdhg::SeparationOptions opts;
  opts.solve.sigma = cfg.sigma;
  opts.solve.tau = cfg.tau;
  opts.solve.max_iterations = cfg.max_iter;
  opts.solve.residual_tol = cfg.residual_tol;
  opts.solve.seed = cfg.seed;
  opts.solve.thresholds = Thresholds(cfg);
  opts.solve.certificates.cert_tol = cfg.cert_tol;
  const auto start = std::chrono::steady_clock::now();
  const pdhg::SeparationOutcome outcome = pdhg::Separate(inst, opts);
  const double wall = Seconds(start);
  spdlog::info("separate: {} after {} iterations",
               pdhg::ToString(outcome.status), outcome.solve.trace.iterations);
  if (!cfg.trace.empty()) {
    io::WriteFile(cfg.trace, io::IterationCsv(outcome.solve.trace));
  }
  Emit(cfg, io::SeparationDocument(outcome, wall));
  switch (outcome.status) {
    case pdhg::SeparationStatus::kCommonPoint:
      return kExitConsistent;
    case pdhg::SeparationStatus::kSeparator:
      return kExitInfeasible;
    case pdhg::SeparationStatus::kInconclusive:
      return kExitInconclusive;
  }
  return kExitError;
}

int RunSolve(const RunConfig& cfg) {
  if (cfg.mode == "ellipsoid") return RunSeparate(cfg);
  const io::ProblemFile file = io::ParseProblem(io::ReadFile(cfg.input));
  if (!cfg.mode.empty() && cfg.mode != io::ToString(file.mode)) {
    throw io::ParseError("file declares mode '" + io::ToString(file.mode) +
                             "' but --mode is '" + cfg.mode + "'",
                         0, 0, "mode");
  }
  pdhg::IterateOptions it;
  it.max_iterations = cfg.max_iter;
  it.residual_tol = cfg.residual_tol;
  const auto start = std::chrono::steady_clock::now();
  if (file.mode == io::ProblemMode::kQp) {
    const pdhg::QpProblem& qp = *file.qp;
    pdhg::QpSolveOptions opts;
    opts.sigma = cfg.sigma;
    opts.tau = cfg.tau;
    opts.iterate = it;
    opts.thresholds = Thresholds(cfg);
    opts.certificates.cert_tol = cfg.cert_tol;
    const pdhg::QpSolveResult result =
        pdhg::SolveQp(qp, pdhg::PdhgIterate::Zero(qp.n(), qp.m()), opts);
    const double wall = Seconds(start);
    spdlog::info("solve: {} after {} iterations",
                 pdhg::ToString(result.verdict.status),
                 result.trace.iterations);
    if (!cfg.trace.empty()) {
      io::WriteFile(cfg.trace, io::IterationCsv(result.trace));
    }
    Emit(cfg, io::QpResultDocument(result, wall));
    return ExitFor(result.verdict.status);
  }
  const pdhg::ConicPrimalProblem& cp = *file.conic;
  pdhg::ConicSolveOptions opts;
  opts.sigma = cfg.sigma;
  opts.tau = cfg.tau;
  opts.max_iterations = cfg.max_iter;
  opts.residual_tol = cfg.residual_tol;
  opts.seed = cfg.seed;
  opts.thresholds = Thresholds(cfg);
  opts.certificates.cert_tol = cfg.cert_tol;
  pdhg::ConicSolveResult result;
  try {
    result = pdhg::SolveConicWithLimit(
        cp, pdhg::PdhgIterate::Zero(cp.n(), cp.m()), opts);
  } catch (const pdhg::IterationLimit& e) {
    spdlog::warn("{}", e.what());
    result = e.partial();
  }
  const double wall = Seconds(start);
  for (const auto& w : result.warnings) spdlog::warn("{}", w);
  if (!cfg.trace.empty()) {
    io::WriteFile(cfg.trace, io::IterationCsv(result.trace));
  }
  Emit(cfg, io::ConicResultDocument(result, wall));
  if (!result.converged) return kExitInconclusive;
  return ExitFor(result.verdict.status);
}

int RunReproduce(const std::string& name, const std::string& out_dir,
                 int long_run) {
  const std::optional<io::Scenario> found = io::FindScenario(name);
  if (!found) throw pdhg::InvalidArgument("unknown scenario '" + name + "'");
  const io::Scenario& sc = *found;
  std::filesystem::create_directories(out_dir);

  pdhg::IterateOptions it;
  it.max_iterations = long_run;
  it.residual_tol = 0.0;
  const pdhg::SaddleProblem problem = pdhg::BuildSaddle(sc.qp, sc.sigma, sc.tau);
  const pdhg::MetricM metric = pdhg::ValidateSteps(problem);
  const pdhg::IterateTrace trace = pdhg::Iterate(problem, sc.z0, it);
  const pdhg::DisplacementEstimate v =
      pdhg::EstimateDisplacementAuto(trace, metric);

  const auto rows = pdhg::ShiftedIterateExperiment(
      sc.qp, sc.sigma, sc.tau, sc.z0, v.AsIterate(), sc.trace_rows);
  const std::string trace_path = out_dir + "/" + name + "_trace.csv";
  io::WriteFile(trace_path, io::ShiftedIterateCsv(rows));

  const auto long_rows = pdhg::ShiftedIterateExperiment(
      sc.qp, sc.sigma, sc.tau, sc.z0, v.AsIterate(), long_run);
  auto combined = [](const pdhg::ShiftedIterateRow& r) {
    return std::hypot(r.shifted_resid_x, r.shifted_resid_y);
  };
  const auto& last = long_rows.back();
  const auto& tail_start = long_rows[long_rows.size() * 9 / 10];
  const double limit = combined(last);

  io::Json doc;
  doc["schema_version"] = io::kResultSchemaVersion;
  doc["kind"] = "reproduction";
  doc["scenario"] = name;
  doc["sigma"] = sc.sigma;
  doc["tau"] = sc.tau;
  doc["trace_file"] = name + "_trace.csv";
  doc["trace_rows"] = sc.trace_rows;
  doc["long_run_iterations"] = long_run;
  doc["displacement"] = io::ToJson(v);
  doc["static_identities"] = io::ToJson(pdhg::CheckStaticDisplacement(
      sc.qp, sc.sigma, sc.tau, v, 1e-8));
  io::Json certs = io::Json::array();
  try {
    for (const auto& c :
         pdhg::ExtractCertificates(sc.qp, sc.sigma, sc.tau, v)) {
      certs.push_back(io::ToJson(c));
    }
  } catch (const pdhg::CertificateValidationFailed& e) {
    doc["certificate_error"] = e.what();
  }
  doc["certificates"] = std::move(certs);
  doc["shifted_residual_limit"] = {
      {"x", last.shifted_resid_x},
      {"y", last.shifted_resid_y},
      {"norm", limit},
      {"relative_change_last_tenth",
       std::abs(limit - combined(tail_start)) / limit}};
  const std::string report_path = out_dir + "/" + name + "_report.json";
  io::WriteFile(report_path, io::DumpJson(doc));
  spdlog::info("reproduce: wrote {} and {}", trace_path, report_path);
  return kExitConsistent;
}

void ConfigureLogging() {
  auto logger = spdlog::stderr_color_mt("pdhg_diag");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("PDHG_DIAG_LOG")) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

}  // namespace

int main(int argc, char** argv) {
  ConfigureLogging();
  CLI::App app{"PDHG solver with infeasibility diagnostics"};
  app.require_subcommand(1);

  RunConfig solve_cfg;
  CLI::App* solve = app.add_subcommand("solve", "Solve a qp or conic problem");
  solve->add_option("--input", solve_cfg.input, "Problem file")
      ->required()
      ->check(CLI::ExistingFile);
  solve->add_option("--mode", solve_cfg.mode, "qp, conic or ellipsoid")
      ->check(CLI::IsMember({"qp", "conic", "ellipsoid"}));
  AddRunFlags(solve, solve_cfg);

  RunConfig sep_cfg;
  CLI::App* separate =
      app.add_subcommand("separate", "Separate two families of ellipsoids");
  separate->add_option("--input", sep_cfg.input, "Instance file")
      ->required()
      ->check(CLI::ExistingFile);
  AddRunFlags(separate, sep_cfg);

  std::string scenario;
  std::string out_dir = ".";
  int long_run = 10000;
  CLI::App* reproduce = app.add_subcommand(
      "reproduce", "Write trace tables for a built-in scenario");
  reproduce->add_option("name", scenario, "lp-example or qp-example")
      ->required()
      ->check(CLI::IsMember({"lp-example", "qp-example"}));
  reproduce->add_option("--out", out_dir, "Output directory");
  reproduce->add_option("--max-iter", long_run,
                        "Length of the long displacement run")
      ->check(CLI::Range(100, 1 << 30));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*solve) return RunSolve(solve_cfg);
    if (*separate) return RunSeparate(sep_cfg);
    if (*reproduce) return RunReproduce(scenario, out_dir, long_run);
  } catch (const io::ParseError& e) {
    if (!e.field().empty()) {
      spdlog::error("invalid input, field {}: {}", e.field(), e.what());
    } else {
      spdlog::error("invalid input: {}", e.what());
    }
    return kExitError;
  } catch (const pdhg::SingularShapeMatrix& e) {
    spdlog::error("ellipsoid {}: {}", e.index(), e.what());
    return kExitError;
  } catch (const pdhg::Error& e) {
    spdlog::error("{}", e.what());
    return kExitError;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitError;
  }
  return kExitError;
}
