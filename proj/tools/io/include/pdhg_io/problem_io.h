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

#ifndef PDHG_IO_PROBLEM_IO_H_
#define PDHG_IO_PROBLEM_IO_H_

#include <optional>
#include <string>
#include <string_view>

#include "pdhg/ellipsoid_separation.h"
#include "pdhg/problems.h"

// Text formats (JSON syntax).
//
// Problem file:
//   {"mode": "qp" | "conic", "n": 2, "m": 4,
//    "H": [[...], ...],            (qp only; omitted means zero)
//    "c": [...], "A": [[...], ...], "b": [...],
//    "cone": [{"type": "nonpos", "dim": 4}, ...]}
// Cone block types: zero, free, nonneg, nonpos, soc. Blocks are listed in
// y-order for qp and x-order for conic. Omitting "cone" means nonpos (qp) or
// nonneg (conic) over the whole space.
//
// Ellipsoid instance file:
//   {"dimension": 2,
//    "side_one": [{"center": [...], "shape": [[...], ...]}, ...],
//    "side_two": [...]}
namespace pdhg::io {

// Malformed input. `line` and `column` are 1-based and 0 when unknown;
// `field` is a path such as "A[2][1]".
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column,
             std::string field);
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  int column_;
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

enum class ProblemMode { kQp, kConic };

std::string ToString(ProblemMode mode);

struct ProblemFile {
  ProblemMode mode = ProblemMode::kQp;
  std::optional<QpProblem> qp;
  std::optional<ConicPrimalProblem> conic;
};

ProblemFile ParseProblem(std::string_view text);
SeparationInstance ParseInstance(std::string_view text);

std::string SerializeProblem(const QpProblem& qp);
std::string SerializeProblem(const ConicPrimalProblem& cp);
std::string SerializeInstance(const SeparationInstance& inst);

// Throws IoError.
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

}  // namespace pdhg::io

#endif  // PDHG_IO_PROBLEM_IO_H_
