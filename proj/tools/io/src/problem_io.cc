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

#include "pdhg_io/problem_io.h"

#include <cctype>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "pdhg_io/json_writer.h"

namespace pdhg::io {

ParseError::ParseError(const std::string& message, int line, int column,
                       std::string field)
    : Error(message), line_(line), column_(column), field_(std::move(field)) {}

std::string ToString(ProblemMode mode) {
  return mode == ProblemMode::kQp ? "qp" : "conic";
}

namespace {

[[noreturn]] void FieldError(const std::string& field,
                             const std::string& what) {
  throw ParseError("field '" + field + "': " + what, 0, 0, field);
}

Json ParseDocument(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    int line = 1;
    int column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte, text.size() + 1);
    for (std::size_t i = 0; i + 1 < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("syntax error at line " + std::to_string(line) +
                         ", column " + std::to_string(column) + ": " +
                         e.what(),
                     line, column, "");
  }
}

const Json& Require(const Json& obj, const std::string& key,
                    const std::string& path) {
  if (!obj.is_object()) FieldError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) FieldError(path + key, "missing");
  return *it;
}

double ReadNumber(const Json& j, const std::string& field) {
  if (!j.is_number()) FieldError(field, "expected a number");
  return j.get<double>();
}

int ReadCount(const Json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    FieldError(field, "expected a nonnegative integer");
  }
  return static_cast<int>(j.get<long long>());
}

Vector ReadVector(const Json& j, const std::string& field) {
  if (!j.is_array()) FieldError(field, "expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] =
        ReadNumber(j[i], field + "[" + std::to_string(i) + "]");
  }
  return v;
}

Matrix ReadMatrix(const Json& j, const std::string& field, int cols) {
  if (!j.is_array()) FieldError(field, "expected an array of rows");
  Matrix m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string row_field = field + "[" + std::to_string(r) + "]";
    const Json& row = j[r];
    if (!row.is_array()) FieldError(row_field, "expected an array");
    if (static_cast<int>(row.size()) != cols) {
      FieldError(row_field, "expected " + std::to_string(cols) +
                                " entries, found " +
                                std::to_string(row.size()));
    }
    for (int c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), c) =
          ReadNumber(row[c], row_field + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

Cone ReadCone(const Json& j, const std::string& field) {
  if (!j.is_array()) FieldError(field, "expected an array of cone blocks");
  std::vector<Cone> blocks;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string block = field + "[" + std::to_string(i) + "]";
    const Json& type = Require(j[i], "type", block + ".");
    if (!type.is_string()) FieldError(block + ".type", "expected a string");
    const int dim = ReadCount(Require(j[i], "dim", block + "."), block + ".dim");
    const std::string t = type.get<std::string>();
    if (t == "zero") {
      blocks.push_back(Cone::Zero(dim));
    } else if (t == "free") {
      blocks.push_back(Cone::Free(dim));
    } else if (t == "nonneg") {
      blocks.push_back(Cone::NonnegOrthant(dim));
    } else if (t == "nonpos") {
      blocks.push_back(Cone::NonposOrthant(dim));
    } else if (t == "soc") {
      if (dim < 1) FieldError(block + ".dim", "soc needs dim >= 1");
      blocks.push_back(Cone::SecondOrder(dim));
    } else {
      FieldError(block + ".type", "unknown cone type '" + t + "'");
    }
  }
  if (blocks.size() == 1) return blocks.front();
  return Cone::Product(std::move(blocks));
}

Json ConeToJson(const Cone& cone) {
  Json arr = Json::array();
  for (const Cone& leaf : cone.Leaves()) {
    std::string type;
    switch (leaf.kind()) {
      case Cone::Kind::kZero:
        type = "zero";
        break;
      case Cone::Kind::kFree:
        type = "free";
        break;
      case Cone::Kind::kNonnegOrthant:
        type = "nonneg";
        break;
      case Cone::Kind::kNonposOrthant:
        type = "nonpos";
        break;
      case Cone::Kind::kSecondOrder:
        type = "soc";
        break;
      default:
        throw InvalidArgument("cone " + leaf.DebugString() +
                              " has no file representation");
    }
    arr.push_back(Json{{"type", type}, {"dim", leaf.dim()}});
  }
  return arr;
}

void CheckCount(const Json& doc, const std::string& key, int actual) {
  auto it = doc.find(key);
  if (it == doc.end()) return;
  const int declared = ReadCount(*it, key);
  if (declared != actual) {
    FieldError(key, "declared " + std::to_string(declared) + " but data has " +
                        std::to_string(actual));
  }
}


// Position of the value at a field path such as "A[2][1]" or
// "side_one[0].center" in text that is already known to be valid JSON.
// Falls back to the deepest enclosing value that exists.
class FieldLocator {
 public:
  explicit FieldLocator(std::string_view text) : text_(text) {}

  std::size_t Find(const std::string& field) {
    std::vector<std::string> steps;
    std::string cur;
    for (char ch : field) {
      if (ch == '.' || ch == '[' || ch == ']') {
        if (!cur.empty()) steps.push_back(cur);
        cur.clear();
        if (ch == '[') cur = "#";
      } else {
        cur += ch;
      }
    }
    if (!cur.empty()) steps.push_back(cur);
    pos_ = 0;
    SkipSpace();
    return Descend(steps, 0);
  }

 private:
  std::size_t Descend(const std::vector<std::string>& steps, std::size_t i) {
    const std::size_t here = pos_;
    if (i == steps.size() || pos_ >= text_.size()) return here;
    const bool want_index = steps[i][0] == '#';
    if (text_[pos_] == '{' && !want_index) {
      ++pos_;
      SkipSpace();
      while (pos_ < text_.size() && text_[pos_] != '}') {
        const std::string key = ReadString();
        SkipSpace();
        ++pos_;  // ':'
        SkipSpace();
        if (key == steps[i]) return Descend(steps, i + 1);
        SkipValue();
        SkipSeparator();
      }
    } else if (text_[pos_] == '[' && want_index) {
      const long target = std::stol(steps[i].substr(1));
      ++pos_;
      SkipSpace();
      for (long k = 0; pos_ < text_.size() && text_[pos_] != ']'; ++k) {
        if (k == target) return Descend(steps, i + 1);
        SkipValue();
        SkipSeparator();
      }
    }
    return here;
  }

  void SkipSpace() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  void SkipSeparator() {
    SkipSpace();
    if (pos_ < text_.size() && text_[pos_] == ',') ++pos_;
    SkipSpace();
  }

  std::string ReadString() {
    std::string out;
    ++pos_;  // opening quote
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') out += text_[pos_++];
      out += text_[pos_++];
    }
    ++pos_;
    return out;
  }

  void SkipValue() {
    int depth = 0;
    while (pos_ < text_.size()) {
      const char ch = text_[pos_];
      if (ch == '"') {
        ReadString();
        if (depth == 0) return;
        continue;
      }
      if (ch == '{' || ch == '[') {
        ++depth;
      } else if (ch == '}' || ch == ']') {
        if (depth == 0) return;
        if (--depth == 0) {
          ++pos_;
          return;
        }
      } else if (ch == ',' && depth == 0) {
        return;
      }
      ++pos_;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::pair<int, int> LineColumn(std::string_view text, std::size_t offset) {
  int line = 1;
  int column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

// Fills in line and column of field errors raised while reading `text`.
template <typename Fn>
auto WithLocation(std::string_view text, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    if (e.line() != 0) throw;
    const auto [line, column] =
        LineColumn(text, FieldLocator(text).Find(e.field()));
    throw ParseError(std::string(e.what()) + " (line " +
                         std::to_string(line) + ", column " +
                         std::to_string(column) + ")",
                     line, column, e.field());
  }
}

ProblemFile ParseProblemFields(std::string_view text) {
  const Json doc = ParseDocument(text);
  if (!doc.is_object()) FieldError("", "top level must be an object");
  const Json& mode_j = Require(doc, "mode", "");
  if (!mode_j.is_string()) FieldError("mode", "expected a string");
  const std::string mode = mode_j.get<std::string>();
  if (mode != "qp" && mode != "conic") {
    FieldError("mode", "expected 'qp' or 'conic', found '" + mode + "'");
  }
  Vector c = ReadVector(Require(doc, "c", ""), "c");
  Vector b = ReadVector(Require(doc, "b", ""), "b");
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(b.size());
  CheckCount(doc, "n", n);
  CheckCount(doc, "m", m);
  Matrix a = ReadMatrix(Require(doc, "A", ""), "A", n);
  if (a.rows() != m) {
    FieldError("A", "expected " + std::to_string(m) + " rows, found " +
                        std::to_string(a.rows()));
  }
  ProblemFile out;
  if (mode == "qp") {
    out.mode = ProblemMode::kQp;
    Matrix h = Matrix::Zero(n, n);
    if (auto it = doc.find("H"); it != doc.end()) {
      h = ReadMatrix(*it, "H", n);
      if (h.rows() != n) FieldError("H", "expected " + std::to_string(n) +
                                             " rows");
    }
    Cone cone = Cone::NonposOrthant(m);
    if (auto it = doc.find("cone"); it != doc.end()) {
      cone = ReadCone(*it, "cone");
    }
    if (cone.dim() != m) {
      FieldError("cone", "total dimension " + std::to_string(cone.dim()) +
                             " does not match m = " + std::to_string(m));
    }
    out.qp = QpProblem{std::move(h), std::move(c), std::move(a), std::move(b),
                       std::move(cone)};
  } else {
    out.mode = ProblemMode::kConic;
    if (doc.contains("H")) FieldError("H", "not allowed in conic mode");
    Cone cone = Cone::NonnegOrthant(n);
    if (auto it = doc.find("cone"); it != doc.end()) {
      cone = ReadCone(*it, "cone");
    }
    if (cone.dim() != n) {
      FieldError("cone", "total dimension " + std::to_string(cone.dim()) +
                             " does not match n = " + std::to_string(n));
    }
    ConicPrimalProblem cp;
    cp.cone = std::move(cone);
    cp.a = std::move(a);
    cp.b = std::move(b);
    cp.c = std::move(c);
    out.conic = std::move(cp);
  }
  return out;
}

SeparationInstance ParseInstanceFields(std::string_view text) {
  const Json doc = ParseDocument(text);
  if (!doc.is_object()) FieldError("", "top level must be an object");
  SeparationInstance inst;
  inst.dimension = ReadCount(Require(doc, "dimension", ""), "dimension");
  if (inst.dimension < 1) FieldError("dimension", "must be positive");
  for (const char* side : {"side_one", "side_two"}) {
    const Json& arr = Require(doc, side, "");
    if (!arr.is_array()) FieldError(side, "expected an array of ellipsoids");
    std::vector<Ellipsoid>& out =
        std::string(side) == "side_one" ? inst.side_one : inst.side_two;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path =
          std::string(side) + "[" + std::to_string(i) + "]";
      Ellipsoid e;
      e.center = ReadVector(Require(arr[i], "center", path + "."),
                            path + ".center");
      if (e.center.size() != inst.dimension) {
        FieldError(path + ".center",
                   "expected " + std::to_string(inst.dimension) + " entries");
      }
      e.shape = ReadMatrix(Require(arr[i], "shape", path + "."),
                           path + ".shape", inst.dimension);
      if (e.shape.rows() != inst.dimension) {
        FieldError(path + ".shape",
                   "expected " + std::to_string(inst.dimension) + " rows");
      }
      out.push_back(std::move(e));
    }
  }
  return inst;
}

}  // namespace

ProblemFile ParseProblem(std::string_view text) {
  return WithLocation(text, [&] { return ParseProblemFields(text); });
}

SeparationInstance ParseInstance(std::string_view text) {
  return WithLocation(text, [&] { return ParseInstanceFields(text); });
}

std::string SerializeProblem(const QpProblem& qp) {
  Json doc;
  doc["mode"] = "qp";
  doc["n"] = qp.n();
  doc["m"] = qp.m();
  doc["H"] = ToJson(qp.h);
  doc["c"] = ToJson(qp.c);
  doc["A"] = ToJson(qp.a);
  doc["b"] = ToJson(qp.b);
  doc["cone"] = ConeToJson(qp.cone);
  return DumpJson(doc);
}

std::string SerializeProblem(const ConicPrimalProblem& cp) {
  Json doc;
  doc["mode"] = "conic";
  doc["n"] = cp.n();
  doc["m"] = cp.m();
  doc["c"] = ToJson(cp.c);
  doc["A"] = ToJson(cp.a);
  doc["b"] = ToJson(cp.b);
  doc["cone"] = ConeToJson(cp.cone);
  return DumpJson(doc);
}

std::string SerializeInstance(const SeparationInstance& inst) {
  Json doc;
  doc["dimension"] = inst.dimension;
  for (const char* side : {"side_one", "side_two"}) {
    const auto& list =
        std::string(side) == "side_one" ? inst.side_one : inst.side_two;
    Json arr = Json::array();
    for (const Ellipsoid& e : list) {
      arr.push_back(Json{{"center", ToJson(e.center)},
                         {"shape", ToJson(e.shape)}});
    }
    doc[side] = std::move(arr);
  }
  return DumpJson(doc);
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace pdhg::io
