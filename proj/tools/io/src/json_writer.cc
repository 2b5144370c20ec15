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

#include "pdhg_io/json_writer.h"

#include <cmath>
#include <cstdio>

namespace pdhg::io {

namespace {

void Emit(const Json& j, int indent, int depth, std::string& out) {
  const bool compact = indent < 0;
  const int step = compact ? 0 : indent;
  const std::string pad(static_cast<std::size_t>(step * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(step * depth), ' ');
  const char* open_nl = compact ? "" : "\n";
  const char* sep = compact ? "," : ",\n";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += open_nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += sep;
        first = false;
        out += pad;
        out += Json(it.key()).dump();
        out += compact ? ":" : ": ";
        Emit(it.value(), indent, depth + 1, out);
      }
      out += open_nl + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool scalars = true;
      for (const auto& e : j) {
        if (e.is_structured()) scalars = false;
      }
      if (scalars) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i > 0) out += compact ? "," : ", ";
          Emit(j[i], indent, depth + 1, out);
        }
        out += "]";
        return;
      }
      out += "[";
      out += open_nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out += sep;
        out += pad;
        Emit(j[i], indent, depth + 1, out);
      }
      out += open_nl + close_pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? FormatDouble(v) : "null";
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string DumpJson(const Json& doc, int indent) {
  std::string out;
  Emit(doc, indent, 0, out);
  out += "\n";
  return out;
}

Json ToJson(const Vector& v) {
  Json arr = Json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Json ToJson(const Matrix& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace pdhg::io
