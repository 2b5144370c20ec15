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

#ifndef PDHG_IO_JSON_WRITER_H_
#define PDHG_IO_JSON_WRITER_H_

#include <string>

#include "json.hpp"
#include "pdhg/linalg.h"

namespace pdhg::io {

using Json = nlohmann::ordered_json;

// Pretty-prints `doc` with every floating-point number written as %.17g, so
// that parsing the output reproduces each double bit for bit. Non-finite
// numbers become null. A negative indent gives a single line.
std::string DumpJson(const Json& doc, int indent = 2);

// %.17g.
std::string FormatDouble(double value);

Json ToJson(const Vector& v);
Json ToJson(const Matrix& m);

}  // namespace pdhg::io

#endif  // PDHG_IO_JSON_WRITER_H_
