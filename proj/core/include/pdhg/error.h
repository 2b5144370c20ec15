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

#ifndef PDHG_ERROR_H_
#define PDHG_ERROR_H_

#include <stdexcept>
#include <string>

namespace pdhg {

// Base class for every error raised by the library. Each subclass names one
// failed contract so callers can branch on the type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes disagree (matrix-vector, cone-vector, iterate blocks).
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Input violates a documented precondition (negative tolerance, empty data,
// non-symmetric matrix, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace pdhg

#endif  // PDHG_ERROR_H_
