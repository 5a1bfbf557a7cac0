// Copyright 2026 The qmlab Authors
//
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qmlab {

/// Failure categories raised by the library. The CLI maps every kind except
/// kConfig onto the "numerical" exit code.
enum class ErrorKind {
  kShape,              // dimension mismatch
  kValidation,         // input violates a type invariant (Hermiticity, norm, ...)
  kRank,               // singular or near-singular linear system
  kDegeneracy,         // repeated moment nodes
  kConvention,         // zero node under the N = 1..D moment convention
  kConditioning,       // ill-conditioned moment system or negative frequencies
  kImpossibleOutcome,  // reduction onto a zero-weight branch
  kIncompatible,       // joint measurement of non-commuting observables
  kPlacement,          // wave packet too close to the grid boundary
  kGuard,              // time-step guard violated
  kInstability,        // norm drift during propagation
  kInconclusive,       // scattering run did not clear the barrier
  kConfig,             // bad experiment configuration
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qmlab
