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

#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"
#include "qmlab/hilbert.hpp"

namespace qmlab {

/// Normalized amplitude vector over an orthonormal basis. Construction
/// validates sum |c_n|^2 = 1 to 1e-10; use PureState::normalized to build one
/// from unnormalized amplitudes.
class PureState {
 public:
  explicit PureState(std::vector<Complex> amplitudes);

  static PureState normalized(std::vector<Complex> amplitudes);
  static PureState basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

 private:
  std::vector<Complex> amplitudes_;
};

/// Hermitian, unit-trace, positive semidefinite matrix (each to 1e-10).
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix rho);

  std::size_t dim() const noexcept { return rho_.rows(); }
  const Matrix& matrix() const noexcept { return rho_; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return rho_(r, c); }

 private:
  Matrix rho_;
};

/// Amplitudes c_{n,alpha} of a state on H_A (x) H_B, stored with the A index
/// as the row so that the flattened vector matches kron ordering.
class BipartiteState {
 public:
  explicit BipartiteState(Matrix amplitudes);

  /// Reshapes a dim_a * dim_b vector; dim_a is the slow index.
  static BipartiteState from_vector(const PureState& psi, std::size_t dim_a);

  std::size_t dim_a() const noexcept { return c_.rows(); }
  std::size_t dim_b() const noexcept { return c_.cols(); }
  const Matrix& amplitudes() const noexcept { return c_; }
  PureState flatten() const;

 private:
  Matrix c_;
};

DensityMatrix to_density(const PureState& psi);

/// Reduced density matrix of subsystem A: rho_nm = sum_alpha c_{n,alpha} c*_{m,alpha}.
DensityMatrix partial_trace(const BipartiteState& psi);

/// Tr(G rho). G must be Hermitian (1e-10) and match rho's dimension; the
/// imaginary part of the trace must stay below 1e-10.
double expectation(const DensityMatrix& rho, const Matrix& g);

/// <psi|G|psi> evaluated directly on the amplitudes.
double expectation(const PureState& psi, const Matrix& g);

/// Tr(rho^2).
double purity(const DensityMatrix& rho);

/// Minimum eigenvalue of the Hermitian part of rho.
double min_eigenvalue(const DensityMatrix& rho);

/// States travel as JSON arrays of [re, im] pairs.
nlohmann::json to_json(const PureState& psi);
PureState pure_state_from_json(const nlohmann::json& j, bool normalize = false);

}  // namespace qmlab
