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

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "qmlab/hilbert.hpp"
#include "qmlab/states.hpp"

namespace qmlab {

/// Hermitian operator with its spectral decomposition cached.
///
/// Eigenvalues closer than 1e-8 * max|f| + 1e-12 are treated as one outcome;
/// `spectrum()` lists the distinct outcomes in ascending order and
/// `projectors()[n]` is the orthogonal projector onto outcome n.
class Observable {
 public:
  explicit Observable(Matrix matrix);

  const Matrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return matrix_.rows(); }
  std::size_t outcome_count() const noexcept { return spectrum_.size(); }

  std::span<const double> spectrum() const noexcept { return spectrum_; }
  const std::vector<Matrix>& projectors() const noexcept { return projectors_; }
  std::span<const std::size_t> degeneracies() const noexcept { return degeneracies_; }
  const EigenDecomposition& eigen() const noexcept { return eigen_; }
  /// Eigenvector column indices belonging to outcome n.
  std::span<const std::size_t> eigenvector_indices(std::size_t n) const {
    return groups_.at(n);
  }

 private:
  Matrix matrix_;
  EigenDecomposition eigen_;
  std::vector<double> spectrum_;
  std::vector<Matrix> projectors_;
  std::vector<std::size_t> degeneracies_;
  std::vector<std::vector<std::size_t>> groups_;
};

/// Absolute tolerance below which two eigenvalues count as degenerate.
double degeneracy_tolerance(std::span<const double> eigenvalues);

/// Spin-j operators (hbar = 1) in the basis m = j, j-1, ..., -j.
struct SpinSystem {
  double j;
  Observable jx;
  Observable jy;
  Observable jz;

  std::size_t dim() const noexcept { return jz.dim(); }
  /// n . J for a (not necessarily unit) direction n.
  Matrix along(const std::array<double, 3>& n) const;
  /// |j, m> as a basis state.
  PureState state(double m) const;
};

/// Throws Error(kValidation) unless 2j is a non-negative integer.
SpinSystem make_spin(double j);

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

/// op acting on `site` of `sites` factors of dimension op.rows(); identity elsewhere.
Matrix embed(const Matrix& op, std::size_t site, std::size_t sites);

/// Spin-1/2 state pointing along (theta, phi): (e^{-i phi/2} cos(theta/2), e^{i phi/2} sin(theta/2)).
PureState spin_toward(double theta, double phi);

/// <psi|F^N|psi> = sum_n f_n^N <psi|Pi_n|psi>.
double moment(const PureState& psi, const Observable& f, int power);

/// <psi|Pi_n|psi> for the n-th distinct outcome of F.
double projector_frequency(const PureState& psi, const Observable& f, std::size_t n);

/// All projector frequencies, in spectrum order.
std::vector<double> projector_frequencies(const PureState& psi, const Observable& f);

}  // namespace qmlab
