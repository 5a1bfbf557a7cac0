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

#include "qmlab/observables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qmlab {

double degeneracy_tolerance(std::span<const double> eigenvalues) {
  double largest = 0.0;
  for (double f : eigenvalues) largest = std::max(largest, std::abs(f));
  return 1e-8 * largest + 1e-12;
}

Observable::Observable(Matrix matrix)
    : matrix_(std::move(matrix)), eigen_(hermitian_eig(matrix_)) {
  const auto& values = eigen_.eigenvalues;
  const double gap = degeneracy_tolerance(values);
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k == 0 || values[k] - values[k - 1] > gap) groups_.emplace_back();
    groups_.back().push_back(k);
  }
  const std::size_t n = dim();
  for (const auto& group : groups_) {
    double sum = 0.0;
    Matrix proj(n, n);
    for (std::size_t k : group) {
      sum += values[k];
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
          proj(r, c) += eigen_.eigenvectors(r, k) * std::conj(eigen_.eigenvectors(c, k));
    }
    spectrum_.push_back(sum / static_cast<double>(group.size()));
    degeneracies_.push_back(group.size());
    projectors_.push_back(std::move(proj));
  }
}

Matrix SpinSystem::along(const std::array<double, 3>& n) const {
  return jx.matrix() * Complex(n[0]) + jy.matrix() * Complex(n[1]) +
         jz.matrix() * Complex(n[2]);
}

PureState SpinSystem::state(double m) const {
  const double k = j - m;
  const auto index = static_cast<long>(std::lround(k));
  if (std::abs(k - static_cast<double>(index)) > 1e-12 || index < 0 ||
      static_cast<std::size_t>(index) >= dim()) {
    std::ostringstream os;
    os << "m = " << m << " is not a valid projection for j = " << j;
    throw Error(ErrorKind::kValidation, os.str());
  }
  return PureState::basis(dim(), static_cast<std::size_t>(index));
}

SpinSystem make_spin(double j) {
  const double twice = 2.0 * j;
  if (!std::isfinite(j) || j < 0.0 || std::abs(twice - std::round(twice)) > 1e-12) {
    std::ostringstream os;
    os << "spin j = " << j << " is not a non-negative half-integer";
    throw Error(ErrorKind::kValidation, os.str());
  }
  const auto n = static_cast<std::size_t>(std::lround(twice)) + 1;
  Matrix raise(n, n);
  Matrix jz(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double m = j - static_cast<double>(k);
    jz(k, k) = m;
    // <j, m+1 | J+ | j, m> sits one row above the column of |j, m>.
    if (k > 0) raise(k - 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  const Matrix lower = dagger(raise);
  Matrix jx = (raise + lower) * Complex(0.5);
  Matrix jy = (raise - lower) * Complex(0.0, -0.5);
  return SpinSystem{j, Observable(std::move(jx)), Observable(std::move(jy)),
                    Observable(std::move(jz))};
}

Matrix pauli_x() { return Matrix{{0.0, 1.0}, {1.0, 0.0}}; }
Matrix pauli_y() { return Matrix{{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}}; }
Matrix pauli_z() { return Matrix{{1.0, 0.0}, {0.0, -1.0}}; }

Matrix embed(const Matrix& op, std::size_t site, std::size_t sites) {
  if (site >= sites) throw Error(ErrorKind::kShape, "site index out of range");
  const Matrix id = Matrix::identity(op.rows());
  Matrix out = site == 0 ? op : id;
  for (std::size_t s = 1; s < sites; ++s) out = kron(out, s == site ? op : id);
  return out;
}

PureState spin_toward(double theta, double phi) {
  const Complex up = std::polar(std::cos(theta / 2.0), -phi / 2.0);
  const Complex down = std::polar(std::sin(theta / 2.0), phi / 2.0);
  return PureState::normalized({up, down});
}

namespace {

void require_dim(const PureState& psi, const Observable& f) {
  if (psi.dim() != f.dim()) {
    throw Error(ErrorKind::kShape, "state dimension " + std::to_string(psi.dim()) +
                                       " vs observable dimension " + std::to_string(f.dim()));
  }
}

double branch_weight(const PureState& psi, const Observable& f, std::size_t n) {
  double w = 0.0;
  for (std::size_t k : f.eigenvector_indices(n)) {
    const auto v = f.eigen().vector(k);
    w += std::norm(inner(v, psi.amplitudes()));
  }
  return w;
}

}  // namespace

double moment(const PureState& psi, const Observable& f, int power) {
  require_dim(psi, f);
  if (power < 0) throw Error(ErrorKind::kValidation, "moment order must be non-negative");
  double acc = 0.0;
  for (std::size_t n = 0; n < f.outcome_count(); ++n) {
    acc += std::pow(f.spectrum()[n], power) * branch_weight(psi, f, n);
  }
  return acc;
}

double projector_frequency(const PureState& psi, const Observable& f, std::size_t n) {
  require_dim(psi, f);
  if (n >= f.outcome_count()) {
    throw Error(ErrorKind::kShape, "outcome index " + std::to_string(n) + " out of range");
  }
  return std::clamp(branch_weight(psi, f, n), 0.0, 1.0);
}

std::vector<double> projector_frequencies(const PureState& psi, const Observable& f) {
  std::vector<double> out(f.outcome_count());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = projector_frequency(psi, f, n);
  return out;
}

}  // namespace qmlab
