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

#include "qmlab/states.hpp"

#include <cmath>
#include <sstream>

namespace qmlab {

namespace {

double norm_squared(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& c : v) s += std::norm(c);
  return s;
}

}  // namespace

PureState::PureState(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.empty()) throw Error(ErrorKind::kValidation, "empty state vector");
  for (const auto& c : amplitudes_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw Error(ErrorKind::kValidation, "non-finite amplitude");
    }
  }
  const double n2 = norm_squared(amplitudes_);
  if (std::abs(n2 - 1.0) > tol::kOrthonormal) {
    std::ostringstream os;
    os << "state is not normalized (sum |c|^2 = " << n2 << ")";
    throw Error(ErrorKind::kValidation, os.str());
  }
}

PureState PureState::normalized(std::vector<Complex> amplitudes) {
  const double n = std::sqrt(norm_squared(amplitudes));
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorKind::kValidation, "cannot normalize a zero or non-finite vector");
  }
  for (auto& c : amplitudes) c /= n;
  return PureState(std::move(amplitudes));
}

PureState PureState::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw Error(ErrorKind::kShape, "basis index out of range");
  std::vector<Complex> v(dim);
  v[index] = 1.0;
  return PureState(std::move(v));
}

DensityMatrix::DensityMatrix(Matrix rho) : rho_(std::move(rho)) {
  if (!rho_.is_square() || rho_.empty()) {
    throw Error(ErrorKind::kShape, "density matrix must be square and non-empty");
  }
  const double herm = hermitian_deviation(rho_);
  if (herm > tol::kOrthonormal) {
    throw Error(ErrorKind::kValidation, "density matrix is not Hermitian");
  }
  const Complex tr = trace(rho_);
  if (std::abs(tr - 1.0) > tol::kOrthonormal) {
    std::ostringstream os;
    os << "density matrix trace is " << tr.real() << " (expected 1)";
    throw Error(ErrorKind::kValidation, os.str());
  }
  const double lo = min_eigenvalue(*this);
  if (lo < -tol::kOrthonormal) {
    std::ostringstream os;
    os << "density matrix is not positive semidefinite (min eigenvalue " << lo << ")";
    throw Error(ErrorKind::kValidation, os.str());
  }
}

double min_eigenvalue(const DensityMatrix& rho) {
  const Matrix& m = rho.matrix();
  Matrix herm = (m + dagger(m)) * Complex(0.5);
  return hermitian_eig(herm).eigenvalues.front();
}

BipartiteState::BipartiteState(Matrix amplitudes) : c_(std::move(amplitudes)) {
  if (c_.empty()) throw Error(ErrorKind::kValidation, "empty bipartite state");
  double n2 = norm_squared(c_.entries());
  if (std::abs(n2 - 1.0) > tol::kOrthonormal) {
    throw Error(ErrorKind::kValidation, "bipartite state is not normalized");
  }
}

BipartiteState BipartiteState::from_vector(const PureState& psi, std::size_t dim_a) {
  if (dim_a == 0 || psi.dim() % dim_a != 0) {
    throw Error(ErrorKind::kShape, "state of dimension " + std::to_string(psi.dim()) +
                                       " does not factor with dim_a = " + std::to_string(dim_a));
  }
  const auto amps = psi.amplitudes();
  return BipartiteState(
      Matrix(dim_a, psi.dim() / dim_a, std::vector<Complex>(amps.begin(), amps.end())));
}

PureState BipartiteState::flatten() const {
  const auto e = c_.entries();
  return PureState(std::vector<Complex>(e.begin(), e.end()));
}

DensityMatrix to_density(const PureState& psi) {
  const std::size_t n = psi.dim();
  Matrix rho(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rho(i, j) = psi[i] * std::conj(psi[j]);
  return DensityMatrix(std::move(rho));
}

DensityMatrix partial_trace(const BipartiteState& psi) {
  const Matrix& c = psi.amplitudes();
  const std::size_t na = psi.dim_a();
  Matrix rho(na, na);
  for (std::size_t n = 0; n < na; ++n)
    for (std::size_t m = 0; m < na; ++m) {
      Complex acc{};
      for (std::size_t a = 0; a < psi.dim_b(); ++a) acc += c(n, a) * std::conj(c(m, a));
      rho(n, m) = acc;
    }
  return DensityMatrix(std::move(rho));
}

double expectation(const DensityMatrix& rho, const Matrix& g) {
  if (g.rows() != rho.dim() || g.cols() != rho.dim()) {
    throw Error(ErrorKind::kShape, "observable dimension does not match density matrix");
  }
  if (hermitian_deviation(g) > tol::kOrthonormal) {
    throw Error(ErrorKind::kValidation, "observable is not Hermitian");
  }
  const Complex t = trace(g * rho.matrix());
  if (std::abs(t.imag()) >= tol::kOrthonormal * std::max(1.0, max_norm(g))) {
    throw Error(ErrorKind::kValidation, "expectation has a non-negligible imaginary part");
  }
  return t.real();
}

double expectation(const PureState& psi, const Matrix& g) {
  if (g.rows() != psi.dim() || g.cols() != psi.dim()) {
    throw Error(ErrorKind::kShape, "observable dimension does not match state");
  }
  return inner(psi.amplitudes(), apply(g, psi.amplitudes())).real();
}

double purity(const DensityMatrix& rho) {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  double s = 0.0;
  for (const auto& x : rho.matrix().entries()) s += std::norm(x);
  return s;
}

nlohmann::json to_json(const PureState& psi) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : psi.amplitudes()) out.push_back({c.real(), c.imag()});
  return out;
}

PureState pure_state_from_json(const nlohmann::json& j, bool normalize) {
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorKind::kValidation, "state JSON must be a non-empty array of [re, im]");
  }
  std::vector<Complex> amps;
  amps.reserve(j.size());
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw Error(ErrorKind::kValidation, "state JSON entries must be [re, im] number pairs");
    }
    amps.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  return normalize ? PureState::normalized(std::move(amps)) : PureState(std::move(amps));
}

}  // namespace qmlab
