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

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qmlab/observables.hpp"
#include "test_util.hpp"

using namespace qmlab;
using testutil::max_diff;

TEST_SUITE("observables") {

TEST_CASE("make_spin examples") {
  const SpinSystem half = make_spin(0.5);
  CHECK(half.jz.matrix() == Matrix::diagonal(std::vector<double>{0.5, -0.5}));
  CHECK(max_diff(half.jx.matrix(), Complex(0.5) * pauli_x()) < 1e-15);
  CHECK(max_diff(half.jy.matrix(), Complex(0.5) * pauli_y()) < 1e-15);

  const SpinSystem s = make_spin(1.5);
  const PureState top = s.state(1.5);
  const Matrix jx2 = s.jx.matrix() * s.jx.matrix();
  const Matrix jy2 = s.jy.matrix() * s.jy.matrix();
  CHECK(std::abs(expectation(top, jx2 + jy2) - 1.5) < 1e-12);
  CHECK(std::abs(expectation(top, jx2 * jx2) - 21.0 / 16.0) < 1e-12);

  CHECK_THROWS_AS(make_spin(0.3), Error);
  CHECK_THROWS_AS(make_spin(-1.0), Error);
  CHECK_THROWS_AS(s.state(0.0), Error);
}

TEST_CASE("spin algebra and Casimir for several j") {
  for (double j : {0.5, 1.0, 1.5, 2.0, 2.5}) {
    const SpinSystem s = make_spin(j);
    const Matrix& x = s.jx.matrix();
    const Matrix& y = s.jy.matrix();
    const Matrix& z = s.jz.matrix();
    const Complex i(0.0, 1.0);
    CHECK(max_diff(commutator(x, y), i * z) < 1e-10);
    CHECK(max_diff(commutator(y, z), i * x) < 1e-10);
    CHECK(max_diff(commutator(z, x), i * y) < 1e-10);
    const Matrix casimir = x * x + y * y + z * z;
    CHECK(max_diff(casimir, Complex(j * (j + 1.0)) * Matrix::identity(s.dim())) < 1e-9);
    for (double m = j; m >= -j - 1e-9; m -= 1.0) {
      CHECK(std::abs(expectation(s.state(m), x * x + y * y) - (j * (j + 1.0) - m * m)) < 1e-10);
    }
  }
}

TEST_CASE("observable projectors form a resolution of the identity") {
  for (std::size_t n : {2u, 4u, 7u}) {
    const Observable f(testutil::random_hermitian(n));
    Matrix sum(n, n), recon(n, n);
    for (std::size_t a = 0; a < f.outcome_count(); ++a) {
      sum += f.projectors()[a];
      recon += Complex(f.spectrum()[a]) * f.projectors()[a];
      for (std::size_t b = 0; b < f.outcome_count(); ++b) {
        const Matrix expect = a == b ? f.projectors()[a] : Matrix(n, n);
        CHECK(max_diff(f.projectors()[a] * f.projectors()[b], expect) < 1e-9);
      }
    }
    CHECK(max_diff(sum, Matrix::identity(n)) < 1e-10);
    CHECK(max_diff(recon, f.matrix()) < 1e-9);
  }
}

TEST_CASE("degenerate spectra are grouped") {
  const Observable f(kron(make_spin(0.5).jz.matrix(), Matrix::identity(3)));
  CHECK(f.outcome_count() == 2);
  CHECK(f.degeneracies()[0] == 3);
  CHECK(f.degeneracies()[1] == 3);
  CHECK(f.spectrum()[0] == doctest::Approx(-0.5));
}

TEST_CASE("spin_toward examples") {
  const PureState up = spin_toward(0.0, 0.3);
  CHECK(std::abs(std::abs(up[0]) - 1.0) < 1e-15);
  const PureState down = spin_toward(std::numbers::pi, 0.0);
  CHECK(std::abs(std::abs(down[1]) - 1.0) < 1e-15);
  CHECK(std::abs(down[0]) < 1e-15);

  const SpinSystem half = make_spin(0.5);
  for (int trial = 0; trial < 20; ++trial) {
    const double theta = testutil::uniform(0.0, std::numbers::pi);
    const double phi = testutil::uniform(0.0, 2.0 * std::numbers::pi);
    const PureState psi = spin_toward(theta, phi);
    CHECK(std::abs(std::norm(psi[0]) - std::pow(std::cos(theta / 2.0), 2)) < 1e-14);
    CHECK(std::abs(std::norm(psi[1]) - std::pow(std::sin(theta / 2.0), 2)) < 1e-14);
    // eigenstate of s.n with eigenvalue +1/2
    const Matrix sn = half.along({std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                                  std::cos(theta)});
    const auto v = qmlab::apply(sn, psi.amplitudes());
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(v[i] - 0.5 * psi[i]) < 1e-10);
  }
}

TEST_CASE("moment examples") {
  const SpinSystem s = make_spin(1.5);
  const PureState top = s.state(1.5);
  CHECK(std::abs(moment(top, s.jx, 1)) < 1e-12);
  CHECK(std::abs(moment(top, s.jx, 2) - 0.75) < 1e-12);
  CHECK(std::abs(moment(top, s.jx, 4) - 21.0 / 16.0) < 1e-12);
  CHECK(std::abs(moment(top, s.jx, 0) - 1.0) < 1e-12);
  CHECK_THROWS_AS(moment(top, s.jx, -1), Error);
  CHECK_THROWS_AS(moment(PureState::basis(2, 0), s.jx, 1), Error);
}

TEST_CASE("moment agrees with matrix powers and projector frequencies") {
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const PureState psi = testutil::random_state(n);
    const Observable f(testutil::random_hermitian(n));
    Matrix power = Matrix::identity(n);
    const auto freq = projector_frequencies(psi, f);
    for (int k = 1; k <= 5; ++k) {
      power = power * f.matrix();
      double spectral = 0.0;
      for (std::size_t a = 0; a < freq.size(); ++a) spectral += std::pow(f.spectrum()[a], k) * freq[a];
      const double m = moment(psi, f, k);
      CHECK(std::abs(m - spectral) < 1e-9 * std::max(1.0, std::abs(m)));
      CHECK(std::abs(m - expectation(psi, power)) < 1e-8 * std::max(1.0, std::abs(m)));
    }
  }
}

TEST_CASE("projector_frequency examples") {
  const SpinSystem half = make_spin(0.5);
  const PureState up = PureState::basis(2, 0);
  CHECK(std::abs(projector_frequency(up, half.jx, 0) - 0.5) < 1e-12);
  CHECK(std::abs(projector_frequency(up, half.jx, 1) - 0.5) < 1e-12);

  const SpinSystem s = make_spin(1.5);
  const PureState top = s.state(1.5);
  CHECK(std::abs(projector_frequency(top, s.jx, 3) - 0.125) < 1e-12);  // +3/2
  CHECK(std::abs(projector_frequency(top, s.jx, 2) - 0.375) < 1e-12);  // +1/2
  CHECK_THROWS_AS(projector_frequency(top, s.jx, 4), Error);
}

TEST_CASE("projector frequencies sum to one") {
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 6;
    const auto freq = projector_frequencies(testutil::random_state(n),
                                            Observable(testutil::random_hermitian(n)));
    double sum = 0.0;
    for (double p : freq) {
      CHECK(p >= 0.0);
      sum += p;
    }
    CHECK(std::abs(sum - 1.0) < 1e-10);
  }
}

TEST_CASE("embed places the operator on one site") {
  const Matrix x2 = embed(pauli_x(), 1, 3);
  CHECK(x2 == kron(kron(Matrix::identity(2), pauli_x()), Matrix::identity(2)));
  CHECK_THROWS_AS(embed(pauli_x(), 3, 3), Error);
}

}  // TEST_SUITE
