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
#include "qmlab/entangle.hpp"
#include "qmlab/observables.hpp"
#include "qmlab/states.hpp"
#include "test_util.hpp"

using namespace qmlab;
using testutil::max_diff;

TEST_SUITE("states") {

TEST_CASE("pure state validates its norm") {
  CHECK_THROWS_AS(PureState({1.0, 1.0}), Error);
  CHECK_NOTHROW(PureState({1.0, 0.0}));
  const PureState n = PureState::normalized({3.0, Complex(0.0, 4.0)});
  CHECK(std::abs(n[0] - 0.6) < 1e-15);
  CHECK(std::abs(n[1] - Complex(0.0, 0.8)) < 1e-15);
  CHECK_THROWS_AS(PureState::normalized({0.0, 0.0}), Error);
}

TEST_CASE("to_density examples") {
  const DensityMatrix e1 = to_density(PureState::basis(3, 0));
  CHECK(e1.matrix() == Matrix::diagonal(std::vector<double>{1.0, 0.0, 0.0}));

  const double h = 1.0 / std::numbers::sqrt2;
  const DensityMatrix plus = to_density(PureState({h, h}));
  for (const auto& z : plus.matrix().entries()) CHECK(std::abs(z - 0.5) < 1e-15);

  const DensityMatrix toward = to_density(spin_toward(std::numbers::pi / 2.0, 0.0));
  for (const auto& z : toward.matrix().entries()) CHECK(std::abs(z - 0.5) < 1e-15);
}

TEST_CASE("to_density is idempotent with unit purity") {
  for (std::size_t n : {2u, 3u, 5u, 8u}) {
    const DensityMatrix rho = to_density(testutil::random_state(n));
    CHECK(max_diff(rho.matrix() * rho.matrix(), rho.matrix()) < 1e-9);
    CHECK(std::abs(purity(rho) - 1.0) < 1e-9);
  }
}

TEST_CASE("density matrix validation") {
  CHECK_THROWS_AS(DensityMatrix(Matrix{{1.0, 0.0}, {0.0, 1.0}}), Error);           // trace 2
  CHECK_THROWS_AS(DensityMatrix(Matrix{{0.5, 1.0}, {0.0, 0.5}}), Error);           // not Hermitian
  CHECK_THROWS_AS(DensityMatrix(Matrix{{1.5, 0.0}, {0.0, -0.5}}), Error);          // not PSD
  CHECK_NOTHROW(DensityMatrix(Matrix{{0.5, 0.0}, {0.0, 0.5}}));
}

TEST_CASE("partial_trace examples") {
  const PureState psi = testutil::random_state(2), phi = testutil::random_state(3);
  std::vector<Complex> prod;
  for (auto a : psi.amplitudes())
    for (auto b : phi.amplitudes()) prod.push_back(a * b);
  const DensityMatrix reduced = partial_trace(BipartiteState::from_vector(PureState(prod), 2));
  CHECK(max_diff(reduced.matrix(), to_density(psi).matrix()) < 1e-14);

  const DensityMatrix s = partial_trace(BipartiteState::from_vector(singlet(), 2));
  CHECK(max_diff(s.matrix(), Complex(0.5) * Matrix::identity(2)) < 1e-15);

  // GHZ over particles 2,3: slow index is particle 1.
  const DensityMatrix g = partial_trace(BipartiteState::from_vector(ghz_state(), 2));
  CHECK(max_diff(g.matrix(), Matrix::diagonal(std::vector<double>{0.5, 0.5})) < 1e-15);
}

TEST_CASE("partial_trace preserves trace and positivity") {
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t da = 2 + trial % 3, db = 1 + trial % 4;
    const DensityMatrix rho =
        partial_trace(BipartiteState::from_vector(testutil::random_state(da * db), da));
    CHECK(std::abs(trace(rho.matrix()) - 1.0) < 1e-12);
    CHECK(min_eigenvalue(rho) >= -1e-10);
    CHECK(purity(rho) >= 1.0 / static_cast<double>(da) - 1e-10);
    CHECK(purity(rho) <= 1.0 + 1e-10);
  }
}

TEST_CASE("bipartite state validation and flatten") {
  CHECK_THROWS_AS(BipartiteState(Matrix{{1.0, 1.0}}), Error);
  const PureState psi = testutil::random_state(6);
  const auto bp = BipartiteState::from_vector(psi, 3);
  CHECK(bp.dim_a() == 3);
  CHECK(bp.dim_b() == 2);
  const PureState back = bp.flatten();
  for (std::size_t i = 0; i < 6; ++i) CHECK(back[i] == psi[i]);
  CHECK_THROWS_AS(BipartiteState::from_vector(psi, 4), Error);
}

TEST_CASE("expectation examples") {
  const DensityMatrix rho = to_density(testutil::random_state(4));
  CHECK(std::abs(expectation(rho, Matrix::identity(4)) - 1.0) < 1e-12);

  const SpinSystem half = make_spin(0.5);
  CHECK(expectation(to_density(PureState::basis(2, 0)), half.jz.matrix()) == doctest::Approx(0.5));

  const DensityMatrix mixed = partial_trace(BipartiteState::from_vector(singlet(), 2));
  CHECK(std::abs(expectation(mixed, half.jz.matrix())) < 1e-15);

  CHECK_THROWS_AS(expectation(rho, Matrix::identity(3)), Error);
  CHECK_THROWS_AS(expectation(rho, testutil::random_matrix(4, 4)), Error);
}

TEST_CASE("expectation agrees with the direct and spectral forms") {
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const PureState psi = testutil::random_state(n);
    const Matrix g = testutil::random_hermitian(n);
    const double via_rho = expectation(to_density(psi), g);
    const auto gpsi = qmlab::apply(g, psi.amplitudes());
    const double direct = inner(psi.amplitudes(), gpsi).real();
    CHECK(std::abs(via_rho - direct) < 1e-10);
    CHECK(std::abs(expectation(psi, g) - direct) < 1e-10);

    const Observable f(g);
    double spectral = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      spectral += f.eigen().eigenvalues[k] * std::norm(inner(f.eigen().vector(k), psi.amplitudes()));
    }
    CHECK(std::abs(via_rho - spectral) < 1e-9);
  }
}

TEST_CASE("purity examples") {
  CHECK(purity(to_density(testutil::random_state(3))) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(purity(DensityMatrix(Matrix::diagonal(std::vector<double>{0.5, 0.5}))) == doctest::Approx(0.5));
  // c = (1, 0, 1)/sqrt 2 decohered: sum |c_n|^4 = 1/2
  CHECK(purity(DensityMatrix(Matrix::diagonal(std::vector<double>{0.5, 0.0, 0.5}))) ==
        doctest::Approx(0.5));
}

TEST_CASE("json round trip") {
  const PureState psi = testutil::random_state(4);
  const auto j = to_json(psi);
  CHECK(j.is_array());
  CHECK(j.size() == 4);
  CHECK(j[0].size() == 2);
  const PureState back = pure_state_from_json(j);
  for (std::size_t i = 0; i < 4; ++i) CHECK(back[i] == psi[i]);
  CHECK_THROWS_AS(pure_state_from_json(nlohmann::json::parse("[[1,0],[1,0]]")), Error);
  const PureState fixed = pure_state_from_json(nlohmann::json::parse("[[1,0],[1,0]]"), true);
  CHECK(std::abs(fixed[0] - 1.0 / std::numbers::sqrt2) < 1e-15);
}

}  // TEST_SUITE
