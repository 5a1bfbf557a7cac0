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
#include <sstream>

#include "doctest.h"
#include "qmlab/entangle.hpp"
#include "qmlab/measure.hpp"
#include "qmlab/observables.hpp"
#include "test_util.hpp"

using namespace qmlab;
using testutil::max_diff;

namespace {

DetectorSetting random_setting() {
  const double z = testutil::uniform(-1.0, 1.0);
  const double phi = testutil::uniform(0.0, 2.0 * std::numbers::pi);
  const double r = std::sqrt(1.0 - z * z);
  return DetectorSetting({r * std::cos(phi), r * std::sin(phi), z});
}

std::vector<Complex> apply_state(const Matrix& m, const PureState& psi) {
  return qmlab::apply(m, psi.amplitudes());
}

}  // namespace

TEST_SUITE("entangle") {

TEST_CASE("detector settings validate their norm") {
  CHECK_THROWS_AS(DetectorSetting({1.0, 1.0, 0.0}), Error);
  const auto a = DetectorSetting::in_plane(0.0), b = DetectorSetting::in_plane(std::numbers::pi / 2);
  CHECK(std::abs(a.dot(b)) < 1e-15);
  CHECK(a.angle_to(b) == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("singlet examples") {
  const PureState s = singlet();
  const double h = 1.0 / std::numbers::sqrt2;
  CHECK(s[0] == Complex(0.0));
  CHECK(std::abs(s[1] - h) < 1e-15);
  CHECK(std::abs(s[2] + h) < 1e-15);
  CHECK(std::abs(expectation(s, total_spin_squared())) < 1e-15);
  const DensityMatrix r = partial_trace(BipartiteState::from_vector(s, 2));
  CHECK(max_diff(r.matrix(), Complex(0.5) * Matrix::identity(2)) < 1e-15);

  // In the x basis the singlet has the same form: amplitude on |+-> and |-+>
  // only, with opposite signs.
  const auto ex = make_spin(0.5).jx.eigen().eigenvectors;  // columns: |->, |+>
  const auto c = qmlab::apply(dagger(kron(ex, ex)), s.amplitudes());
  CHECK(std::abs(c[0]) < 1e-15);
  CHECK(std::abs(c[3]) < 1e-15);
  CHECK(std::abs(std::abs(c[1]) - h) < 1e-15);
  CHECK(std::abs(c[1] + c[2]) < 1e-15);
}

TEST_CASE("spin_correlation examples") {
  const auto a = DetectorSetting::in_plane(0.3);
  CHECK(std::abs(spin_correlation(a, a) + 0.25) < 1e-15);
  CHECK(std::abs(spin_correlation(a, DetectorSetting::in_plane(0.3 + std::numbers::pi / 2))) < 1e-15);
  CHECK(std::abs(spin_correlation(a, DetectorSetting::in_plane(0.3 + 2 * std::numbers::pi / 3)) - 0.125) < 1e-15);
}

TEST_CASE("spin_correlation equals -a.b/4 over random settings") {
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_setting(), b = random_setting();
    CHECK(std::abs(spin_correlation(a, b) + 0.25 * a.dot(b)) < 1e-10);
    CHECK(std::abs(sigma_correlation(a, b) - 4.0 * spin_correlation(a, b)) < 1e-14);
  }
}

TEST_CASE("chsh_value examples") {
  const double deg = std::numbers::pi / 180.0;
  const double s = chsh_value(DetectorSetting::in_plane(0.0), DetectorSetting::in_plane(90 * deg),
                              DetectorSetting::in_plane(45 * deg), DetectorSetting::in_plane(135 * deg));
  CHECK(std::abs(std::abs(s) - 2.0 * std::numbers::sqrt2) < 1e-12);
  CHECK(std::abs(std::abs(chsh_value(ChshSettings::optimal())) - 2.0 * std::numbers::sqrt2) < 1e-12);
  const auto a = DetectorSetting::in_plane(0.4);
  CHECK(std::abs(chsh_value(a, a, a, a) + 2.0) < 1e-14);
  for (int i = 0; i < 10000; ++i) {
    CHECK(std::abs(chsh_value(random_setting(), random_setting(), random_setting(), random_setting())) <=
          2.0 * std::numbers::sqrt2 + 1e-9);
  }
}

TEST_CASE("hidden-variable baseline examples") {
  CounterRng rng(10);
  const auto a = DetectorSetting::in_plane(0.2);
  CHECK(hv_baseline_correlation(a, a, 10000, rng) == -1.0);
  const int n = 100000;
  const double perp = hv_baseline_correlation(a, DetectorSetting::in_plane(0.2 + std::numbers::pi / 2), n, rng);
  CHECK(std::abs(perp) < 4.0 / std::sqrt(n));
  for (double th : {0.3, 1.0, 2.0, 3.0}) {
    const auto est = hv_baseline_estimate(a, DetectorSetting::in_plane(0.2 + th), n, rng);
    CHECK(std::abs(hv_analytic_correlation(a, DetectorSetting::in_plane(0.2 + th)) - (-1.0 + 2.0 * th / std::numbers::pi)) < 1e-12);
    CHECK(std::abs(est.mean - (-1.0 + 2.0 * th / std::numbers::pi)) < 4.0 * est.std_error);
  }
  const auto chsh = chsh_hv(ChshSettings::optimal(), n, rng);
  CHECK(std::abs(chsh.s) <= 2.0 + 4.0 * chsh.std_error);
}

TEST_CASE("Monte Carlo singlet correlation") {
  CounterRng rng(11);
  for (int i = 0; i < 5; ++i) {
    const auto a = random_setting(), b = random_setting();
    const auto est = singlet_correlation_mc(a, b, 100000, rng);
    CHECK(std::abs(est.mean + a.dot(b)) < 4.0 * est.std_error + 1e-12);
  }
  const auto q = chsh_quantum_mc(ChshSettings::optimal(), 100000, rng);
  CHECK(std::abs(std::abs(q.s) - 2.0 * std::numbers::sqrt2) < 4.0 * q.std_error);
}

TEST_CASE("GHZ eigenrelations") {
  const PureState g = ghz_state();
  CHECK(std::abs(g[0] - 1.0 / std::numbers::sqrt2) < 1e-15);
  CHECK(std::abs(g[7] + 1.0 / std::numbers::sqrt2) < 1e-15);
  double norm = 0.0;
  for (auto z : g.amplitudes()) norm += std::norm(z);
  CHECK(std::abs(norm - 1.0) < 1e-15);

  // Build the Mermin operators independently from the Pauli matrices.
  const Matrix x = pauli_x(), y = pauli_y();
  const Matrix m[4] = {kron(kron(x, y), y), kron(kron(y, x), y), kron(kron(y, y), x), kron(kron(x, x), x)};
  const MerminOperator tags[4] = {MerminOperator::kM1, MerminOperator::kM2, MerminOperator::kM3,
                                  MerminOperator::kM4};
  const int sign[4] = {1, 1, 1, -1};
  for (int k = 0; k < 4; ++k) {
    CHECK(max_diff(mermin_operator(tags[k]), m[k]) < 1e-15);
    CHECK(mermin_product(tags[k]) == sign[k]);
    const auto v = apply_state(m[k], g);
    for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(v[i] - double(sign[k]) * g[i]) < 1e-10);
  }
}

TEST_CASE("GHZ runs satisfy their product constraints exactly") {
  CounterRng rng(12);
  const auto runs = ghz_runs(MerminOperator::kM1, 100000, rng, true);
  CHECK(runs.size() == 100000);
  int plus = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i];
    CHECK(r.event_counter == i);
    CHECK(r.product() == mermin_product(r.which));
    plus += r.m2 > 0;
  }
  CHECK(std::abs(plus / 1e5 - 0.5) < 4.0 * testutil::binomial_se(0.5, 1e5));

  CounterRng single(13);
  for (int i = 0; i < 200; ++i) {
    CHECK(ghz_run(MerminOperator::kM1, single).product() == 1);
    CHECK(ghz_run(MerminOperator::kM4, single).product() == -1);
  }
}

TEST_CASE("classical assignments cannot satisfy all four products") {
  // Independent brute force: bit b of `mask` is the value of
  // (x1, y1, x2, y2, x3, y3)[b].
  int solutions = 0;
  for (int mask = 0; mask < 64; ++mask) {
    auto v = [&](int b) { return (mask >> b) & 1 ? -1 : 1; };
    const int x1 = v(0), y1 = v(1), x2 = v(2), y2 = v(3), x3 = v(4), y3 = v(5);
    solutions += x1 * y2 * y3 == 1 && y1 * x2 * y3 == 1 && y1 * y2 * x3 == 1 && x1 * x2 * x3 == -1;
  }
  CHECK(solutions == 0);
  CHECK(count_classical_mermin_assignments() == solutions);
}

TEST_CASE("ghz_incompatibility_demo report") {
  const auto r = ghz_incompatibility_demo();
  for (double c : r.operator_commutator_norms) CHECK(c < 1e-10);
  CHECK(r.site_commutator_norm == doctest::Approx(2.0));
  CHECK(r.within_run_accepted);
  CHECK(r.cross_run_rejected);
  CHECK(r.product_constraints == std::array<int, 4>{1, 1, 1, -1});
  CHECK(r.classical_solutions == 0);
}

TEST_CASE("GHZ log format") {
  CounterRng rng(14);
  const auto runs = ghz_runs(MerminOperator::kM4, 2, rng);
  std::ostringstream out;
  write_ghz_log(out, runs);
  CHECK(out.str().rfind("event_counter,which,m1,m2,m3,product\n0,M4,", 0) == 0);
}

}  // TEST_SUITE
