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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qmlab/rng.hpp"
#include "qmlab/wavepacket.hpp"
#include "test_util.hpp"

using namespace qmlab;

namespace {

/// Transmission from matching e^{ikx} + r e^{-ikx} | A e^{qx} + B e^{-qx} |
/// t e^{ikx} at x = 0 and x = a; complex q covers both E < V0 and E > V0.
double transfer_matrix_transmission(double e, double v0, double a) {
  using C = std::complex<double>;
  const C i(0.0, 1.0);
  const double k = std::sqrt(2.0 * e);
  const C q = std::sqrt(C(2.0 * (v0 - e), 0.0));
  const C ea = std::exp(q * a), eb = std::exp(-q * a), et = std::exp(i * k * a);
  // unknowns (r, A, B, t)
  C m[4][5] = {
      {1.0, -1.0, -1.0, 0.0, -1.0},                       // psi(0)
      {-i * k, -q, q, 0.0, -i * k},                       // psi'(0)
      {0.0, ea, eb, -et, 0.0},                            // psi(a)
      {0.0, q * ea, -q * eb, -i * k * et, 0.0},           // psi'(a)
  };
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    std::swap(m[col], m[piv]);
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const C f = m[r][col] / m[col][col];
      for (int c = col; c < 5; ++c) m[r][c] -= f * m[col][c];
    }
  }
  const C t = m[3][4] / m[3][3];
  return std::norm(t);
}

/// Barrier run with the packet 10 widths left of the barrier and walls 10
/// final widths beyond the outgoing packets.
ScatteringResult run_barrier(double v0, double a, double e, double ratio, std::size_t n_points,
                             double* t_out = nullptr) {
  const double k0 = std::sqrt(2.0 * e);
  const double sigma = 1.0 / (2.0 * ratio * k0);
  auto width = [&](double t) { return std::sqrt(sigma * sigma + t * t / (4.0 * sigma * sigma)); };
  double t = 20.0 * sigma / k0;
  while (k0 * t - 10.0 * sigma < 6.0 * width(t)) t *= 1.02;
  const double half = std::max(k0 * t - 10.0 * sigma + 10.0 * width(t), 20.0 * sigma);
  Grid1D g{-half, a + half, n_points, 0.0};
  g.dt = 0.5 * g.dx() * g.dx();
  if (t_out) *t_out = t;
  return scatter_barrier({-10.0 * sigma, k0, sigma}, {v0, a, 0.0}, g, t);
}

}  // namespace

TEST_SUITE("wavepacket") {

TEST_CASE("grid validation") {
  CHECK_THROWS_AS((Grid1D{-1.0, 1.0, 100, 1e-6}.validate()), Error);
  CHECK_THROWS_AS((Grid1D{1.0, -1.0, 512, 1e-6}.validate()), Error);
  try {
    Grid1D{-10.0, 10.0, 512, 1.0}.validate();
    FAIL("expected guard error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kGuard);
  }
}

TEST_CASE("gaussian_packet examples") {
  const Grid1D g{-50.0, 50.0, 2048, 1e-3};
  const WavePacket p = gaussian_packet(g, 3.0, 1.2, 2.0);
  CHECK(std::abs(p.norm() - 1.0) < 1e-12);
  CHECK(std::abs(mean_position(p) - 3.0) < g.dx());
  CHECK(std::abs(mean_momentum(p) - 1.2) < 1e-6);
  CHECK(std::abs(position_spread(p) * momentum_spread(p) - 0.5) < 0.01);
  CHECK(std::abs(position_spread(p) - 2.0) < 1e-6);

  try {
    gaussian_packet(g, 45.0, 0.0, 2.0);
    FAIL("expected placement error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kPlacement);
  }
  CHECK_THROWS_AS(gaussian_packet(g, 0.0, 0.0, 2.0 * g.dx()), Error);
  CHECK_THROWS_AS(WavePacket(g, std::vector<Complex>(g.n_points, 1.0)), Error);
}

TEST_CASE("free propagation follows the analytic packet") {
  Grid1D g{-100.0, 100.0, 4096, 0.0};
  g.dt = 0.5 * g.dx() * g.dx();
  const double sigma = 2.0, k0 = 1.5, t = 20.0;
  const WavePacket p = gaussian_packet(g, -30.0, k0, sigma);
  const std::vector<double> v(g.n_points, 0.0);
  const WavePacket q = propagate(p, v, t);
  const double shift = mean_position(q) - mean_position(p);
  CHECK(std::abs(shift - k0 * t) < 0.005 * k0 * t);
  const double expect_sigma = std::sqrt(sigma * sigma + t * t / (4.0 * sigma * sigma));
  CHECK(std::abs(position_spread(q) - expect_sigma) < 0.01 * expect_sigma);
  const double steps = std::ceil(t / g.dt);
  CHECK(std::abs(q.norm() - 1.0) <= 1e-8 * std::max(1.0, steps / 1e4));
  CHECK(std::abs(energy(q, v) - energy(p, v)) < 1e-6 * energy(p, v));

  const WavePacket still = propagate(gaussian_packet(g, 0.0, 0.0, sigma), v, 10.0);
  CHECK(std::abs(mean_position(still)) < g.dx());
}

TEST_CASE("propagation enforces the time-step guard") {
  const Grid1D g{-20.0, 20.0, 512, 1.0};
  try {
    propagate(gaussian_packet(Grid1D{-20.0, 20.0, 512, 1e-3}, 0.0, 0.0, 2.0), std::vector<double>(512, 0.0), 1.0);
  } catch (...) {
    FAIL("valid grid rejected");
  }
  std::vector<Complex> values(512);
  const Grid1D ok{-20.0, 20.0, 512, 1e-3};
  const WavePacket p = gaussian_packet(ok, 0.0, 0.0, 2.0);
  for (std::size_t i = 0; i < 512; ++i) values[i] = p.values()[i];
  CHECK_THROWS_AS(propagate(WavePacket(g, values), std::vector<double>(512, 0.0), 1.0), Error);
  CHECK_THROWS_AS(propagate(p, std::vector<double>(10, 0.0), 1.0), Error);
}

TEST_CASE("plane-wave transmission matches the matching-condition oracle") {
  for (double v0 : {0.5, 2.0, 5.0}) {
    for (double a : {0.3, 1.0, 2.5}) {
      for (double e : {0.1, 0.49, 0.9, 1.0, 1.7, 3.0, 7.5}) {
        if (std::abs(e - v0) < 1e-9) continue;
        const double ref = transfer_matrix_transmission(e, v0, a);
        CHECK(std::abs(plane_wave_transmission(e, {v0, a, 0.0}) - ref) < 1e-10);
      }
      // E = V0 is continuous with its neighbourhood.
      const double at = plane_wave_transmission(v0, {v0, a, 0.0});
      CHECK(std::abs(at - transfer_matrix_transmission(v0 * (1 + 1e-7), v0, a)) < 1e-5);
    }
  }
  CHECK(plane_wave_transmission(1.0, {0.0, 1.0, 0.0}) == 1.0);
  CHECK_THROWS_AS(plane_wave_transmission(0.0, {1.0, 1.0, 0.0}), Error);
}

TEST_CASE("barrier potential keeps its area") {
  const Grid1D g{-10.0, 10.0, 1000, 1e-4};
  const auto v = barrier_potential(g, {2.0, 1.3, 0.17});
  double area = 0.0;
  for (double x : v) area += x * g.dx();
  CHECK(std::abs(area - 2.0 * 1.3) < 1e-12);
  CHECK_THROWS_AS(barrier_potential(g, {2.0, 0.0, 0.0}), Error);
}

TEST_CASE("scatter_barrier without a barrier transmits everything") {
  const auto r = run_barrier(0.0, 1.0, 1.0, 0.05, 4096);
  CHECK(std::abs(r.d - 1.0) < 1e-6);
  CHECK(r.r < 1e-6);
}

TEST_CASE("scatter_barrier tunneling matches the plane-wave formula") {
  for (double ratio : {0.03, 0.05}) {
    const auto r = run_barrier(2.0, 1.0, 1.0, ratio, 4096);
    const double ref = transfer_matrix_transmission(1.0, 2.0, 1.0);
    CHECK(std::abs(r.d - ref) < 0.05 * ref);
    CHECK(std::abs(r.d + r.r - 1.0) < 1e-4);
    CHECK(r.d >= 0.0);
    CHECK(r.r <= 1.0);
    CHECK(r.overlap < 1e-6);
    CHECK(r.near_barrier <= 0.01);
  }
}

TEST_CASE("tunneling decreases with barrier width") {
  double prev = 1.0;
  for (double a : {0.5, 0.75, 1.0, 1.25, 1.5}) {
    const auto r = run_barrier(2.0, a, 1.0, 0.05, 2048);
    CHECK(r.d < prev);
    prev = r.d;
  }
}

TEST_CASE("scatter_barrier reports unfinished runs") {
  Grid1D g{-80.0, 81.0, 2048, 0.0};
  g.dt = 0.5 * g.dx() * g.dx();
  try {
    scatter_barrier({-40.0, std::sqrt(2.0), 5.0}, {2.0, 1.0, 0.0}, g, 10.0);
    FAIL("expected inconclusive run");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInconclusive);
  }
  // The packet must start at least 5 widths left of the barrier.
  CHECK_THROWS_AS(scatter_barrier({-20.0, std::sqrt(2.0), 5.0}, {2.0, 1.0, 0.0}, g, 10.0), Error);
}

TEST_CASE("sample_positions examples") {
  const Grid1D g{-20.0, 20.0, 1024, 1e-3};
  const double sigma = 4.0 * g.dx();
  const WavePacket narrow = gaussian_packet(g, 1.0, 0.0, sigma);
  CounterRng rng(20);
  const auto s = sample_positions(narrow, 20000, rng);
  const auto inside = std::count_if(s.positions.begin(), s.positions.end(),
                                    [&](double x) { return std::abs(x - 1.0) <= 3.0 * sigma; });
  CHECK(inside >= 0.99 * 20000);

  const WavePacket wide = gaussian_packet(g, -2.0, 0.5, 2.0);
  const auto w = sample_positions(wide, 50000, rng);
  double mean = 0.0;
  for (double x : w.positions) mean += x / 50000.0;
  CHECK(std::abs(mean + 2.0) < 4.0 * 2.0 / std::sqrt(50000.0) + g.dx());
  CHECK(w.first_event == 20000);
  CHECK_THROWS_AS(sample_positions(wide, 0, rng), Error);
}

TEST_CASE("sampled histogram converges to the density in L1") {
  const Grid1D g{-20.0, 20.0, 1024, 1e-3};
  const WavePacket p = gaussian_packet(g, 0.0, 0.0, 3.0);
  std::vector<double> shots, l1;
  for (double n : {1e3, 1e4, 1e5, 1e6}) {
    CounterRng rng(21);
    const auto s = sample_positions(p, static_cast<std::uint64_t>(n), rng);
    const Histogram h = histogram(s.positions, -20.0, 20.0, 40);
    const auto prob = binned_probability(p, h);
    double dist = 0.0;
    for (std::size_t b = 0; b < prob.size(); ++b) dist += std::abs(h.counts[b] / n - prob[b]);
    shots.push_back(n);
    l1.push_back(dist);
  }
  const double slope = testutil::loglog_slope(shots, l1);
  CHECK(slope > -0.65);
  CHECK(slope < -0.35);
}

TEST_CASE("chi_square sanity") {
  const std::vector<double> p{0.25, 0.25, 0.5};
  const std::vector<std::uint64_t> exact{250, 250, 500};
  const auto r = chi_square(exact, p);
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == doctest::Approx(1.0));
  const std::vector<std::uint64_t> off{400, 100, 500};
  CHECK(chi_square(off, p).p_value < 1e-10);
}

TEST_CASE("double slit: single path has no fringes") {
  DoubleSlitParams params;
  params.amplitude1 = 1.0;
  params.amplitude2 = 0.0;
  CounterRng rng(22);
  const auto r = double_slit(params, 1000, rng);
  CHECK(r.peak_positions.size() <= 1);
  CHECK(std::isnan(r.measured_spacing));
}

TEST_CASE("double slit: equal amplitudes give centred fringes") {
  DoubleSlitParams params;
  CounterRng rng(23);
  const auto r = double_slit(params, 70000, rng);
  // central maximum at x = 0
  const auto rho = r.screen.density();
  const auto top = std::max_element(rho.begin(), rho.end()) - rho.begin();
  CHECK(std::abs(r.screen.grid().x(static_cast<std::size_t>(top))) < 2.0 * r.screen.grid().dx());
  CHECK(r.peak_positions.size() >= 5);
  CHECK(std::abs(r.measured_spacing - r.predicted_spacing) < 0.02 * r.predicted_spacing);
  const Histogram h = histogram(r.arrivals.positions, params.grid.x_min, params.grid.x_max, 300);
  CHECK(chi_square(h.counts, binned_probability(r.screen, h)).p_value > 0.01);
  CHECK_THROWS_AS(double_slit(DoubleSlitParams{Complex(1.0), Complex(1.0)}, 10, rng), Error);
}

}  // TEST_SUITE
