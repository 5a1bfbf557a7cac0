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

#include "qmlab/wavepacket.hpp"

#include <fftw3.h>

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>

namespace qmlab {

namespace {

double grid_norm(std::span<const Complex> v, double dx) {
  double s = 0.0;
  for (const auto& c : v) s += std::norm(c);
  return s * dx;
}

// Unnormalized DFT; sign = FFTW_FORWARD or FFTW_BACKWARD.
std::vector<Complex> dft(std::span<const Complex> in, int sign) {
  static std::mutex planner;
  std::vector<Complex> buf(in.begin(), in.end());
  std::vector<Complex> out(in.size());
  fftw_plan plan;
  {
    std::lock_guard lock(planner);
    plan = fftw_plan_dft_1d(static_cast<int>(in.size()),
                            reinterpret_cast<fftw_complex*>(buf.data()),
                            reinterpret_cast<fftw_complex*>(out.data()), sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner);
    fftw_destroy_plan(plan);
  }
  return out;
}

std::vector<double> wavenumbers(std::size_t n, double dx) {
  std::vector<double> k(n);
  const double base = 2.0 * std::numbers::pi / (static_cast<double>(n) * dx);
  for (std::size_t m = 0; m < n; ++m) {
    const auto signed_m = m < (n + 1) / 2 ? static_cast<double>(m)
                                          : static_cast<double>(m) - static_cast<double>(n);
    k[m] = base * signed_m;
  }
  return k;
}

void require_potential(const WavePacket& psi, std::span<const double> potential) {
  if (potential.size() != psi.size()) {
    throw Error(ErrorKind::kShape, "potential has " + std::to_string(potential.size()) +
                                       " points, grid has " + std::to_string(psi.size()));
  }
}

}  // namespace

void Grid1D::validate() const {
  if (n_points < 256) throw Error(ErrorKind::kValidation, "grid needs at least 256 points");
  if (!(x_max > x_min)) throw Error(ErrorKind::kValidation, "grid needs x_max > x_min");
  if (!(dt > 0.0)) throw Error(ErrorKind::kValidation, "time step must be positive");
  const double h = dx();
  if (dt > h * h) {
    std::ostringstream os;
    os << "time step " << dt << " exceeds dx^2 = " << h * h;
    throw Error(ErrorKind::kGuard, os.str());
  }
}

WavePacket::WavePacket(Grid1D grid, std::vector<Complex> values, Unchecked)
    : grid_(grid), values_(std::move(values)) {}

WavePacket::WavePacket(Grid1D grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
  grid_.validate();
  if (values_.size() != grid_.n_points) {
    throw Error(ErrorKind::kShape, "wave packet length does not match the grid");
  }
  const double n = norm();
  if (!(std::abs(n - 1.0) <= 1e-8)) {
    std::ostringstream os;
    os << "wave packet norm is " << n;
    throw Error(ErrorKind::kValidation, os.str());
  }
}

WavePacket WavePacket::normalized(Grid1D grid, std::vector<Complex> values) {
  const double n = grid_norm(values, grid.dx());
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorKind::kValidation, "cannot normalize a zero wave function");
  }
  const double scale = 1.0 / std::sqrt(n);
  for (auto& v : values) v *= scale;
  return WavePacket(grid, std::move(values));
}

double WavePacket::norm() const { return grid_norm(values_, grid_.dx()); }

std::vector<double> WavePacket::density() const {
  std::vector<double> out(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) out[i] = std::norm(values_[i]);
  return out;
}

WavePacket gaussian_packet(const Grid1D& grid, double x_c, double k0, double sigma) {
  grid.validate();
  if (!(sigma >= 4.0 * grid.dx())) {
    throw Error(ErrorKind::kPlacement, "packet width must be at least 4 dx");
  }
  if (x_c - 5.0 * sigma < grid.x_min || x_c + 5.0 * sigma > grid.x_max) {
    std::ostringstream os;
    os << "packet at " << x_c << " with sigma " << sigma
       << " is within 5 sigma of the grid boundary";
    throw Error(ErrorKind::kPlacement, os.str());
  }
  std::vector<Complex> v(grid.n_points);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = grid.x(i);
    const double u = x - x_c;
    v[i] = std::polar(std::exp(-u * u / (4.0 * sigma * sigma)), k0 * x);
  }
  return WavePacket::normalized(grid, std::move(v));
}

double mean_position(const WavePacket& psi) {
  double acc = 0.0;
  const auto& g = psi.grid();
  for (std::size_t i = 0; i < psi.size(); ++i) acc += g.x(i) * std::norm(psi.values()[i]);
  return acc * g.dx() / psi.norm();
}

double position_spread(const WavePacket& psi) {
  const double mean = mean_position(psi);
  double acc = 0.0;
  const auto& g = psi.grid();
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double u = g.x(i) - mean;
    acc += u * u * std::norm(psi.values()[i]);
  }
  return std::sqrt(acc * g.dx() / psi.norm());
}

namespace {

std::pair<double, double> momentum_moments(const WavePacket& psi) {
  const auto spectrum = dft(psi.values(), FFTW_FORWARD);
  const auto k = wavenumbers(psi.size(), psi.grid().dx());
  double w = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double p = std::norm(spectrum[i]);
    w += p;
    m1 += k[i] * p;
    m2 += k[i] * k[i] * p;
  }
  return {m1 / w, m2 / w};
}

}  // namespace

double mean_momentum(const WavePacket& psi) { return momentum_moments(psi).first; }

double momentum_spread(const WavePacket& psi) {
  const auto [m1, m2] = momentum_moments(psi);
  return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

double energy(const WavePacket& psi, std::span<const double> potential) {
  require_potential(psi, potential);
  const double dx = psi.grid().dx();
  const double kin = 0.5 / (dx * dx);
  const auto v = psi.values();
  const std::size_t n = v.size();
  Complex acc{};
  for (std::size_t i = 0; i < n; ++i) {
    const Complex left = i > 0 ? v[i - 1] : Complex{};
    const Complex right = i + 1 < n ? v[i + 1] : Complex{};
    const Complex h = -kin * (left - 2.0 * v[i] + right) + potential[i] * v[i];
    acc += std::conj(v[i]) * h;
  }
  return acc.real() * dx / psi.norm();
}

WavePacket propagate(const WavePacket& psi, std::span<const double> potential, double t_total) {
  const Grid1D& grid = psi.grid();
  grid.validate();
  require_potential(psi, potential);
  if (!(t_total >= 0.0) || !std::isfinite(t_total)) {
    throw Error(ErrorKind::kValidation, "propagation time must be non-negative");
  }
  const auto steps = static_cast<std::size_t>(std::ceil(t_total / grid.dt - 1e-12));
  if (steps == 0) return psi;
  const double dt = t_total / static_cast<double>(steps);
  const double dx = grid.dx();
  const std::size_t n = psi.size();

  // H = -(1/2) D2 + V; A = I + i dt H / 2, B = I - i dt H / 2.
  const Complex off = Complex(0.0, -dt / (4.0 * dx * dx));
  std::vector<Complex> lower(n, off), upper(n, off), diag(n), b_diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double h_ii = 1.0 / (dx * dx) + potential[i];
    diag[i] = Complex(1.0, 0.5 * dt * h_ii);
    b_diag[i] = Complex(1.0, -0.5 * dt * h_ii);
  }

  const double start_norm = psi.norm();
  std::vector<Complex> cur(psi.values().begin(), psi.values().end());
  std::vector<Complex> rhs(n);
  for (std::size_t s = 0; s < steps; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      const Complex left = i > 0 ? cur[i - 1] : Complex{};
      const Complex right = i + 1 < n ? cur[i + 1] : Complex{};
      rhs[i] = b_diag[i] * cur[i] - off * (left + right);
    }
    cur = solve_tridiagonal(lower, diag, upper, rhs);
  }

  const double end_norm = grid_norm(cur, dx);
  if (!(std::abs(end_norm - start_norm) <= 1e-6)) {
    std::ostringstream os;
    os << "norm drifted from " << start_norm << " to " << end_norm << " over " << steps
       << " steps";
    throw Error(ErrorKind::kInstability, os.str());
  }
  return WavePacket(grid, std::move(cur), WavePacket::Unchecked{});
}

DirectionalSplit split_by_direction(const WavePacket& psi) {
  auto spectrum = dft(psi.values(), FFTW_FORWARD);
  const auto k = wavenumbers(psi.size(), psi.grid().dx());
  std::vector<Complex> right_k(spectrum.size()), left_k(spectrum.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] > 0.0) right_k[i] = spectrum[i];
    if (k[i] < 0.0) left_k[i] = spectrum[i];
  }
  DirectionalSplit out{dft(right_k, FFTW_BACKWARD), dft(left_k, FFTW_BACKWARD)};
  const double scale = 1.0 / static_cast<double>(psi.size());
  for (auto& v : out.right) v *= scale;
  for (auto& v : out.left) v *= scale;
  return out;
}

std::vector<double> barrier_potential(const Grid1D& grid, const BarrierSpec& barrier) {
  if (!(barrier.a > 0.0)) throw Error(ErrorKind::kValidation, "barrier width must be positive");
  std::vector<double> v(grid.n_points);
  const double dx = grid.dx();
  for (std::size_t i = 0; i < v.size(); ++i) {
    // Cell average, so the discrete barrier keeps its exact area v0 * a.
    const double lo = std::max(grid.x(i) - 0.5 * dx, barrier.x0);
    const double hi = std::min(grid.x(i) + 0.5 * dx, barrier.x0 + barrier.a);
    if (hi > lo) v[i] = barrier.v0 * (hi - lo) / dx;
  }
  return v;
}

double plane_wave_transmission(double e, const BarrierSpec& barrier) {
  if (!(e > 0.0)) throw Error(ErrorKind::kValidation, "energy must be positive");
  const double v0 = barrier.v0;
  const double a = barrier.a;
  if (v0 == 0.0) return 1.0;
  if (e < v0) {
    const double kappa = std::sqrt(2.0 * (v0 - e));
    const double sh = std::sinh(kappa * a);
    return 1.0 / (1.0 + v0 * v0 * sh * sh / (4.0 * e * (v0 - e)));
  }
  if (e > v0) {
    const double q = std::sqrt(2.0 * (e - v0));
    const double sn = std::sin(q * a);
    return 1.0 / (1.0 + v0 * v0 * sn * sn / (4.0 * e * (e - v0)));
  }
  return 1.0 / (1.0 + v0 * a * a / 2.0);
}

ScatteringResult scatter_barrier(const PacketParams& packet, const BarrierSpec& barrier,
                                 const Grid1D& grid, double t_total) {
  if (packet.x_c + 5.0 * packet.sigma > barrier.x0) {
    throw Error(ErrorKind::kPlacement, "packet must start at least 5 sigma left of the barrier");
  }
  const auto potential = barrier_potential(grid, barrier);
  const WavePacket start = gaussian_packet(grid, packet.x_c, packet.k0, packet.sigma);
  const WavePacket end = propagate(start, potential, t_total);

  ScatteringResult out;
  out.energy = energy(start, potential);
  out.sigma_final = std::sqrt(packet.sigma * packet.sigma +
                              t_total * t_total / (4.0 * packet.sigma * packet.sigma));
  const double dx = grid.dx();
  const double right_edge = barrier.x0 + barrier.a;
  for (std::size_t i = 0; i < end.size(); ++i) {
    const double x = grid.x(i);
    const double p = std::norm(end.values()[i]) * dx;
    if (x < barrier.x0) {
      out.r += p;
    } else if (x > right_edge) {
      out.d += p;
    } else {
      out.inside += p;
    }
    if (x >= barrier.x0 - 3.0 * out.sigma_final && x <= right_edge + 3.0 * out.sigma_final) {
      out.near_barrier += p;
    }
  }
  if (out.near_barrier > 0.01) {
    std::ostringstream os;
    os << out.near_barrier * 100.0
       << "% of the norm is still near the barrier; enlarge the grid or the run time";
    throw Error(ErrorKind::kInconclusive, os.str());
  }
  const auto split = split_by_direction(end);
  for (std::size_t i = 0; i < end.size(); ++i) {
    out.overlap += std::abs(split.right[i]) * std::abs(split.left[i]);
  }
  out.overlap *= dx;
  return out;
}

PositionSamples sample_positions(const WavePacket& psi, std::uint64_t shots, CounterRng& rng) {
  if (shots == 0) throw Error(ErrorKind::kValidation, "shots must be at least 1");
  const auto density = psi.density();
  std::vector<double> cdf(density.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) {
    acc += density[i];
    cdf[i] = acc;
  }
  PositionSamples out;
  out.first_event = rng.next_event();
  out.indices.resize(shots);
  out.positions.resize(shots);
  const CounterRng base = rng;
  for_each_shard(shots, default_shards(), [&](unsigned, std::uint64_t first, std::uint64_t count) {
    CounterRng local = base;
    local.seek(out.first_event + first);
    for (std::uint64_t s = first; s < first + count; ++s) {
      local.begin_event();
      const double target = local.uniform() * acc;
      auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
      if (it == cdf.end()) --it;
      const auto idx = static_cast<std::size_t>(it - cdf.begin());
      out.indices[s] = idx;
      out.positions[s] = psi.grid().x(idx);
    }
  });
  rng.seek(out.first_event + shots);
  return out;
}

namespace {

std::ptrdiff_t bin_of(double x, double lo, double hi, std::size_t bins) {
  if (x < lo || x > hi) return -1;
  const double w = (hi - lo) / static_cast<double>(bins);
  auto b = static_cast<std::size_t>((x - lo) / w);
  return static_cast<std::ptrdiff_t>(std::min(b, bins - 1));
}

}  // namespace

Histogram histogram(std::span<const double> samples, double lo, double hi, std::size_t bins) {
  if (bins == 0 || !(hi > lo)) throw Error(ErrorKind::kValidation, "invalid histogram range");
  Histogram h{lo, hi, std::vector<std::uint64_t>(bins)};
  for (double x : samples) {
    const auto b = bin_of(x, lo, hi, bins);
    if (b >= 0) ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

std::vector<double> binned_probability(const WavePacket& psi, const Histogram& h) {
  std::vector<double> p(h.counts.size());
  const double total = psi.norm() / psi.grid().dx();
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const auto b = bin_of(psi.grid().x(i), h.lo, h.hi, h.counts.size());
    if (b >= 0) p[static_cast<std::size_t>(b)] += std::norm(psi.values()[i]) / total;
  }
  return p;
}

ChiSquareResult chi_square(std::span<const std::uint64_t> counts,
                           std::span<const double> probabilities) {
  if (counts.size() != probabilities.size() || counts.empty()) {
    throw Error(ErrorKind::kShape, "chi-square: counts and probabilities differ in length");
  }
  double shots = 0.0;
  for (auto c : counts) shots += static_cast<double>(c);

  std::vector<double> observed, expected;
  double obs = 0.0, exp = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    obs += static_cast<double>(counts[i]);
    exp += probabilities[i] * shots;
    if (exp >= 5.0) {
      observed.push_back(obs);
      expected.push_back(exp);
      obs = exp = 0.0;
    }
  }
  if (!expected.empty()) {
    observed.back() += obs;
    expected.back() += exp;
  } else {
    observed.push_back(obs);
    expected.push_back(exp);
  }

  ChiSquareResult out;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double diff = observed[i] - expected[i];
    out.statistic += diff * diff / expected[i];
  }
  out.dof = static_cast<int>(expected.size()) - 1;
  if (out.dof < 1) {
    out.p_value = 1.0;
    return out;
  }
  const boost::math::chi_squared dist(out.dof);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  return out;
}

std::vector<double> find_peaks(const WavePacket& psi, double half_width, double floor) {
  const auto rho = psi.density();
  const double top = *std::max_element(rho.begin(), rho.end());
  const auto& g = psi.grid();
  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < rho.size(); ++i) {
    if (std::abs(g.x(i)) > half_width) continue;
    if (rho[i] < floor * top) continue;
    if (rho[i] > rho[i - 1] && rho[i] >= rho[i + 1]) {
      const double curvature = rho[i - 1] - 2.0 * rho[i] + rho[i + 1];
      const double shift = curvature != 0.0 ? 0.5 * (rho[i - 1] - rho[i + 1]) / curvature : 0.0;
      peaks.push_back(g.x(i) + shift * g.dx());
    }
  }
  return peaks;
}

DoubleSlitResult double_slit(const DoubleSlitParams& params, std::uint64_t shots,
                             CounterRng& rng) {
  const double weight = std::norm(params.amplitude1) + std::norm(params.amplitude2);
  if (!(std::abs(weight - 1.0) <= 1e-10)) {
    throw Error(ErrorKind::kValidation, "source amplitudes must satisfy |a1|^2 + |a2|^2 = 1");
  }
  if (!(params.separation > 0.0) || !(params.screen_time > 0.0)) {
    throw Error(ErrorKind::kValidation, "separation and screen time must be positive");
  }
  const Grid1D& grid = params.grid;
  const double half = params.separation / 2.0;
  const WavePacket left = gaussian_packet(grid, -half, 0.0, params.sigma);
  const WavePacket right = gaussian_packet(grid, half, 0.0, params.sigma);
  std::vector<Complex> v(grid.n_points);
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = params.amplitude1 * left.values()[i] + params.amplitude2 * right.values()[i];
  }
  const WavePacket source = WavePacket::normalized(grid, std::move(v));
  const std::vector<double> free(grid.n_points, 0.0);
  WavePacket screen = propagate(source, free, params.screen_time);

  const double t = params.screen_time;
  const double envelope =
      params.sigma * std::sqrt(1.0 + std::pow(t / (2.0 * params.sigma * params.sigma), 2));
  auto peaks = find_peaks(screen, envelope);
  auto arrivals = sample_positions(screen, shots, rng);

  DoubleSlitResult out{std::move(screen), std::move(arrivals), std::move(peaks),
                       2.0 * std::numbers::pi * t / params.separation,
                       std::numeric_limits<double>::quiet_NaN()};
  if (out.peak_positions.size() >= 2) {
    out.measured_spacing = (out.peak_positions.back() - out.peak_positions.front()) /
                           static_cast<double>(out.peak_positions.size() - 1);
  }
  return out;
}

}  // namespace qmlab
