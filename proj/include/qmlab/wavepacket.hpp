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

// One-dimensional wave packets on a uniform grid (hbar = m = 1): Gaussian
// preparation, Crank-Nicolson propagation between reflecting walls, square
// barrier scattering, position sampling and a two-source double slit.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qmlab/hilbert.hpp"
#include "qmlab/rng.hpp"

namespace qmlab {

/// Uniform grid x_i = x_min + i dx, i = 0..n_points-1, with time step dt.
struct Grid1D {
  double x_min = -100.0;
  double x_max = 100.0;
  std::size_t n_points = 4096;
  double dt = 1e-3;

  double dx() const { return (x_max - x_min) / static_cast<double>(n_points - 1); }
  double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }

  /// n_points >= 256, x_max > x_min, dt > 0 (kValidation) and dt <= dx^2 (kGuard).
  void validate() const;
};

/// Complex amplitudes on a grid with sum |psi|^2 dx = 1 (within 1e-8 at construction).
class WavePacket {
 public:
  WavePacket(Grid1D grid, std::vector<Complex> values);

  /// Rescales `values` to unit grid norm.
  static WavePacket normalized(Grid1D grid, std::vector<Complex> values);

  const Grid1D& grid() const noexcept { return grid_; }
  std::span<const Complex> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  /// sum |psi|^2 dx
  double norm() const;
  /// |psi(x_i)|^2 at each grid point.
  std::vector<double> density() const;

 private:
  struct Unchecked {};
  WavePacket(Grid1D grid, std::vector<Complex> values, Unchecked);
  friend WavePacket propagate(const WavePacket&, std::span<const double>, double);

  Grid1D grid_;
  std::vector<Complex> values_;
};

/// psi(x) ~ exp(-(x - x_c)^2 / (4 sigma^2) + i k0 x). Error(kPlacement) unless
/// the packet sits at least 5 sigma inside the grid and sigma >= 4 dx.
WavePacket gaussian_packet(const Grid1D& grid, double x_c, double k0, double sigma);

double mean_position(const WavePacket& psi);
double position_spread(const WavePacket& psi);
/// Momentum moments from the discrete Fourier transform (spectral derivative).
double mean_momentum(const WavePacket& psi);
double momentum_spread(const WavePacket& psi);
/// <psi|H|psi> with the same finite-difference Hamiltonian used for propagation.
double energy(const WavePacket& psi, std::span<const double> potential);

/// Crank-Nicolson evolution (I + iH dt/2) psi' = (I - iH dt/2) psi with a
/// central-difference kinetic term and Dirichlet walls. The step is
/// t_total / ceil(t_total / grid.dt). Throws kGuard on an invalid grid and
/// kInstability if the norm drifts by more than 1e-6.
WavePacket propagate(const WavePacket& psi, std::span<const double> potential, double t_total);

/// Right-moving (k > 0) and left-moving (k < 0) parts of psi.
struct DirectionalSplit {
  std::vector<Complex> right;
  std::vector<Complex> left;
};
DirectionalSplit split_by_direction(const WavePacket& psi);

struct BarrierSpec {
  double v0 = 0.0;  // height
  double a = 1.0;   // width
  double x0 = 0.0;  // left edge
};

std::vector<double> barrier_potential(const Grid1D& grid, const BarrierSpec& barrier);

/// Plane-wave transmission through a square barrier at energy e (e > 0).
double plane_wave_transmission(double e, const BarrierSpec& barrier);

struct PacketParams {
  double x_c = 0.0;
  double k0 = 0.0;
  double sigma = 1.0;
};

struct ScatteringResult {
  double d = 0.0;        // norm right of the barrier
  double r = 0.0;        // norm left of the barrier
  double inside = 0.0;   // norm within the barrier
  double overlap = 0.0;  // integral of |psi_right-moving| |psi_left-moving| dx
  double near_barrier = 0.0;  // norm within 3 sigma_final of the barrier
  double sigma_final = 0.0;
  double energy = 0.0;        // <H> of the initial packet
};

/// Packet must start at least 5 sigma left of the barrier (kPlacement). The
/// run is rejected as kInconclusive when more than 1% of the norm remains
/// within 3 sigma_final of the barrier at t_total.
ScatteringResult scatter_barrier(const PacketParams& packet, const BarrierSpec& barrier,
                                 const Grid1D& grid, double t_total);

struct PositionSamples {
  std::vector<std::size_t> indices;
  std::vector<double> positions;
  std::uint64_t first_event = 0;
};

/// Inverse-CDF draws from the discrete density |psi(x_i)|^2 dx, one event per shot.
PositionSamples sample_positions(const WavePacket& psi, std::uint64_t shots, CounterRng& rng);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::uint64_t> counts;

  double bin_width() const { return (hi - lo) / static_cast<double>(counts.size()); }
  double center(std::size_t b) const { return lo + (static_cast<double>(b) + 0.5) * bin_width(); }
};

Histogram histogram(std::span<const double> samples, double lo, double hi, std::size_t bins);

/// Probability mass of the grid density falling in each bin of `h`
/// (points assigned by the same binning rule as the samples).
std::vector<double> binned_probability(const WavePacket& psi, const Histogram& h);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 0.0;
};

/// Pearson goodness of fit. Adjacent bins are pooled until each expected
/// count is at least 5.
ChiSquareResult chi_square(std::span<const std::uint64_t> counts,
                           std::span<const double> probabilities);

struct DoubleSlitParams {
  Complex amplitude1{1.0 / 1.4142135623730951, 0.0};  // source at -d/2
  Complex amplitude2{1.0 / 1.4142135623730951, 0.0};  // source at +d/2
  double separation = 20.0;
  double sigma = 0.5;
  double screen_time = 20.0;
  Grid1D grid{-150.0, 150.0, 8192, 1e-3};
};

struct DoubleSlitResult {
  WavePacket screen;
  PositionSamples arrivals;
  std::vector<double> peak_positions;  // local maxima of the central envelope
  double predicted_spacing = 0.0;      // 2 pi t / d
  double measured_spacing = 0.0;       // NaN with fewer than two peaks
};

/// Superposes two coherent Gaussian sources at -d/2 and +d/2, propagates
/// them freely to the screen time and samples `shots` arrivals.
/// Error(kValidation) unless |a1|^2 + |a2|^2 = 1 within 1e-10.
DoubleSlitResult double_slit(const DoubleSlitParams& params, std::uint64_t shots,
                             CounterRng& rng);

/// Local maxima of the density above `floor` times its peak, refined by a
/// three-point parabola, within |x| <= half_width.
std::vector<double> find_peaks(const WavePacket& psi, double half_width, double floor = 1e-3);

}  // namespace qmlab
