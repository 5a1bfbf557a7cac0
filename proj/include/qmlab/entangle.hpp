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

// Two- and three-spin correlation experiments: singlet correlations and the
// CHSH combination, a local hidden-variable baseline, and GHZ runs of the
// four Mermin triple measurements.

#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "qmlab/hilbert.hpp"
#include "qmlab/rng.hpp"
#include "qmlab/states.hpp"

namespace qmlab {

using Vec3 = std::array<double, 3>;

/// Unit analyzer direction (norm 1 within 1e-10).
class DetectorSetting {
 public:
  explicit DetectorSetting(Vec3 direction);

  /// Direction at polar angle theta from z in the x-z plane.
  static DetectorSetting in_plane(double theta);
  static DetectorSetting spherical(double theta, double phi);

  const Vec3& direction() const noexcept { return direction_; }
  double dot(const DetectorSetting& other) const;
  double angle_to(const DetectorSetting& other) const;

 private:
  Vec3 direction_;
};

/// (|up down> - |down up>) / sqrt(2) in the kron basis {uu, ud, du, dd}.
PureState singlet();

/// S_tot^2 for two spin-1/2 particles.
Matrix total_spin_squared();

/// s . n for one spin-1/2 (s = sigma / 2).
Matrix spin_half_along(const DetectorSetting& n);

/// <singlet| (s.a) (x) (s.b) |singlet>, evaluated through the density matrix.
double spin_correlation(const DetectorSetting& a, const DetectorSetting& b);

/// Correlator of the +-1 readings, E = 4 * spin_correlation = -a.b.
double sigma_correlation(const DetectorSetting& a, const DetectorSetting& b);

struct ChshSettings {
  DetectorSetting a;
  DetectorSetting a_prime;
  DetectorSetting b;
  DetectorSetting b_prime;

  /// Coplanar a = 0, a' = 90, b = 45, b' = 135 degrees.
  static ChshSettings optimal();
  /// a = 0, b = phi, a' = 2 phi, b' = 3 phi.
  static ChshSettings from_step(double phi);
};

/// S = E(a,b) - E(a,b') + E(a',b) + E(a',b') with E = sigma_correlation.
double chsh_value(const DetectorSetting& a, const DetectorSetting& a_prime,
                  const DetectorSetting& b, const DetectorSetting& b_prime);
double chsh_value(const ChshSettings& s);

struct CorrelationEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t shots = 0;
};

/// Shared-direction hidden-variable model: lambda uniform on the sphere,
/// A = sign(a.lambda), B = -sign(b.lambda). Analytic value -1 + 2 theta / pi.
CorrelationEstimate hv_baseline_estimate(const DetectorSetting& a, const DetectorSetting& b,
                                         std::uint64_t shots, CounterRng& rng);
double hv_baseline_correlation(const DetectorSetting& a, const DetectorSetting& b,
                               std::uint64_t shots, CounterRng& rng);
double hv_analytic_correlation(const DetectorSetting& a, const DetectorSetting& b);

/// Monte Carlo sigma-correlator on the singlet from joint (sigma.a, sigma.b)
/// readings, one event per shot.
CorrelationEstimate singlet_correlation_mc(const DetectorSetting& a, const DetectorSetting& b,
                                           std::uint64_t shots, CounterRng& rng);

struct ChshEstimate {
  double s = 0.0;
  double std_error = 0.0;  // quadrature sum of the four correlator errors
  std::array<CorrelationEstimate, 4> correlators;  // (a,b), (a,b'), (a',b), (a',b')
};

ChshEstimate chsh_hv(const ChshSettings& s, std::uint64_t shots_per_correlator, CounterRng& rng);
ChshEstimate chsh_quantum_mc(const ChshSettings& s, std::uint64_t shots_per_correlator,
                             CounterRng& rng);

/// (|uuu> - |ddd>) / sqrt(2).
PureState ghz_state();

enum class MerminOperator { kM1, kM2, kM3, kM4 };

std::string_view to_string(MerminOperator which);
/// Site bases: M1 = xyy, M2 = yxy, M3 = yyx, M4 = xxx.
std::array<char, 3> mermin_axes(MerminOperator which);
Matrix mermin_operator(MerminOperator which);
/// Quantum-mechanical value of the triple product: +1 for M1-M3, -1 for M4.
int mermin_product(MerminOperator which);

struct GhzOutcome {
  int m1 = 0;
  int m2 = 0;
  int m3 = 0;
  MerminOperator which = MerminOperator::kM1;
  std::uint64_t event_counter = 0;

  int product() const noexcept { return m1 * m2 * m3; }
};

/// One triple measurement on a freshly prepared GHZ state (one event).
GhzOutcome ghz_run(MerminOperator which, CounterRng& rng);

/// `runs` consecutive events. With cycle = true the operator rotates
/// M1, M2, M3, M4 by event counter; otherwise `which` is used throughout.
std::vector<GhzOutcome> ghz_runs(MerminOperator which, std::uint64_t runs, CounterRng& rng,
                                 bool cycle = false);

/// Number of site-shared +-1 assignments (m1x, m1y, m2x, m2y, m3x, m3y) that
/// satisfy all four Mermin product relations at once. Exhaustive over 64.
int count_classical_mermin_assignments();

struct GhzIncompatibilityReport {
  std::array<double, 6> operator_commutator_norms{};  // (1,2) (1,3) (1,4) (2,3) (2,4) (3,4)
  double site_commutator_norm = 0.0;                  // ||[sigma_1x, sigma_1y]||
  bool within_run_accepted = false;
  bool cross_run_rejected = false;
  std::array<int, 4> product_constraints{};
  int classical_solutions = -1;
};

GhzIncompatibilityReport ghz_incompatibility_demo();

void write_ghz_log(std::ostream& os, std::span<const GhzOutcome> runs);

}  // namespace qmlab
