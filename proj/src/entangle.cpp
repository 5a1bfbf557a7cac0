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

#include "qmlab/entangle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qmlab/csv.hpp"
#include "qmlab/measure.hpp"
#include "qmlab/observables.hpp"

namespace qmlab {

DetectorSetting::DetectorSetting(Vec3 direction) : direction_(direction) {
  const double n = std::sqrt(direction[0] * direction[0] + direction[1] * direction[1] +
                             direction[2] * direction[2]);
  if (!(std::abs(n - 1.0) <= tol::kOrthonormal)) {
    throw Error(ErrorKind::kValidation, "detector direction must be a unit vector");
  }
}

DetectorSetting DetectorSetting::in_plane(double theta) {
  return spherical(theta, 0.0);
}

DetectorSetting DetectorSetting::spherical(double theta, double phi) {
  return DetectorSetting(
      {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)});
}

double DetectorSetting::dot(const DetectorSetting& other) const {
  const auto& u = direction_;
  const auto& v = other.direction_;
  return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
}

double DetectorSetting::angle_to(const DetectorSetting& other) const {
  return std::acos(std::clamp(dot(other), -1.0, 1.0));
}

PureState singlet() {
  const double h = 1.0 / std::numbers::sqrt2;
  return PureState::normalized({0.0, h, -h, 0.0});
}

Matrix total_spin_squared() {
  Matrix s2(4, 4);
  for (const Matrix& p : {pauli_x(), pauli_y(), pauli_z()}) {
    const Matrix total = (embed(p, 0, 2) + embed(p, 1, 2)) * Complex(0.5);
    s2 += total * total;
  }
  return s2;
}

namespace {

Matrix sigma_along(const DetectorSetting& n) {
  const auto& d = n.direction();
  return pauli_x() * Complex(d[0]) + pauli_y() * Complex(d[1]) + pauli_z() * Complex(d[2]);
}

}  // namespace

Matrix spin_half_along(const DetectorSetting& n) { return sigma_along(n) * Complex(0.5); }

double spin_correlation(const DetectorSetting& a, const DetectorSetting& b) {
  static const DensityMatrix rho = to_density(singlet());
  return expectation(rho, kron(spin_half_along(a), spin_half_along(b)));
}

double sigma_correlation(const DetectorSetting& a, const DetectorSetting& b) {
  return 4.0 * spin_correlation(a, b);
}

ChshSettings ChshSettings::optimal() { return from_step(std::numbers::pi / 4.0); }

ChshSettings ChshSettings::from_step(double phi) {
  return ChshSettings{DetectorSetting::in_plane(0.0), DetectorSetting::in_plane(2.0 * phi),
                      DetectorSetting::in_plane(phi), DetectorSetting::in_plane(3.0 * phi)};
}

double chsh_value(const DetectorSetting& a, const DetectorSetting& a_prime,
                  const DetectorSetting& b, const DetectorSetting& b_prime) {
  return sigma_correlation(a, b) - sigma_correlation(a, b_prime) +
         sigma_correlation(a_prime, b) + sigma_correlation(a_prime, b_prime);
}

double chsh_value(const ChshSettings& s) { return chsh_value(s.a, s.a_prime, s.b, s.b_prime); }

namespace {

CorrelationEstimate finish_estimate(double sum, std::uint64_t shots) {
  CorrelationEstimate e;
  e.shots = shots;
  e.mean = sum / static_cast<double>(shots);
  e.std_error = std::sqrt(std::max(0.0, 1.0 - e.mean * e.mean) / static_cast<double>(shots));
  return e;
}

double sign_of(double x) { return x >= 0.0 ? 1.0 : -1.0; }

ChshEstimate combine(std::array<CorrelationEstimate, 4> c) {
  ChshEstimate out;
  out.correlators = c;
  out.s = c[0].mean - c[1].mean + c[2].mean + c[3].mean;
  double var = 0.0;
  for (const auto& e : c) var += e.std_error * e.std_error;
  out.std_error = std::sqrt(var);
  return out;
}

}  // namespace

CorrelationEstimate hv_baseline_estimate(const DetectorSetting& a, const DetectorSetting& b,
                                         std::uint64_t shots, CounterRng& rng) {
  if (shots == 0) throw Error(ErrorKind::kValidation, "shots must be at least 1");
  const std::uint64_t first = rng.next_event();
  const unsigned shards = default_shards();
  std::vector<long long> partial(shards);
  const CounterRng base = rng;
  for_each_shard(shots, shards, [&](unsigned s, std::uint64_t begin, std::uint64_t count) {
    CounterRng local = base;
    local.seek(first + begin);
    long long acc = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
      local.begin_event();
      const double z = 2.0 * local.uniform() - 1.0;
      const double phi = 2.0 * std::numbers::pi * local.uniform();
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const Vec3 lambda{r * std::cos(phi), r * std::sin(phi), z};
      const auto& da = a.direction();
      const auto& db = b.direction();
      const double ra = sign_of(da[0] * lambda[0] + da[1] * lambda[1] + da[2] * lambda[2]);
      const double rb = -sign_of(db[0] * lambda[0] + db[1] * lambda[1] + db[2] * lambda[2]);
      acc += static_cast<long long>(ra * rb);
    }
    partial[s] = acc;
  });
  rng.seek(first + shots);
  long long total = 0;
  for (auto p : partial) total += p;
  return finish_estimate(static_cast<double>(total), shots);
}

double hv_baseline_correlation(const DetectorSetting& a, const DetectorSetting& b,
                               std::uint64_t shots, CounterRng& rng) {
  return hv_baseline_estimate(a, b, shots, rng).mean;
}

double hv_analytic_correlation(const DetectorSetting& a, const DetectorSetting& b) {
  return -1.0 + 2.0 * a.angle_to(b) / std::numbers::pi;
}

CorrelationEstimate singlet_correlation_mc(const DetectorSetting& a, const DetectorSetting& b,
                                           std::uint64_t shots, CounterRng& rng) {
  if (shots == 0) throw Error(ErrorKind::kValidation, "shots must be at least 1");
  const JointMeasurement joint({Observable(kron(sigma_along(a), Matrix::identity(2))),
                                Observable(kron(Matrix::identity(2), sigma_along(b)))});
  const auto weights = joint.weights(singlet());
  const ShotCounts counts = sample_counts(weights, shots, rng);
  double sum = 0.0;
  for (std::size_t k = 0; k < joint.outcome_count(); ++k) {
    const auto v = joint.values(k);
    sum += static_cast<double>(counts.counts[k]) * std::round(v[0]) * std::round(v[1]);
  }
  return finish_estimate(sum, shots);
}

ChshEstimate chsh_hv(const ChshSettings& s, std::uint64_t shots, CounterRng& rng) {
  return combine({hv_baseline_estimate(s.a, s.b, shots, rng),
                  hv_baseline_estimate(s.a, s.b_prime, shots, rng),
                  hv_baseline_estimate(s.a_prime, s.b, shots, rng),
                  hv_baseline_estimate(s.a_prime, s.b_prime, shots, rng)});
}

ChshEstimate chsh_quantum_mc(const ChshSettings& s, std::uint64_t shots, CounterRng& rng) {
  return combine({singlet_correlation_mc(s.a, s.b, shots, rng),
                  singlet_correlation_mc(s.a, s.b_prime, shots, rng),
                  singlet_correlation_mc(s.a_prime, s.b, shots, rng),
                  singlet_correlation_mc(s.a_prime, s.b_prime, shots, rng)});
}

PureState ghz_state() {
  std::vector<Complex> v(8);
  v[0] = 1.0 / std::numbers::sqrt2;
  v[7] = -1.0 / std::numbers::sqrt2;
  return PureState::normalized(std::move(v));
}

std::string_view to_string(MerminOperator which) {
  switch (which) {
    case MerminOperator::kM1: return "M1";
    case MerminOperator::kM2: return "M2";
    case MerminOperator::kM3: return "M3";
    case MerminOperator::kM4: return "M4";
  }
  return "?";
}

std::array<char, 3> mermin_axes(MerminOperator which) {
  switch (which) {
    case MerminOperator::kM1: return {'x', 'y', 'y'};
    case MerminOperator::kM2: return {'y', 'x', 'y'};
    case MerminOperator::kM3: return {'y', 'y', 'x'};
    case MerminOperator::kM4: return {'x', 'x', 'x'};
  }
  return {'x', 'x', 'x'};
}

namespace {

Matrix site_pauli(char axis) { return axis == 'x' ? pauli_x() : pauli_y(); }

constexpr std::array<MerminOperator, 4> kAllMermin = {
    MerminOperator::kM1, MerminOperator::kM2, MerminOperator::kM3, MerminOperator::kM4};

struct GhzSetup {
  JointMeasurement joint;
  std::vector<double> weights;
  std::vector<std::array<int, 3>> readings;
};

GhzSetup make_setup(MerminOperator which) {
  const auto axes = mermin_axes(which);
  std::vector<Observable> sites;
  for (std::size_t s = 0; s < 3; ++s) sites.emplace_back(embed(site_pauli(axes[s]), s, 3));
  JointMeasurement joint(std::move(sites));
  auto weights = joint.weights(ghz_state());
  std::vector<std::array<int, 3>> readings;
  for (std::size_t k = 0; k < joint.outcome_count(); ++k) {
    const auto v = joint.values(k);
    readings.push_back({static_cast<int>(std::lround(v[0])), static_cast<int>(std::lround(v[1])),
                        static_cast<int>(std::lround(v[2]))});
  }
  return GhzSetup{std::move(joint), std::move(weights), std::move(readings)};
}

const GhzSetup& setup_for(MerminOperator which) {
  static const std::array<GhzSetup, 4> setups = {
      make_setup(MerminOperator::kM1), make_setup(MerminOperator::kM2),
      make_setup(MerminOperator::kM3), make_setup(MerminOperator::kM4)};
  return setups[static_cast<std::size_t>(which)];
}

GhzOutcome run_event(MerminOperator which, CounterRng& rng) {
  const GhzSetup& setup = setup_for(which);
  GhzOutcome out;
  out.which = which;
  out.event_counter = rng.begin_event();
  const auto& r = setup.readings[sample_index(setup.weights, rng.uniform())];
  out.m1 = r[0];
  out.m2 = r[1];
  out.m3 = r[2];
  return out;
}

}  // namespace

Matrix mermin_operator(MerminOperator which) {
  const auto axes = mermin_axes(which);
  return kron(kron(site_pauli(axes[0]), site_pauli(axes[1])), site_pauli(axes[2]));
}

int mermin_product(MerminOperator which) { return which == MerminOperator::kM4 ? -1 : 1; }

GhzOutcome ghz_run(MerminOperator which, CounterRng& rng) { return run_event(which, rng); }

std::vector<GhzOutcome> ghz_runs(MerminOperator which, std::uint64_t runs, CounterRng& rng,
                                 bool cycle) {
  const std::uint64_t first = rng.next_event();
  const unsigned shards = default_shards();
  std::vector<std::vector<GhzOutcome>> partial(shards);
  for (auto op : kAllMermin) setup_for(op);
  const CounterRng base = rng;
  for_each_shard(runs, shards, [&](unsigned s, std::uint64_t begin, std::uint64_t count) {
    CounterRng local = base;
    local.seek(first + begin);
    partial[s].reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      const std::uint64_t event = first + begin + i;
      const MerminOperator op = cycle ? kAllMermin[event % 4] : which;
      partial[s].push_back(run_event(op, local));
    }
  });
  rng.seek(first + runs);
  std::vector<GhzOutcome> out;
  out.reserve(runs);
  for (auto& p : partial) out.insert(out.end(), p.begin(), p.end());
  return out;
}

int count_classical_mermin_assignments() {
  int solutions = 0;
  for (int bits = 0; bits < 64; ++bits) {
    auto value = [bits](int i) { return (bits >> i) & 1 ? -1 : 1; };
    const int m1x = value(0), m1y = value(1), m2x = value(2);
    const int m2y = value(3), m3x = value(4), m3y = value(5);
    const bool ok = m1x * m2y * m3y == 1 && m1y * m2x * m3y == 1 && m1y * m2y * m3x == 1 &&
                    m1x * m2x * m3x == -1;
    if (ok) ++solutions;
  }
  return solutions;
}

GhzIncompatibilityReport ghz_incompatibility_demo() {
  GhzIncompatibilityReport report;
  std::size_t k = 0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) {
      report.operator_commutator_norms[k++] = max_norm(
          commutator(mermin_operator(kAllMermin[i]), mermin_operator(kAllMermin[j])));
    }
  report.site_commutator_norm = max_norm(commutator(pauli_x(), pauli_y()));

  try {
    const JointMeasurement within({Observable(embed(pauli_x(), 0, 3)),
                                   Observable(embed(pauli_y(), 1, 3)),
                                   Observable(embed(pauli_y(), 2, 3))});
    report.within_run_accepted = within.outcome_count() == 8;
  } catch (const Error&) {
    report.within_run_accepted = false;
  }
  // Reusing site 1's x reading (from M1) alongside its y reading (from M2)
  // would need both on one event.
  try {
    const JointMeasurement cross({Observable(embed(pauli_x(), 0, 3)),
                                  Observable(embed(pauli_y(), 0, 3))});
    report.cross_run_rejected = false;
  } catch (const Error& e) {
    report.cross_run_rejected = e.kind() == ErrorKind::kIncompatible;
  }
  for (std::size_t i = 0; i < 4; ++i) report.product_constraints[i] = mermin_product(kAllMermin[i]);
  report.classical_solutions = count_classical_mermin_assignments();
  return report;
}

void write_ghz_log(std::ostream& os, std::span<const GhzOutcome> runs) {
  csv::header(os, {"event_counter", "which", "m1", "m2", "m3", "product"});
  for (const auto& r : runs) {
    csv::RowWriter(os) << r.event_counter << to_string(r.which) << r.m1 << r.m2 << r.m3
                       << r.product();
  }
}

}  // namespace qmlab
