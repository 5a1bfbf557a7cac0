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

#include "qmlab/born.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "qmlab/csv.hpp"
#include "qmlab/measure.hpp"
#include "qmlab/rng.hpp"

namespace qmlab {

void FrequencyTable::validate() const {
  if (outcomes.size() != frequencies.size()) {
    throw Error(ErrorKind::kShape, "frequency table: outcome/frequency length mismatch");
  }
  double total = 0.0;
  for (double p : frequencies) {
    if (!(p >= -1e-9)) throw Error(ErrorKind::kValidation, "frequency table: negative entry");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "frequency table sums to " << total;
    throw Error(ErrorKind::kValidation, os.str());
  }
}

namespace {

void check_nodes(const MomentSystem& sys, MomentConvention convention) {
  const auto& f = sys.nodes;
  if (f.empty()) throw Error(ErrorKind::kValidation, "moment system has no nodes");
  if (sys.moments.size() != f.size()) {
    throw Error(ErrorKind::kShape, "moment system needs one moment per node (N = 1..D)");
  }
  for (double x : f)
    if (!std::isfinite(x)) throw Error(ErrorKind::kValidation, "non-finite node");
  for (double m : sys.moments)
    if (!std::isfinite(m)) throw Error(ErrorKind::kValidation, "non-finite moment");

  const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
  const double spread = *hi - *lo;
  for (std::size_t a = 0; a < f.size(); ++a)
    for (std::size_t b = a + 1; b < f.size(); ++b) {
      if (std::abs(f[a] - f[b]) <= 1e-9 * spread || f[a] == f[b]) {
        std::ostringstream os;
        os << "nodes " << a << " and " << b << " coincide (" << f[a]
           << "); measure commuting observables jointly to resolve a degenerate eigenvalue";
        throw Error(ErrorKind::kDegeneracy, os.str());
      }
    }

  if (convention == MomentConvention::kPowersFromOne) {
    const double scale = std::max(1.0, std::max(std::abs(*lo), std::abs(*hi)));
    for (std::size_t n = 0; n < f.size(); ++n) {
      if (std::abs(f[n]) <= 1e-12 * scale) {
        throw Error(ErrorKind::kConvention,
                    "node " + std::to_string(n) +
                        " is zero, which makes the N = 1..D system singular; use the "
                        "normalization convention (N = 0..D-1)");
      }
    }
  }
}

}  // namespace

Reconstruction reconstruct_with_diagnostics(const MomentSystem& sys,
                                            MomentConvention convention) {
  check_nodes(sys, convention);
  const std::size_t d = sys.nodes.size();
  const int first_power = convention == MomentConvention::kWithNormalization ? 0 : 1;

  Matrix v(d, d);
  Matrix rhs(d, 1);
  for (std::size_t row = 0; row < d; ++row) {
    const int power = first_power + static_cast<int>(row);
    for (std::size_t n = 0; n < d; ++n) v(row, n) = std::pow(sys.nodes[n], power);
    rhs(row, 0) = power == 0 ? 1.0 : sys.moments[static_cast<std::size_t>(power - 1)];
  }

  // Row equilibration leaves the solution unchanged and keeps the condition
  // estimate meaningful when node magnitudes differ from 1.
  Matrix scaled = v;
  Matrix scaled_rhs = rhs;
  for (std::size_t row = 0; row < d; ++row) {
    double big = 0.0;
    for (std::size_t n = 0; n < d; ++n) big = std::max(big, std::abs(v(row, n)));
    for (std::size_t n = 0; n < d; ++n) scaled(row, n) /= big;
    scaled_rhs(row, 0) /= big;
  }

  Reconstruction out;
  out.condition = condition_estimate(scaled);
  if (!(out.condition <= 1e10)) {
    std::ostringstream os;
    os << "moment system condition estimate " << out.condition << " exceeds 1e10";
    throw Error(ErrorKind::kConditioning, os.str());
  }
  const Matrix x = solve_linear(scaled, scaled_rhs);

  std::vector<double> p(d);
  for (std::size_t n = 0; n < d; ++n) p[n] = x(n, 0).real();

  double resid = 0.0;
  double scale = 0.0;
  for (std::size_t row = 0; row < d; ++row) {
    double acc = 0.0;
    for (std::size_t n = 0; n < d; ++n) acc += v(row, n).real() * p[n];
    resid = std::max(resid, std::abs(acc - rhs(row, 0).real()));
    scale = std::max(scale, std::abs(rhs(row, 0).real()));
  }
  out.residual = scale > 0.0 ? resid / scale : resid;
  if (out.residual > 1e-8) {
    std::ostringstream os;
    os << "moment solve residual " << out.residual << " exceeds 1e-8";
    throw Error(ErrorKind::kConditioning, os.str());
  }

  // Moments the convention left out serve as a consistency check.
  const int last_power = first_power + static_cast<int>(d) - 1;
  for (int power = 1; power <= static_cast<int>(d); ++power) {
    if (power >= first_power && power <= last_power) continue;
    double acc = 0.0;
    for (std::size_t n = 0; n < d; ++n) acc += std::pow(sys.nodes[n], power) * p[n];
    out.unused_moment_mismatch = std::max(
        out.unused_moment_mismatch, std::abs(acc - sys.moments[static_cast<std::size_t>(power - 1)]));
  }

  for (std::size_t n = 0; n < d; ++n) {
    if (p[n] < -1e-9) {
      std::ostringstream os;
      os << "reconstructed frequency " << n << " is " << p[n]
         << "; the moments are inconsistent or the system is too ill-conditioned";
      throw Error(ErrorKind::kConditioning, os.str());
    }
    p[n] = std::max(p[n], 0.0);
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  if (!(total > 0.0)) throw Error(ErrorKind::kConditioning, "reconstructed frequencies vanish");
  for (auto& x2 : p) x2 /= total;

  out.table.outcomes = sys.nodes;
  out.table.frequencies = std::move(p);
  return out;
}

FrequencyTable reconstruct_frequencies(const MomentSystem& sys, MomentConvention convention) {
  return reconstruct_with_diagnostics(sys, convention).table;
}

MomentSystem forward_moments(const FrequencyTable& table, int max_power) {
  table.validate();
  if (max_power < 1) throw Error(ErrorKind::kValidation, "moment order must be positive");
  MomentSystem out;
  out.nodes = table.outcomes;
  out.moments.resize(static_cast<std::size_t>(max_power));
  for (int power = 1; power <= max_power; ++power) {
    double acc = 0.0;
    for (std::size_t n = 0; n < table.outcomes.size(); ++n) {
      acc += std::pow(table.outcomes[n], power) * table.frequencies[n];
    }
    out.moments[static_cast<std::size_t>(power - 1)] = acc;
  }
  return out;
}

MomentSystem moment_system(const PureState& psi, const Observable& f) {
  MomentSystem out;
  out.nodes.assign(f.spectrum().begin(), f.spectrum().end());
  for (std::size_t power = 1; power <= f.outcome_count(); ++power) {
    out.moments.push_back(moment(psi, f, static_cast<int>(power)));
  }
  return out;
}

double BornComparison::max_abs_z() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, std::abs(r.z_score));
  return m;
}

BornComparison empirical_vs_born(const PureState& psi, const Observable& f,
                                 std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw Error(ErrorKind::kValidation, "shots must be at least 1");
  const auto weights = outcome_weights(psi, f);
  CounterRng rng(seed);
  const ShotCounts counts = sample_counts(weights, shots, rng);
  const auto empirical = counts.frequencies();

  BornComparison out;
  out.counts = counts.counts;
  out.shots = shots;
  out.seed = seed;
  for (std::size_t n = 0; n < weights.size(); ++n) {
    BornComparisonRow row;
    row.outcome = f.spectrum()[n];
    row.theoretical = weights[n];
    row.empirical = empirical[n];
    row.std_error = std::sqrt(weights[n] * (1.0 - weights[n]) / static_cast<double>(shots));
    const double diff = row.empirical - row.theoretical;
    if (row.std_error > 0.0) {
      row.z_score = diff / row.std_error;
    } else {
      row.z_score = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    }
    out.rows.push_back(row);
  }
  return out;
}

void write_comparison_csv(std::ostream& os, const BornComparison& report) {
  csv::header(os, {"outcome", "theoretical", "empirical", "stderr", "z_score"});
  for (const auto& r : report.rows) {
    csv::RowWriter(os) << r.outcome << r.theoretical << r.empirical << r.std_error << r.z_score;
  }
}

}  // namespace qmlab
