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

// Outcome sampling, state-vector reduction, pointer-basis decoherence,
// joint measurement of commuting observables and metastable decay times.

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "qmlab/hilbert.hpp"
#include "qmlab/observables.hpp"
#include "qmlab/rng.hpp"
#include "qmlab/states.hpp"

namespace qmlab {

enum class ReductionMode { kRepeatable, kNonRepeatable };

std::string_view to_string(ReductionMode mode);

/// One measurement event. A repeatable record carries the reduced state; a
/// non-repeatable one does not, since the measured system is consumed.
struct MeasurementRecord {
  std::uint64_t event_counter = 0;
  std::size_t outcome_index = 0;
  double outcome_value = 0.0;
  ReductionMode mode = ReductionMode::kNonRepeatable;
  std::optional<PureState> post_state;
};

/// Branch weights <psi|Pi_n|psi> in spectrum order. Throws Error(kValidation)
/// if they do not sum to 1 within 1e-9.
std::vector<double> outcome_weights(const PureState& psi, const Observable& f);

/// Inverse-CDF pick of an index from weights summing to 1, given u in [0, 1).
/// Weights below 1e-14 are treated as impossible.
std::size_t sample_index(std::span<const double> weights, double u);

MeasurementRecord sample_outcome(const PureState& psi, const Observable& f, CounterRng& rng,
                                 ReductionMode mode = ReductionMode::kNonRepeatable);

/// Pi_n psi / ||Pi_n psi||. Throws Error(kImpossibleOutcome) when the branch
/// weight is at most 1e-12.
PureState collapse_repeatable(const PureState& psi, const Observable& f, std::size_t n);

/// Outcome histogram over `shots` consecutive events starting at
/// rng.next_event(). Shards run in parallel over disjoint event ranges; the
/// counts equal those of a sequential sample_outcome loop.
struct ShotCounts {
  std::vector<std::uint64_t> counts;
  std::uint64_t shots = 0;
  std::uint64_t first_event = 0;

  std::vector<double> frequencies() const;
};

ShotCounts sample_counts(std::span<const double> weights, std::uint64_t shots, CounterRng& rng,
                         unsigned shards = default_shards());

/// V^dagger rho V for the orthonormal columns V of `basis`.
Matrix to_basis(const Matrix& rho, const Matrix& basis);

/// Pointer-basis decoherence: rho is rotated into the pointer basis and its
/// off-diagonal elements are set to exactly zero. The result is expressed in
/// the pointer basis (row n <-> eigenvector n).
DensityMatrix decohere(const DensityMatrix& rho, const EigenDecomposition& pointer_basis);
DensityMatrix decohere(const DensityMatrix& rho, const Matrix& pointer_basis);

/// Simultaneous spectral data of pairwise-commuting observables.
///
/// Joint eigenspaces are found by diagonalizing the first observable and
/// then diagonalizing each further one restricted to the current joint
/// eigenspaces (membership tolerance 1e-8). Outcomes are ordered
/// lexicographically by their value tuples.
class JointMeasurement {
 public:
  /// Throws Error(kIncompatible) if any pair has ||[A, B]||_max >= 1e-10.
  explicit JointMeasurement(std::vector<Observable> observables);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t factor_count() const noexcept { return observables_.size(); }
  std::size_t outcome_count() const noexcept { return values_.size(); }
  std::span<const double> values(std::size_t outcome) const { return values_.at(outcome); }
  const Matrix& projector(std::size_t outcome) const { return projectors_.at(outcome); }
  /// Orthonormal joint eigenbasis, columns grouped by outcome.
  const Matrix& basis() const noexcept { return basis_; }

  std::vector<double> weights(const PureState& psi) const;

 private:
  std::vector<Observable> observables_;
  std::size_t dim_ = 0;
  Matrix basis_;
  std::vector<std::vector<double>> values_;
  std::vector<Matrix> projectors_;
};

struct JointRecord {
  std::uint64_t event_counter = 0;
  std::size_t outcome_index = 0;
  std::vector<double> values;  // one reading per observable, same event
  ReductionMode mode = ReductionMode::kNonRepeatable;
  std::optional<PureState> post_state;
};

JointRecord sample_joint(const JointMeasurement& joint, const PureState& psi, CounterRng& rng,
                         ReductionMode mode = ReductionMode::kNonRepeatable);

/// Joint reading of commuting F and G on one event.
JointRecord measure_joint(const PureState& psi, const Observable& f, const Observable& g,
                          CounterRng& rng, ReductionMode mode = ReductionMode::kNonRepeatable);

/// Unstable level with complex energy e_r - i gamma / 2 (hbar = 1).
struct MetastableSpec {
  double gamma = 1.0;
  double e_r = 0.0;

  double mean_lifetime() const { return 1.0 / gamma; }
};

/// Exponential decay time with rate gamma, by inverse CDF: -ln(u) / gamma.
double sample_decay_time(const MetastableSpec& spec, CounterRng& rng);

/// CSV shot log: event_counter, outcome_index, outcome_value, mode.
void write_shot_log(std::ostream& os, std::span<const MeasurementRecord> records);

}  // namespace qmlab
