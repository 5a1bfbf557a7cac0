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

// Outcome frequencies from moments <F^N>: the moment system over the
// distinct eigenvalues of F is a Vandermonde system, invertible exactly when
// the eigenvalues are distinct.

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "qmlab/observables.hpp"
#include "qmlab/states.hpp"

namespace qmlab {

/// Which powers of the nodes enter the linear system.
enum class MomentConvention {
  /// N = 0 .. D-1; the N = 0 row is the normalization sum P = 1. Valid for
  /// any distinct nodes, including zero.
  kWithNormalization,
  /// N = 1 .. D. Singular when a node is zero, so zero nodes are rejected.
  kPowersFromOne,
};

/// Distinct real nodes f_1..f_D with moments[N-1] = sum_n f_n^N P_n for N = 1..D.
struct MomentSystem {
  std::vector<double> nodes;
  std::vector<double> moments;
};

struct FrequencyTable {
  std::vector<double> outcomes;
  std::vector<double> frequencies;
  std::optional<std::vector<std::uint64_t>> counts;
  std::optional<std::uint64_t> seed;

  /// Throws Error(kValidation) if a frequency is below -1e-9 or the sum is
  /// off 1 by more than 1e-9.
  void validate() const;
};

struct Reconstruction {
  FrequencyTable table;
  double condition = 0.0;  // 1-norm condition of the row-equilibrated system
  double residual = 0.0;   // max |V P - m| / max |m| before clipping
  /// Largest mismatch on moments the chosen convention did not use.
  double unused_moment_mismatch = 0.0;
};

Reconstruction reconstruct_with_diagnostics(
    const MomentSystem& sys, MomentConvention convention = MomentConvention::kWithNormalization);

/// Solves sum_n f_n^N P_n = moment_N. Errors: kDegeneracy for repeated nodes,
/// kConvention for a zero node under kPowersFromOne, kConditioning when the
/// condition estimate exceeds 1e10, the residual exceeds 1e-8 or a
/// frequency comes out below -1e-9. Negative values above -1e-9 are clipped
/// and the table renormalized.
FrequencyTable reconstruct_frequencies(
    const MomentSystem& sys, MomentConvention convention = MomentConvention::kWithNormalization);

/// moments[N-1] = sum f^N P for N = 1..D.
MomentSystem forward_moments(const FrequencyTable& table, int max_power);

/// Moments N = 1..D of F on psi, with nodes = distinct eigenvalues of F.
MomentSystem moment_system(const PureState& psi, const Observable& f);

struct BornComparisonRow {
  double outcome = 0.0;
  double theoretical = 0.0;
  double empirical = 0.0;
  double std_error = 0.0;
  double z_score = 0.0;
};

struct BornComparison {
  std::vector<BornComparisonRow> rows;
  std::vector<std::uint64_t> counts;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;

  /// max |z| over outcomes.
  double max_abs_z() const;
};

/// Samples `shots` outcomes of F on psi and sets the empirical frequencies
/// beside |c_n|^2 and the binomial standard error sqrt(p(1-p)/shots).
BornComparison empirical_vs_born(const PureState& psi, const Observable& f,
                                 std::uint64_t shots, std::uint64_t seed);

/// CSV: outcome, theoretical, empirical, stderr, z_score.
void write_comparison_csv(std::ostream& os, const BornComparison& report);

}  // namespace qmlab
