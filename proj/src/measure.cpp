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

#include "qmlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qmlab/csv.hpp"

namespace qmlab {

std::string_view to_string(ReductionMode mode) {
  return mode == ReductionMode::kRepeatable ? "repeatable" : "non_repeatable";
}

namespace {

constexpr double kImpossibleWeight = 1e-14;

void require_unit_sum(std::span<const double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "outcome weights sum to " << total << " instead of 1";
    throw Error(ErrorKind::kValidation, os.str());
  }
}

// Normalized projection of psi onto span{basis columns in `cols`}.
PureState project(const PureState& psi, const Matrix& basis, std::span<const std::size_t> cols) {
  std::vector<Complex> out(psi.dim());
  for (std::size_t k : cols) {
    Complex overlap{};
    for (std::size_t i = 0; i < psi.dim(); ++i) overlap += std::conj(basis(i, k)) * psi[i];
    for (std::size_t i = 0; i < psi.dim(); ++i) out[i] += basis(i, k) * overlap;
  }
  return PureState::normalized(std::move(out));
}

}  // namespace

std::vector<double> outcome_weights(const PureState& psi, const Observable& f) {
  auto w = projector_frequencies(psi, f);
  require_unit_sum(w);
  return w;
}

std::size_t sample_index(std::span<const double> weights, double u) {
  double raw = 0.0, total = 0.0;
  for (double w : weights) {
    raw += w;
    total += w >= kImpossibleWeight ? w : 0.0;
  }
  if (!(std::abs(raw - 1.0) <= 1e-9)) {
    throw Error(ErrorKind::kValidation, "outcome weights sum to " + std::to_string(raw));
  }
  const double target = u * total;
  double cumulative = 0.0;
  std::size_t last_possible = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < kImpossibleWeight) continue;
    cumulative += weights[i];
    last_possible = i;
    if (target < cumulative) return i;
  }
  return last_possible;
}

MeasurementRecord sample_outcome(const PureState& psi, const Observable& f, CounterRng& rng,
                                 ReductionMode mode) {
  const auto weights = outcome_weights(psi, f);
  MeasurementRecord rec;
  rec.event_counter = rng.begin_event();
  rec.outcome_index = sample_index(weights, rng.uniform());
  rec.outcome_value = f.spectrum()[rec.outcome_index];
  rec.mode = mode;
  if (mode == ReductionMode::kRepeatable) {
    rec.post_state = collapse_repeatable(psi, f, rec.outcome_index);
  }
  return rec;
}

PureState collapse_repeatable(const PureState& psi, const Observable& f, std::size_t n) {
  const double weight = projector_frequency(psi, f, n);
  if (weight <= 1e-12) {
    std::ostringstream os;
    os << "outcome " << n << " (value " << f.spectrum()[n] << ") has weight " << weight;
    throw Error(ErrorKind::kImpossibleOutcome, os.str());
  }
  return project(psi, f.eigen().eigenvectors, f.eigenvector_indices(n));
}

std::vector<double> ShotCounts::frequencies() const {
  std::vector<double> out(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out[i] = shots ? static_cast<double>(counts[i]) / static_cast<double>(shots) : 0.0;
  }
  return out;
}

ShotCounts sample_counts(std::span<const double> weights, std::uint64_t shots, CounterRng& rng,
                         unsigned shards) {
  require_unit_sum(weights);
  ShotCounts out;
  out.shots = shots;
  out.first_event = rng.next_event();
  out.counts.assign(weights.size(), 0);
  std::vector<std::vector<std::uint64_t>> partial(std::max(1u, shards),
                                                  std::vector<std::uint64_t>(weights.size()));
  const CounterRng base = rng;
  for_each_shard(shots, shards, [&](unsigned s, std::uint64_t first, std::uint64_t count) {
    CounterRng local = base;
    local.seek(out.first_event + first);
    for (std::uint64_t i = 0; i < count; ++i) {
      local.begin_event();
      ++partial[s][sample_index(weights, local.uniform())];
    }
  });
  for (const auto& p : partial)
    for (std::size_t i = 0; i < p.size(); ++i) out.counts[i] += p[i];
  rng.seek(out.first_event + shots);
  return out;
}

Matrix to_basis(const Matrix& rho, const Matrix& basis) {
  return dagger(basis) * rho * basis;
}

DensityMatrix decohere(const DensityMatrix& rho, const Matrix& pointer_basis) {
  if (pointer_basis.rows() != rho.dim() || pointer_basis.cols() != rho.dim()) {
    throw Error(ErrorKind::kShape, "pointer basis does not match density matrix");
  }
  const Matrix rotated = to_basis(rho.matrix(), pointer_basis);
  Matrix diag(rho.dim(), rho.dim());
  for (std::size_t i = 0; i < rho.dim(); ++i) diag(i, i) = rotated(i, i).real();
  return DensityMatrix(std::move(diag));
}

DensityMatrix decohere(const DensityMatrix& rho, const EigenDecomposition& pointer_basis) {
  return decohere(rho, pointer_basis.eigenvectors);
}

JointMeasurement::JointMeasurement(std::vector<Observable> observables)
    : observables_(std::move(observables)) {
  if (observables_.empty()) throw Error(ErrorKind::kShape, "joint measurement needs an observable");
  dim_ = observables_.front().dim();
  for (const auto& o : observables_) {
    if (o.dim() != dim_) throw Error(ErrorKind::kShape, "joint observables differ in dimension");
  }
  for (std::size_t a = 0; a < observables_.size(); ++a)
    for (std::size_t b = a + 1; b < observables_.size(); ++b) {
      const double c = max_norm(commutator(observables_[a].matrix(), observables_[b].matrix()));
      if (c >= 1e-10) {
        std::ostringstream os;
        os << "observables " << a << " and " << b << " do not commute (||[A,B]|| = " << c
           << "); they cannot be read on one event";
        throw Error(ErrorKind::kIncompatible, os.str());
      }
    }

  struct Group {
    Matrix vectors;  // dim x k
    std::vector<double> values;
  };
  std::vector<Group> groups{{Matrix::identity(dim_), {}}};

  for (const auto& obs : observables_) {
    std::vector<Group> refined;
    for (const auto& g : groups) {
      const Matrix& w = g.vectors;
      Matrix sub = dagger(w) * obs.matrix() * w;
      sub = (sub + dagger(sub)) * Complex(0.5);
      const EigenDecomposition eig = hermitian_eig(sub);
      const Matrix rotated = w * eig.eigenvectors;
      const double gap = 1e-8 * std::max(1.0, max_norm(obs.matrix()));

      std::size_t start = 0;
      for (std::size_t k = 1; k <= eig.dim(); ++k) {
        if (k < eig.dim() && eig.eigenvalues[k] - eig.eigenvalues[k - 1] <= gap) continue;
        Group next;
        next.vectors = Matrix(dim_, k - start);
        double sum = 0.0;
        for (std::size_t c = start; c < k; ++c) {
          sum += eig.eigenvalues[c];
          for (std::size_t r = 0; r < dim_; ++r) next.vectors(r, c - start) = rotated(r, c);
        }
        next.values = g.values;
        next.values.push_back(sum / static_cast<double>(k - start));
        refined.push_back(std::move(next));
        start = k;
      }
    }
    groups = std::move(refined);
  }

  std::stable_sort(groups.begin(), groups.end(),
                   [](const Group& a, const Group& b) { return a.values < b.values; });

  basis_ = Matrix(dim_, dim_);
  std::size_t col = 0;
  for (auto& g : groups) {
    Matrix proj(dim_, dim_);
    for (std::size_t c = 0; c < g.vectors.cols(); ++c, ++col) {
      for (std::size_t r = 0; r < dim_; ++r) basis_(r, col) = g.vectors(r, c);
      for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t s = 0; s < dim_; ++s)
          proj(r, s) += g.vectors(r, c) * std::conj(g.vectors(s, c));
    }
    values_.push_back(std::move(g.values));
    projectors_.push_back(std::move(proj));
  }
}

std::vector<double> JointMeasurement::weights(const PureState& psi) const {
  if (psi.dim() != dim_) throw Error(ErrorKind::kShape, "state does not match joint observables");
  std::vector<double> out;
  out.reserve(outcome_count());
  for (const auto& p : projectors_) {
    out.push_back(std::clamp(inner(psi.amplitudes(), apply(p, psi.amplitudes())).real(), 0.0, 1.0));
  }
  require_unit_sum(out);
  return out;
}

JointRecord sample_joint(const JointMeasurement& joint, const PureState& psi, CounterRng& rng,
                         ReductionMode mode) {
  const auto w = joint.weights(psi);
  JointRecord rec;
  rec.event_counter = rng.begin_event();
  rec.outcome_index = sample_index(w, rng.uniform());
  const auto v = joint.values(rec.outcome_index);
  rec.values.assign(v.begin(), v.end());
  rec.mode = mode;
  if (mode == ReductionMode::kRepeatable) {
    const Matrix& p = joint.projector(rec.outcome_index);
    rec.post_state = PureState::normalized(apply(p, psi.amplitudes()));
  }
  return rec;
}

JointRecord measure_joint(const PureState& psi, const Observable& f, const Observable& g,
                          CounterRng& rng, ReductionMode mode) {
  return sample_joint(JointMeasurement({f, g}), psi, rng, mode);
}

double sample_decay_time(const MetastableSpec& spec, CounterRng& rng) {
  if (!(spec.gamma > 0.0) || !std::isfinite(spec.gamma)) {
    throw Error(ErrorKind::kValidation, "decay rate must be positive");
  }
  rng.begin_event();
  return -std::log(rng.uniform_open_low()) / spec.gamma;
}

void write_shot_log(std::ostream& os, std::span<const MeasurementRecord> records) {
  csv::header(os, {"event_counter", "outcome_index", "outcome_value", "mode"});
  for (const auto& r : records) {
    csv::RowWriter(os) << r.event_counter << r.outcome_index << r.outcome_value
                       << to_string(r.mode);
  }
}

}  // namespace qmlab
