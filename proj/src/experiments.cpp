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

#include "qmlab/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "qmlab/born.hpp"
#include "qmlab/csv.hpp"
#include "qmlab/entangle.hpp"
#include "qmlab/error.hpp"
#include "qmlab/measure.hpp"
#include "qmlab/observables.hpp"
#include "qmlab/rng.hpp"
#include "qmlab/states.hpp"
#include "qmlab/wavepacket.hpp"

namespace qmlab {

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::kConfig, what); }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

/// Accepts decimals and simple fractions such as "3/2".
double parse_number(const std::string& key, const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const double num = parse_number(key, trim(text.substr(0, slash)));
    const double den = parse_number(key, trim(text.substr(slash + 1)));
    if (den == 0.0) config_error("parameter " + key + ": zero denominator");
    return num / den;
  }
  double value = 0.0;
  const std::string t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(value)) {
    config_error("parameter " + key + ": '" + text + "' is not a number");
  }
  return value;
}

/// Typed access to the string parameters. Every lookup records the value
/// actually used so the sidecar can echo defaults too.
class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& raw) : raw_(raw) {}

  double number(const std::string& key, double fallback) {
    const auto it = raw_.find(key);
    const double v = it == raw_.end() ? fallback : parse_number(key, it->second);
    resolved_[key] = v;
    return v;
  }

  std::uint64_t count(const std::string& key, std::uint64_t fallback) {
    const double v = number(key, static_cast<double>(fallback));
    if (v < 0.0 || v != std::floor(v) || v > 1e15) {
      config_error("parameter " + key + " must be a non-negative integer");
    }
    resolved_[key] = static_cast<std::uint64_t>(v);
    return static_cast<std::uint64_t>(v);
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const auto it = raw_.find(key);
    std::string v = it == raw_.end() ? fallback : it->second;
    resolved_[key] = v;
    return v;
  }

  std::vector<double> list(const std::string& key, const std::vector<double>& fallback) {
    const auto it = raw_.find(key);
    std::vector<double> out = fallback;
    if (it != raw_.end()) {
      out.clear();
      std::stringstream ss(it->second);
      std::string item;
      while (std::getline(ss, item, ',')) out.push_back(parse_number(key, item));
    }
    resolved_[key] = out;
    return out;
  }

  /// Overwrites the recorded value, for defaults derived from other inputs.
  void record(const std::string& key, double value) { resolved_[key] = value; }

  /// Rejects parameters the experiment never looked at.
  void require_all_used() const {
    for (const auto& [k, v] : raw_) {
      if (!resolved_.contains(k)) config_error("unknown parameter '" + k + "'");
    }
  }

  const nlohmann::json& resolved() const { return resolved_; }

 private:
  const std::map<std::string, std::string>& raw_;
  nlohmann::json resolved_ = nlohmann::json::object();
};

void require(bool ok, const std::string& what) {
  if (!ok) config_error(what);
}

const Observable& spin_component(const SpinSystem& spin, const std::string& axis) {
  if (axis == "x") return spin.jx;
  if (axis == "y") return spin.jy;
  if (axis == "z") return spin.jz;
  config_error("axis must be x, y or z");
}

PureState random_state(std::size_t dim, CounterRng& rng) {
  std::vector<Complex> v(dim);
  rng.begin_event();
  for (auto& c : v) {
    // Box-Muller pairs give a Haar-random direction after normalization.
    const double u1 = rng.uniform_open_low();
    const double u2 = rng.uniform();
    const double u3 = rng.uniform_open_low();
    const double u4 = rng.uniform();
    c = Complex(std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2),
                std::sqrt(-2.0 * std::log(u3)) * std::cos(2.0 * std::numbers::pi * u4));
  }
  return PureState::normalized(std::move(v));
}

PureState spin_state(const SpinSystem& spin, const std::string& state, CounterRng& rng) {
  if (state == "highest-weight") return spin.state(spin.j);
  if (state == "lowest-weight") return spin.state(-spin.j);
  if (state == "random") return random_state(spin.dim(), rng);
  if (state.rfind("m=", 0) == 0) {
    const double m = parse_number("state", state.substr(2));
    try {
      return spin.state(m);
    } catch (const Error& e) {
      config_error(e.what());
    }
  }
  config_error("state must be highest-weight, lowest-weight, random or m=<value>");
}

SpinSystem checked_spin(double j) {
  require(j >= 0.0 && j <= 20.0, "j must lie in [0, 20]");
  try {
    return make_spin(j);
  } catch (const Error& e) {
    config_error(e.what());
  }
}

// ---------------------------------------------------------------------------

nlohmann::json run_spin_frequencies(Params& p, std::uint64_t seed, std::uint64_t shots,
                                    std::ostream& out) {
  const SpinSystem spin = checked_spin(p.number("j", 1.5));
  const std::string axis = p.text("axis", "x");
  CounterRng state_rng = CounterRng(seed).split(1);
  const PureState psi = spin_state(spin, p.text("state", "highest-weight"), state_rng);
  const Observable& f = spin_component(spin, axis);
  const std::string shot_log = p.text("shot_log", "");

  const BornComparison report = empirical_vs_born(psi, f, shots, seed);
  write_comparison_csv(out, report);

  nlohmann::json summary;
  summary["max_abs_z"] = report.max_abs_z();
  try {
    const auto rec = reconstruct_with_diagnostics(moment_system(psi, f));
    summary["reconstructed"] = rec.table.frequencies;
    summary["condition"] = rec.condition;
  } catch (const Error& e) {
    summary["reconstruction_error"] = e.what();
  }

  if (!shot_log.empty()) {
    // Replays the same events one at a time; outcomes match the counts above.
    CounterRng rng(seed);
    std::vector<MeasurementRecord> records;
    records.reserve(shots);
    for (std::uint64_t s = 0; s < shots; ++s) records.push_back(sample_outcome(psi, f, rng));
    std::ofstream log(shot_log, std::ios::binary);
    if (!log) config_error("cannot open shot log " + shot_log);
    write_shot_log(log, records);
    summary["shot_log"] = shot_log;
  }
  return summary;
}

nlohmann::json run_born_reconstruct(Params& p, std::uint64_t, std::uint64_t,
                                    std::ostream& out) {
  MomentSystem sys;
  sys.nodes = p.list("nodes", {-1.5, -0.5, 0.5, 1.5});
  sys.moments = p.list("moments", {0.0, 0.75, 0.0, 21.0 / 16.0});
  const std::string conv = p.text("convention", "normalization");
  MomentConvention convention;
  if (conv == "normalization") {
    convention = MomentConvention::kWithNormalization;
  } else if (conv == "powers-from-one") {
    convention = MomentConvention::kPowersFromOne;
  } else {
    config_error("convention must be normalization or powers-from-one");
  }
  require(sys.nodes.size() == sys.moments.size(), "need one moment per node");

  const Reconstruction rec = reconstruct_with_diagnostics(sys, convention);
  csv::header(out, {"outcome", "frequency"});
  for (std::size_t n = 0; n < rec.table.outcomes.size(); ++n) {
    csv::RowWriter(out) << rec.table.outcomes[n] << rec.table.frequencies[n];
  }
  return {{"condition", rec.condition},
          {"residual", rec.residual},
          {"unused_moment_mismatch", rec.unused_moment_mismatch}};
}

nlohmann::json run_decoherence(Params& p, std::uint64_t seed, std::uint64_t,
                               std::ostream& out) {
  const SpinSystem spin = checked_spin(p.number("j", 1.5));
  const Observable& pointer = spin_component(spin, p.text("axis", "x"));
  CounterRng rng(seed);
  const PureState psi = spin_state(spin, p.text("state", "highest-weight"), rng);

  const DensityMatrix rho = to_density(psi);
  const DensityMatrix before(to_basis(rho.matrix(), pointer.eigen().eigenvectors));
  const DensityMatrix after = decohere(rho, pointer.eigen());
  const Matrix pointer_diag = Matrix::diagonal(pointer.eigen().eigenvalues);

  csv::header(out, {"row", "col", "pointer_value_row", "before_re", "before_im", "after_re",
                    "after_im"});
  for (std::size_t r = 0; r < rho.dim(); ++r)
    for (std::size_t c = 0; c < rho.dim(); ++c) {
      csv::RowWriter(out) << r << c << pointer.eigen().eigenvalues[r] << before(r, c).real()
                          << before(r, c).imag() << after(r, c).real() << after(r, c).imag();
    }
  return {{"purity_before", purity(before)},
          {"purity_after", purity(after)},
          {"expectation_before", expectation(before, pointer_diag)},
          {"expectation_after", expectation(after, pointer_diag)}};
}

nlohmann::json run_epr_correlation(Params& p, std::uint64_t seed, std::uint64_t shots,
                                   std::ostream& out) {
  const std::uint64_t steps = p.count("steps", 13);
  require(steps >= 2, "steps must be at least 2");
  CounterRng rng(seed);
  csv::header(out, {"theta", "spin_correlation", "sigma_correlation", "monte_carlo",
                    "std_error", "z_score"});
  double worst = 0.0;
  const DetectorSetting a = DetectorSetting::in_plane(0.0);
  for (std::uint64_t i = 0; i < steps; ++i) {
    const double theta = std::numbers::pi * static_cast<double>(i) / static_cast<double>(steps - 1);
    const DetectorSetting b = DetectorSetting::in_plane(theta);
    const double s = spin_correlation(a, b);
    const auto mc = singlet_correlation_mc(a, b, shots, rng);
    const double z = mc.std_error > 0.0 ? (mc.mean - 4.0 * s) / mc.std_error : 0.0;
    worst = std::max(worst, std::abs(z));
    csv::RowWriter(out) << theta << s << 4.0 * s << mc.mean << mc.std_error << z;
  }
  return {{"max_abs_z", worst}};
}

nlohmann::json run_chsh_sweep(Params& p, std::uint64_t seed, std::uint64_t shots,
                              std::ostream& out) {
  const std::string angles = p.text("angles", "standard");
  std::vector<double> steps;
  if (angles == "standard") {
    steps.push_back(std::numbers::pi / 4.0);
  } else if (angles == "sweep") {
    const std::uint64_t n = p.count("steps", 19);
    require(n >= 2, "steps must be at least 2");
    for (std::uint64_t i = 0; i < n; ++i) {
      steps.push_back(std::numbers::pi / 2.0 * static_cast<double>(i) / static_cast<double>(n - 1));
    }
  } else {
    config_error("angles must be standard or sweep");
  }
  CounterRng rng(seed);
  csv::header(out, {"theta_a", "theta_a_prime", "theta_b", "theta_b_prime", "E_qm", "E_hv",
                    "S_qm", "S_hv", "S_hv_std_error"});
  double max_qm = 0.0, max_hv = 0.0;
  for (double phi : steps) {
    const ChshSettings s = ChshSettings::from_step(phi);
    const double s_qm = chsh_value(s);
    const ChshEstimate hv = chsh_hv(s, shots, rng);
    max_qm = std::max(max_qm, std::abs(s_qm));
    max_hv = std::max(max_hv, std::abs(hv.s));
    csv::RowWriter(out) << 0.0 << 2.0 * phi << phi << 3.0 * phi << sigma_correlation(s.a, s.b)
                        << hv.correlators[0].mean << s_qm << hv.s << hv.std_error;
  }
  return {{"max_abs_S_qm", max_qm}, {"max_abs_S_hv", max_hv}};
}

nlohmann::json run_hv_baseline(Params& p, std::uint64_t seed, std::uint64_t shots,
                               std::ostream& out) {
  const std::uint64_t steps = p.count("steps", 13);
  require(steps >= 2, "steps must be at least 2");
  CounterRng rng(seed);
  csv::header(out, {"theta", "E_hv", "E_hv_analytic", "E_qm", "std_error"});
  const DetectorSetting a = DetectorSetting::in_plane(0.0);
  double worst = 0.0;
  for (std::uint64_t i = 0; i < steps; ++i) {
    const double theta = std::numbers::pi * static_cast<double>(i) / static_cast<double>(steps - 1);
    const DetectorSetting b = DetectorSetting::in_plane(theta);
    const auto est = hv_baseline_estimate(a, b, shots, rng);
    const double analytic = hv_analytic_correlation(a, b);
    if (est.std_error > 0.0) worst = std::max(worst, std::abs(est.mean - analytic) / est.std_error);
    csv::RowWriter(out) << theta << est.mean << analytic << sigma_correlation(a, b)
                        << est.std_error;
  }
  return {{"max_abs_z", worst}};
}

nlohmann::json run_ghz_mermin(Params& p, std::uint64_t seed, std::uint64_t shots,
                              std::ostream& out) {
  const std::string which = p.text("which", "cycle");
  MerminOperator op = MerminOperator::kM1;
  bool cycle = false;
  if (which == "cycle") {
    cycle = true;
  } else if (which == "M1") {
    op = MerminOperator::kM1;
  } else if (which == "M2") {
    op = MerminOperator::kM2;
  } else if (which == "M3") {
    op = MerminOperator::kM3;
  } else if (which == "M4") {
    op = MerminOperator::kM4;
  } else {
    config_error("which must be M1, M2, M3, M4 or cycle");
  }
  CounterRng rng(seed);
  const auto runs = ghz_runs(op, shots, rng, cycle);
  write_ghz_log(out, runs);
  std::uint64_t violations = 0;
  for (const auto& r : runs) violations += r.product() != mermin_product(r.which);
  const auto report = ghz_incompatibility_demo();
  return {{"runs", runs.size()},
          {"product_violations", violations},
          {"classical_solutions", report.classical_solutions},
          {"operator_commutator_norms", report.operator_commutator_norms},
          {"site_commutator_norm", report.site_commutator_norm}};
}

nlohmann::json run_barrier(Params& p, std::uint64_t, std::uint64_t, std::ostream& out) {
  BarrierSpec barrier;
  barrier.v0 = p.number("v0", 2.0);
  barrier.a = p.number("a", 1.0);
  barrier.x0 = p.number("x0", 0.0);
  const double e = p.number("E", 1.0);
  const double ratio = p.number("sigma_k_ratio", 0.03);
  require(e > 0.0, "E must be positive");
  require(barrier.a > 0.0, "a must be positive");
  require(ratio > 0.0 && ratio < 1.0, "sigma_k_ratio must lie in (0, 1)");

  const double k0 = std::sqrt(2.0 * e);
  const double sigma = 1.0 / (2.0 * ratio * k0);
  // The packet starts `start` widths left of the barrier; Gaussian tails that
  // already touch the barrier would seed stray low-energy components.
  const double start = p.number("start_sigmas", 10.0);
  require(start >= 5.0, "start_sigmas must be at least 5");
  const auto width_at = [&](double t) { return std::sqrt(sigma * sigma + t * t / (4.0 * sigma * sigma)); };
  double t_total = p.number("t_total", 0.0);
  if (t_total <= 0.0) {
    // Both outgoing packets at least 6 final widths clear of the barrier.
    t_total = 2.0 * start * sigma / k0;
    while (k0 * t_total - start * sigma < 6.0 * width_at(t_total)) t_total *= 1.02;
    p.record("t_total", t_total);
  }
  const double travel = k0 * t_total - start * sigma;
  const double reach = std::max(travel + 10.0 * width_at(t_total), (start + 10.0) * sigma);
  Grid1D grid;
  grid.n_points = p.count("n_points", 4096);
  require(grid.n_points >= 256, "n_points must be at least 256");
  const double half_width = p.number("half_width", reach);
  require(half_width > start * sigma, "half_width must exceed the starting offset");
  grid.x_min = barrier.x0 - half_width;
  grid.x_max = barrier.x0 + barrier.a + half_width;
  grid.dt = p.number("dt", 0.5 * grid.dx() * grid.dx());

  PacketParams packet{barrier.x0 - start * sigma, k0, sigma};
  const ScatteringResult res = scatter_barrier(packet, barrier, grid, t_total);
  const double d_plane = plane_wave_transmission(e, barrier);

  csv::header(out, {"v0", "a", "E", "k0", "sigma", "t_total", "d", "r", "inside", "d_plus_r",
                    "overlap", "d_plane_wave"});
  csv::RowWriter(out) << barrier.v0 << barrier.a << e << k0 << sigma << t_total << res.d << res.r
                      << res.inside << res.d + res.r << res.overlap << d_plane;
  return {{"d", res.d},
          {"r", res.r},
          {"d_plus_r", res.d + res.r},
          {"overlap", res.overlap},
          {"d_plane_wave", d_plane},
          {"grid", {{"x_min", grid.x_min}, {"x_max", grid.x_max}, {"n_points", grid.n_points},
                    {"dt", grid.dt}}}};
}

nlohmann::json run_double_slit(Params& p, std::uint64_t seed, std::uint64_t shots,
                               std::ostream& out) {
  DoubleSlitParams ds;
  const double amp1 = p.number("amp1", 1.0 / std::numbers::sqrt2);
  const double amp2 = p.number("amp2", 1.0 / std::numbers::sqrt2);
  const double phase = p.number("phase", 0.0);
  ds.amplitude1 = amp1;
  ds.amplitude2 = std::polar(amp2, phase);
  ds.separation = p.number("separation", ds.separation);
  ds.sigma = p.number("sigma", ds.sigma);
  ds.screen_time = p.number("screen_time", ds.screen_time);
  ds.grid.n_points = p.count("n_points", ds.grid.n_points);
  const double half = p.number("half_width", ds.grid.x_max);
  ds.grid.x_min = -half;
  ds.grid.x_max = half;
  require(ds.grid.n_points >= 256, "n_points must be at least 256");
  require(half > 0.0, "half_width must be positive");
  ds.grid.dt = p.number("dt", 0.75 * ds.grid.dx() * ds.grid.dx());
  const std::uint64_t bins = p.count("bins", 300);
  require(bins >= 2, "bins must be at least 2");
  require(std::abs(amp1 * amp1 + amp2 * amp2 - 1.0) <= 1e-10, "amp1^2 + amp2^2 must equal 1");

  CounterRng rng(seed);
  const DoubleSlitResult res = double_slit(ds, shots, rng);
  const Histogram h = histogram(res.arrivals.positions, ds.grid.x_min, ds.grid.x_max, bins);
  const auto prob = binned_probability(res.screen, h);
  const ChiSquareResult chi = chi_square(h.counts, prob);

  csv::header(out, {"x", "density", "counts"});
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    csv::RowWriter(out) << h.center(b) << prob[b] / h.bin_width() << h.counts[b];
  }
  return {{"chi_square", chi.statistic},
          {"dof", chi.dof},
          {"p_value", chi.p_value},
          {"peaks", res.peak_positions.size()},
          {"predicted_spacing", res.predicted_spacing},
          {"measured_spacing", std::isfinite(res.measured_spacing)
                                   ? nlohmann::json(res.measured_spacing)
                                   : nlohmann::json(nullptr)}};
}

nlohmann::json run_decay_times(Params& p, std::uint64_t seed, std::uint64_t shots,
                               std::ostream& out) {
  MetastableSpec spec;
  spec.gamma = p.number("gamma", 1.0);
  spec.e_r = p.number("e_r", 0.0);
  require(spec.gamma > 0.0, "gamma must be positive");
  CounterRng rng(seed);
  csv::header(out, {"event_counter", "time"});
  double sum = 0.0;
  std::uint64_t survivors = 0;
  for (std::uint64_t s = 0; s < shots; ++s) {
    const std::uint64_t event = rng.next_event();
    const double t = sample_decay_time(spec, rng);
    sum += t;
    survivors += t > spec.mean_lifetime();
    csv::RowWriter(out) << event << t;
  }
  return {{"mean", sum / static_cast<double>(shots)},
          {"mean_lifetime", spec.mean_lifetime()},
          {"survival_past_lifetime", static_cast<double>(survivors) / static_cast<double>(shots)}};
}

using Runner = nlohmann::json (*)(Params&, std::uint64_t, std::uint64_t, std::ostream&);

struct Entry {
  ExperimentInfo info;
  Runner runner;
  std::uint64_t default_shots;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      {{"spin-frequencies", "Born frequencies of a spin component: projector, moment and sampled routes",
        "spin-1/2 and spin-3/2 frequencies from fluctuation moments"},
       run_spin_frequencies, 100000},
      {{"born-reconstruct", "Outcome frequencies from moments <F^N> via a Vandermonde solve",
        "moment-to-frequency reconstruction, nonvanishing Vandermonde determinant"},
       run_born_reconstruct, 1},
      {{"decoherence", "Pointer-basis decoherence of a pure spin state",
        "measurement chain: pure-state to diagonal density matrix"},
       run_decoherence, 1},
      {{"epr-correlation", "Singlet spin correlation versus analyzer angle, analytic and sampled",
        "EPR-Bohm singlet correlations <s_a s_b> = -a.b/4"},
       run_epr_correlation, 100000},
      {{"chsh-sweep", "CHSH value of the singlet and of the hidden-variable baseline",
        "CHSH inequality, quantum versus local hidden variables"},
       run_chsh_sweep, 100000},
      {{"hv-baseline", "Shared-direction hidden-variable correlations versus angle",
        "local hidden-variable baseline for the EPR-Bohm setup"},
       run_hv_baseline, 100000},
      {{"ghz-mermin", "Triple measurements of the four Mermin operators on a GHZ state",
        "three-particle entanglement, Mermin product relations"},
       run_ghz_mermin, 100000},
      {{"barrier", "Gaussian packet scattering off a square barrier",
        "time-dependent barrier transmission and reflection"},
       run_barrier, 1},
      {{"double-slit", "Two-source interference with one-by-one arrival sampling",
        "electron double-slit build-up of interference fringes"},
       run_double_slit, 70000},
      {{"decay-times", "Exponential decay times of a metastable level",
        "metastable states, lifetime tau = hbar / Gamma"},
       run_decay_times, 100000},
  };
  return table;
}

const Entry* find_entry(std::string_view tag) {
  for (const auto& e : entries())
    if (e.info.tag == tag) return &e;
  return nullptr;
}

std::string value_as_string(const std::string& key, const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) return csv::number(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_array()) {
    std::string out;
    for (const auto& item : v) {
      if (!out.empty()) out += ',';
      out += value_as_string(key, item);
    }
    return out;
  }
  config_error("parameter " + key + " has an unsupported JSON type");
}

std::uint64_t json_count(const nlohmann::json& v, const char* key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return v.get<std::uint64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0.0 && d == std::floor(d) && d <= 1.8e19) return static_cast<std::uint64_t>(d);
  }
  config_error(std::string(key) + " must be a non-negative integer");
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_catalog() {
  static const std::vector<ExperimentInfo> catalog = [] {
    std::vector<ExperimentInfo> out;
    for (const auto& e : entries()) out.push_back(e.info);
    return out;
  }();
  return catalog;
}

const ExperimentInfo* find_experiment(std::string_view tag) {
  const Entry* e = find_entry(tag);
  return e ? &e->info : nullptr;
}

void print_catalog(std::ostream& os) {
  for (const auto& e : experiment_catalog()) {
    os << e.tag << "\t" << e.description << " [" << e.reference << "]\n";
  }
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) config_error("config must be a JSON object");
  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "experiment") {
      if (!value.is_string()) config_error("experiment must be a string");
      cfg.experiment = value.get<std::string>();
    } else if (key == "seed") {
      cfg.seed = json_count(value, "seed");
    } else if (key == "shots") {
      cfg.shots = json_count(value, "shots");
    } else if (key == "out" || key == "output_path") {
      if (!value.is_string()) config_error("out must be a string");
      cfg.output_path = value.get<std::string>();
    } else if (key == "params") {
      if (!value.is_object()) config_error("params must be an object");
      for (const auto& [pk, pv] : value.items()) cfg.params[pk] = value_as_string(pk, pv);
    } else {
      cfg.params[key] = value_as_string(key, value);
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file " + path.string());
  try {
    return config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    config_error("invalid JSON in " + path.string() + ": " + e.what());
  }
}

void apply_param_override(ExperimentConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    config_error("parameter override '" + std::string(assignment) + "' is not key=value");
  }
  config.params[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

ExperimentOutput run_experiment(const ExperimentConfig& config, std::ostream& csv) {
  const Entry* entry = find_entry(config.experiment);
  if (!entry) config_error("unknown experiment '" + config.experiment + "'");
  const std::uint64_t shots = config.shots.value_or(entry->default_shots);
  if (shots < 1) config_error("shots must be at least 1");

  Params params(config.params);
  ExperimentOutput out;
  out.summary = entry->runner(params, config.seed, shots, csv);
  params.require_all_used();
  out.resolved = {{"experiment", config.experiment},
                  {"seed", config.seed},
                  {"shots", shots},
                  {"params", params.resolved()}};
  return out;
}

std::filesystem::path sidecar_path_for(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  if (p.extension() == ".json") return p.replace_extension(".meta.json");
  return p.replace_extension(".json");
}

RunReport run(const ExperimentConfig& config) {
  RunReport report;
  if (!find_entry(config.experiment)) {
    report.code = ExitCode::kUsage;
    report.message = "unknown experiment '" + config.experiment + "' (see 'list')";
    return report;
  }
  report.csv_path = config.output_path.empty()
                        ? std::filesystem::path(config.experiment + ".csv")
                        : config.output_path;
  report.sidecar_path = sidecar_path_for(report.csv_path);

  const auto start = std::chrono::steady_clock::now();
  std::ostringstream buffer;
  ExperimentOutput output;
  try {
    output = run_experiment(config, buffer);
  } catch (const Error& e) {
    report.code = e.kind() == ErrorKind::kConfig ? ExitCode::kConfig : ExitCode::kNumerical;
    report.message = std::string(config.experiment) + ": " + e.what();
    return report;
  } catch (const std::exception& e) {
    report.code = ExitCode::kNumerical;
    report.message = std::string(config.experiment) + ": " + e.what();
    return report;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::ofstream csv(report.csv_path, std::ios::binary);
  if (!csv) {
    report.code = ExitCode::kConfig;
    report.message = "cannot write " + report.csv_path.string();
    return report;
  }
  csv << buffer.str();

  nlohmann::json sidecar = output.resolved;
  sidecar["summary"] = output.summary;
  sidecar["csv"] = report.csv_path.string();
  sidecar["library_version"] = kLibraryVersion;
  sidecar["duration_seconds"] = seconds;
  std::ofstream meta(report.sidecar_path, std::ios::binary);
  if (!meta) {
    report.code = ExitCode::kConfig;
    report.message = "cannot write " + report.sidecar_path.string();
    return report;
  }
  meta << sidecar.dump(2) << '\n';
  report.message = "wrote " + report.csv_path.string();
  return report;
}

}  // namespace qmlab
