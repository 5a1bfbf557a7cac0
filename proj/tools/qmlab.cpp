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

// Command-line front end:
//   qmlab list
//   qmlab <experiment> [--config f.json] [--seed N] [--shots N] [--out path]
//                      [--param key=value ...]

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qmlab/error.hpp"
#include "qmlab/experiments.hpp"

namespace {

int code(qmlab::ExitCode c) { return static_cast<int>(c); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qmlab: reproducible quantum-measurement experiments"};
  app.set_version_flag("--version", std::string(qmlab::kLibraryVersion));

  std::string experiment;
  std::string config_path;
  std::uint64_t seed = 0;
  std::uint64_t shots = 0;
  std::string out;
  std::vector<std::string> overrides;

  app.add_option("experiment", experiment, "experiment tag, or 'list'")->required();
  auto* config_opt = app.add_option("--config", config_path, "JSON configuration file");
  auto* seed_opt = app.add_option("--seed", seed, "master seed");
  auto* shots_opt = app.add_option("--shots", shots, "number of shots or runs");
  auto* out_opt = app.add_option("--out", out, "primary CSV path");
  app.add_option("--param,-p", overrides, "experiment parameter key=value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : code(qmlab::ExitCode::kUsage);
  }

  if (experiment == "list") {
    qmlab::print_catalog(std::cout);
    return 0;
  }

  qmlab::ExperimentConfig config;
  try {
    if (*config_opt) config = qmlab::load_config(config_path);
    if (!config.experiment.empty() && config.experiment != experiment) {
      std::cerr << "config names experiment '" << config.experiment << "' but '" << experiment
                << "' was requested\n";
      return code(qmlab::ExitCode::kConfig);
    }
    config.experiment = experiment;
    if (*seed_opt) config.seed = seed;
    if (*shots_opt) config.shots = shots;
    if (*out_opt) config.output_path = out;
    for (const auto& o : overrides) qmlab::apply_param_override(config, o);
  } catch (const qmlab::Error& e) {
    std::cerr << e.what() << '\n';
    return code(qmlab::ExitCode::kConfig);
  }

  const qmlab::RunReport report = qmlab::run(config);
  if (report.code != qmlab::ExitCode::kOk) {
    std::cerr << report.message << '\n';
    return code(report.code);
  }
  std::cout << report.message << " and " << report.sidecar_path.string() << '\n';
  return 0;
}
