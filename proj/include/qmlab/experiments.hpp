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

// Config-driven experiment runner behind the command-line tool. Every
// experiment writes one primary CSV that is a pure function of
// (experiment, seed, shots, params) and a JSON sidecar with the resolved
// configuration and run provenance.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace qmlab {

inline constexpr std::string_view kLibraryVersion = "0.1.0";

/// Process exit codes of the command-line tool.
enum class ExitCode : int { kOk = 0, kUsage = 2, kConfig = 3, kNumerical = 4 };

struct ExperimentInfo {
  std::string_view tag;
  std::string_view description;
  std::string_view reference;  // physics topic the experiment reproduces
};

const std::vector<ExperimentInfo>& experiment_catalog();
const ExperimentInfo* find_experiment(std::string_view tag);
void print_catalog(std::ostream& os);

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 42;
  std::optional<std::uint64_t> shots;  // experiment default when absent
  std::map<std::string, std::string> params;
  std::filesystem::path output_path;  // defaults to "<experiment>.csv"
};

/// Reads a flat JSON object. Keys experiment, seed, shots and out map onto the
/// config fields, an optional "params" object and every other key become
/// experiment parameters. Throws Error(kConfig) on malformed input.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Parses "key=value" and stores it, overriding earlier values.
void apply_param_override(ExperimentConfig& config, std::string_view assignment);

struct ExperimentOutput {
  nlohmann::json resolved;  // experiment, seed, shots, params with defaults
  nlohmann::json summary;   // experiment-specific results
};

/// Runs the experiment, writing the primary CSV to `csv`. Throws
/// Error(kConfig) for unknown experiments or invalid parameters and lets
/// numerical errors propagate.
ExperimentOutput run_experiment(const ExperimentConfig& config, std::ostream& csv);

struct RunReport {
  ExitCode code = ExitCode::kOk;
  std::filesystem::path csv_path;
  std::filesystem::path sidecar_path;
  std::string message;
};

/// Sidecar path for a CSV path: the extension is replaced by ".json".
std::filesystem::path sidecar_path_for(const std::filesystem::path& csv_path);

/// Full run: CSV file plus JSON sidecar (resolved config, summary, library
/// version, wall-clock duration). Errors are mapped onto exit codes.
RunReport run(const ExperimentConfig& config);

}  // namespace qmlab
