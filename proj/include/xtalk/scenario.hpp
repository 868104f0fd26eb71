// Copyright 2026 The xtalk Authors
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "xtalk/device.hpp"
#include "xtalk/optimize.hpp"

namespace xtalk {

inline constexpr const char* kLibraryVersion = "0.1.0";
inline constexpr int kManifestVersion = 1;

struct ScenarioConfig {
  struct Device {
    int rows = 3;
    int cols = 3;
    /// "checkerboard", "eight_color" or "explicit".
    std::string frequency_pattern = "checkerboard";
    std::vector<double> checkerboard_ghz{3.0, 3.1};
    std::vector<double> frequencies_ghz;  ///< row-major, for "explicit"
    double anharmonicity_ghz = -0.33;
    int levels = 3;
    bool addressable = true;
  } device;

  struct Crosstalk {
    double sigma = 0.0;
    std::uint64_t seed = 0;
  } crosstalk;

  struct Coupling {
    double j_mhz = 0.0;
  } coupling;

  struct Decoherence {
    bool enabled = false;
    double t1_mean_us = 40.0;
    double t1_std_us = 5.0;
    double t2_ratio = 1.5;
    std::uint64_t seed = 0;
  } decoherence;

  struct Experiment {
    /// su2_parallel, cr_parallel, pauli_expand or idle.
    std::string type = "su2_parallel";
    std::vector<double> gate_times_ns;
    /// gaussian_drag (single-qubit) or hanning (cross-resonance).
    std::string pulse_family = "gaussian_drag";
    std::uint64_t targets_seed = 0;
    int n_draws = 1;
    /// Explicit (control, target) pairs; empty means horizontal dominoes.
    std::vector<std::pair<int, int>> pairs;
    /// pauli_expand: "idle" or "pi2" (calibrated X_{pi/2} on every site).
    std::string program = "idle";
    /// cr_parallel: "calibrated" or "off" starting pulses.
    std::string initial_pulses = "calibrated";
    /// cr_parallel: "isolated" optimizes pairs without crosstalk first and
    /// uses that optimum as the raw point; "defaults" uses the start pulses.
    std::string cr_reference = "isolated";
    double steps_per_ns = 20.0;
    int min_steps = 64;
  } experiment;

  struct Expansion {
    int d = 1;
    int o = 2;
    int weight_cutoff = 2;
    int levels_override = 2;
    int dim_cap = 256;
  } expansion;

  struct Optimizer {
    bool enabled = true;
    OptConfig config;
  } optimizer;

  struct Output {
    std::string dir = "out";
    std::vector<std::string> formats{"csv", "manifest"};
  } output;

  /// Parses and validates. Accepts a config object or a run manifest (whose
  /// "config" member is used). Errors are ConfigError with "line N:" anchors.
  static ScenarioConfig parse(std::string_view text);
  static ScenarioConfig load(const std::filesystem::path& path);

  /// Physics validation; throws ConfigError naming the violated rule.
  void validate() const;
  nlohmann::json to_json() const;

  bool writes(std::string_view format) const;
  LatticeSpec lattice() const;
  /// Transmons with sampled T1/T2 when decoherence is enabled.
  DeviceModel build_device() const;
  CrosstalkSpec build_crosstalk(int draw = 0) const;
  /// experiment.pairs, or horizontal dominoes in row-major order.
  std::vector<std::pair<int, int>> cr_pairs() const;
};

/// Command-line overrides, applied to the config before running (and echoed
/// in the manifest).
struct RunOverrides {
  std::optional<std::filesystem::path> out_dir;
  std::optional<int> threads;
  std::optional<int> levels;
};

void apply_overrides(ScenarioConfig& config, const RunOverrides& overrides);

/// Git blob SHA-1 of the text, hex encoded.
std::string git_blob_sha1(std::string_view text);
/// Canonical text of everything in the config that can change a table
/// (output settings and the thread count are left out); its hash is the
/// manifest's config_hash.
std::string canonical_config_text(const ScenarioConfig& config);
/// 12 significant digits, scientific notation.
std::string format_value(double value);

struct RunResult {
  int exit_code = 0;  ///< 0 success, 3 runtime failure
  std::string error;
  nlohmann::json manifest;
};

/// Each command writes into config.output.dir. Runtime failures leave the
/// rows finished so far followed by a FAILED marker.
RunResult run_su2_sweep(const ScenarioConfig& config);
RunResult run_cr_sweep(const ScenarioConfig& config);
RunResult run_pauli_expand(const ScenarioConfig& config);

}  // namespace xtalk
