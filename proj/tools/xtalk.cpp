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

// xtalk: scenario front end. Exit codes: 0 success, 2 config error,
// 3 runtime error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "xtalk/errors.hpp"
#include "xtalk/scenario.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

struct Flags {
  std::string config;
  std::string out;
  int threads = 0;
  int levels = 0;
};

void add_flags(CLI::App* cmd, Flags& flags, bool run_flags) {
  cmd->add_option("--config", flags.config, "scenario config or run manifest (JSON)")
      ->required();
  if (!run_flags) return;
  cmd->add_option("--out", flags.out, "output directory (overrides output.dir)");
  cmd->add_option("--threads", flags.threads, "worker threads for finite differences")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--levels", flags.levels, "transmon levels, also used inside closures")
      ->check(CLI::IsMember({2, 3}));
}

xtalk::ScenarioConfig load(const Flags& flags) {
  xtalk::ScenarioConfig config = xtalk::ScenarioConfig::load(flags.config);
  xtalk::RunOverrides overrides;
  if (!flags.out.empty()) overrides.out_dir = flags.out;
  if (flags.threads > 0) overrides.threads = flags.threads;
  if (flags.levels > 0) overrides.levels = flags.levels;
  xtalk::apply_overrides(config, overrides);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crosstalk simulation and pulse optimization for transmon lattices"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(xtalk::kLibraryVersion));

  Flags flags;
  CLI::App* validate = app.add_subcommand("validate", "check a scenario config");
  CLI::App* su2 = app.add_subcommand("su2-sweep", "parallel single-qubit gate sweep");
  CLI::App* cr = app.add_subcommand("cr-sweep", "parallel cross-resonance gate sweep");
  CLI::App* pauli = app.add_subcommand("pauli-expand", "Pauli error expansion run");
  add_flags(validate, flags, false);
  add_flags(su2, flags, true);
  add_flags(cr, flags, true);
  add_flags(pauli, flags, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kConfigError;
  }

  xtalk::ScenarioConfig config;
  try {
    config = load(flags);
  } catch (const xtalk::ConfigError& err) {
    std::cerr << flags.config << ": " << err.what() << "\n";
    return kConfigError;
  } catch (const std::exception& err) {
    std::cerr << flags.config << ": " << err.what() << "\n";
    return kConfigError;
  }

  if (validate->parsed()) {
    std::cout << "OK\n";
    return 0;
  }

  xtalk::RunResult result;
  try {
    if (su2->parsed()) result = xtalk::run_su2_sweep(config);
    if (cr->parsed()) result = xtalk::run_cr_sweep(config);
    if (pauli->parsed()) result = xtalk::run_pauli_expand(config);
  } catch (const xtalk::ConfigError& err) {
    std::cerr << flags.config << ": " << err.what() << "\n";
    return kConfigError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kRuntimeError;
  }
  if (result.exit_code != 0) {
    std::cerr << "FAILED: " << result.error << "\n";
    return kRuntimeError;
  }
  std::cout << "wrote " << config.output.dir << "\n";
  return 0;
}
