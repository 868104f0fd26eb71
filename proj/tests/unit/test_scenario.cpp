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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "xtalk/errors.hpp"
#include "xtalk/gates.hpp"
#include "xtalk/scenario.hpp"

using namespace xtalk;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("xtalk_scenario_" + name);
  fs::remove_all(dir);
  return dir;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(path));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string expect_config_error(const std::string& text) {
  try {
    ScenarioConfig::parse(text);
  } catch (const ConfigError& err) {
    return err.what();
  }
  FAIL("config was accepted");
  return {};
}

const char* kSu2 = R"({
  "device": {"rows": 2, "cols": 2, "levels": 3},
  "crosstalk": {"sigma": 0.1, "seed": 7},
  "experiment": {"type": "su2_parallel", "gate_times_ns": [5], "targets_seed": 11},
  "optimizer": {"max_iters": 5}
})";

}  // namespace

TEST_CASE("config parsing fills defaults and round-trips") {
  const ScenarioConfig c = ScenarioConfig::parse(kSu2);
  CHECK(c.device.rows == 2);
  CHECK(c.device.frequency_pattern == "checkerboard");
  CHECK(c.crosstalk.seed == 7);
  CHECK(c.experiment.targets_seed == 11);
  CHECK(c.optimizer.config.max_iters == 5);
  CHECK(c.optimizer.config.fd_step == 1e-6);
  CHECK(c.expansion.levels_override == 2);

  const ScenarioConfig again = ScenarioConfig::parse(c.to_json().dump());
  CHECK(again.to_json() == c.to_json());
  CHECK(canonical_config_text(again) == canonical_config_text(c));

  // A manifest is accepted in place of a config.
  nlohmann::json manifest = {{"manifest_version", 1}, {"config", c.to_json()}};
  CHECK(ScenarioConfig::parse(manifest.dump(2)).to_json() == c.to_json());
}

TEST_CASE("config errors are line anchored") {
  SECTION("unknown key") {
    const std::string msg = expect_config_error(R"({
  "crosstalk": {"sigma": 0.1, "seed": 7},
  "experiment": {"type": "idle", "gate_times_ns": [5]},
  "extra": 1
})");
    CHECK(msg.find("line 4:") == 0);
    CHECK(msg.find("unknown key \"extra\"") != std::string::npos);
  }
  SECTION("T2 <= 2 T1") {
    const std::string msg = expect_config_error(R"({
  "crosstalk": {"sigma": 0.1, "seed": 7},
  "decoherence": {"enabled": true, "seed": 1,
                  "t2_ratio": 2.5},
  "experiment": {"type": "idle", "gate_times_ns": [5]}
})");
    CHECK(msg.find("line 4:") == 0);
    CHECK(msg.find("T2 <= 2*T1") != std::string::npos);
  }
  SECTION("addressability") {
    const std::string msg = expect_config_error(R"({
  "device": {"rows": 1, "cols": 3, "frequency_pattern": "explicit",
             "frequencies_ghz": [3.0, 3.1, 3.1]},
  "crosstalk": {"sigma": 0.1, "seed": 7},
  "experiment": {"type": "idle", "gate_times_ns": [5]}
})");
    CHECK(msg.find("line 2:") == 0);
    CHECK(msg.find("share a frequency") != std::string::npos);
    // The same pattern is fine once addressability is not required.
    CHECK_NOTHROW(ScenarioConfig::parse(R"({
  "device": {"rows": 1, "cols": 3, "frequency_pattern": "explicit",
             "frequencies_ghz": [3.0, 3.1, 3.1], "addressable": false},
  "crosstalk": {"sigma": 0.1, "seed": 7},
  "experiment": {"type": "idle", "gate_times_ns": [5]}
})"));
  }
  SECTION("seeds are mandatory") {
    CHECK(expect_config_error(R"({"crosstalk": {"sigma": 0.1},
 "experiment": {"type": "idle", "gate_times_ns": [5]}})")
              .find("\"seed\"") != std::string::npos);
    CHECK(expect_config_error(R"({"crosstalk": {"seed": 1},
 "experiment": {"type": "su2_parallel", "gate_times_ns": [5]}})")
              .find("targets_seed") != std::string::npos);
  }
  SECTION("malformed JSON and wrong types") {
    CHECK(expect_config_error("{\n  \"crosstalk\": {\"seed\": 1},\n  oops\n}").find("line 3:") ==
          0);
    CHECK(expect_config_error(R"({"crosstalk": {"seed": -1},
 "experiment": {"type": "idle", "gate_times_ns": [5]}})")
              .find("non-negative integer") != std::string::npos);
    CHECK(expect_config_error(R"({"crosstalk": {"seed": 1},
 "experiment": {"type": "idle", "gate_times_ns": [0]}})")
              .find("positive") != std::string::npos);
  }
  SECTION("pairs must be lattice edges") {
    CHECK(expect_config_error(R"({"device": {"rows": 2, "cols": 2},
 "crosstalk": {"seed": 1}, "coupling": {"j_mhz": 3.8},
 "experiment": {"type": "cr_parallel", "gate_times_ns": [100], "pairs": [[0, 3]]}})")
              .find("not a lattice edge") != std::string::npos);
  }
}

TEST_CASE("derived scenario objects") {
  ScenarioConfig c = ScenarioConfig::parse(kSu2);
  c.device.rows = 3;
  c.device.cols = 3;
  const std::vector<std::pair<int, int>> dominoes{{0, 1}, {3, 4}, {6, 7}};
  CHECK(c.cr_pairs() == dominoes);
  c.experiment.pairs = {{1, 4}};
  CHECK(c.cr_pairs() == c.experiment.pairs);

  c.decoherence.enabled = true;
  c.decoherence.seed = 5;
  const DeviceModel a = c.build_device();
  const DeviceModel b = c.build_device();
  for (int k = 0; k < a.n_sites(); ++k) {
    REQUIRE(a.transmons[k].t1_ns.has_value());
    CHECK(*a.transmons[k].t1_ns == *b.transmons[k].t1_ns);
    CHECK(*a.transmons[k].t2_ns == Approx(1.5 * *a.transmons[k].t1_ns).epsilon(1e-15));
    CHECK(*a.transmons[k].t1_ns > 0.0);
  }
  CHECK(*a.transmons[0].t1_ns != *a.transmons[1].t1_ns);
}

TEST_CASE("hashing and number formatting") {
  // Reference values from `git hash-object`.
  CHECK(git_blob_sha1("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  CHECK(git_blob_sha1("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");

  CHECK(format_value(0.1) == "1.00000000000e-01");
  CHECK(format_value(-1234.5) == "-1.23450000000e+03");
  CHECK(std::stod(format_value(1.0 / 3.0)) == Approx(1.0 / 3.0).epsilon(1e-11));

  ScenarioConfig c = ScenarioConfig::parse(kSu2);
  const std::string hash = git_blob_sha1(canonical_config_text(c));
  c.output.dir = "elsewhere";
  c.optimizer.config.threads = 3;
  CHECK(git_blob_sha1(canonical_config_text(c)) == hash);
  c.crosstalk.seed = 8;
  CHECK(git_blob_sha1(canonical_config_text(c)) != hash);
}

TEST_CASE("su2 sweep without crosstalk and determinism") {
  ScenarioConfig c = ScenarioConfig::parse(R"({
  "device": {"rows": 2, "cols": 2, "levels": 3},
  "crosstalk": {"sigma": 0.0, "seed": 7},
  "experiment": {"type": "su2_parallel", "gate_times_ns": [10, 20], "targets_seed": 3},
  "optimizer": {"max_iters": 10}
})");
  c.output.dir = scratch("su2_a").string();
  const RunResult first = run_su2_sweep(c);
  REQUIRE(first.exit_code == 0);
  const auto rows = read_csv(fs::path(c.output.dir) / "results.csv");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"t_ns", "r_avg_raw", "r_avg_opt", "mean_leakage_raw",
                                            "mean_leakage_opt", "r_avg_free"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double raw = std::stod(rows[i][1]);
    const double opt = std::stod(rows[i][2]);
    CHECK(raw < 1e-3);
    CHECK(opt <= raw);
    CHECK(opt > 0.1 * raw - 1e-6);  // nothing to fix beyond residual control error
    CHECK(rows[i][1] == rows[i][5]);  // raw equals the crosstalk-free baseline
  }
  CHECK(first.manifest["status"] == "ok");
  CHECK(first.manifest["rows"].size() == 2);
  CHECK(first.manifest["traces"].size() == 2);

  // Same config in another directory, and a re-run from the manifest.
  ScenarioConfig other = c;
  other.output.dir = scratch("su2_b").string();
  REQUIRE(run_su2_sweep(other).exit_code == 0);
  ScenarioConfig replay = ScenarioConfig::load(fs::path(c.output.dir) / "manifest.json");
  replay.output.dir = scratch("su2_c").string();
  REQUIRE(run_su2_sweep(replay).exit_code == 0);
  for (const char* f : {"results.csv", "sites.csv"}) {
    const std::string ref = slurp(fs::path(c.output.dir) / f);
    CHECK(slurp(fs::path(other.output.dir) / f) == ref);
    CHECK(slurp(fs::path(replay.output.dir) / f) == ref);
  }
}

TEST_CASE("runtime failure leaves a FAILED marker") {
  // Four 3-level sites in one closure exceed the dimension cap.
  ScenarioConfig c = ScenarioConfig::parse(R"({
  "device": {"rows": 2, "cols": 2, "frequency_pattern": "eight_color", "levels": 3},
  "crosstalk": {"sigma": 0.1, "seed": 7},
  "coupling": {"j_mhz": 3.8},
  "experiment": {"type": "cr_parallel", "gate_times_ns": [100]},
  "expansion": {"d": 1, "levels_override": 0, "dim_cap": 64},
  "optimizer": {"max_iters": 2}
})");
  c.output.dir = scratch("fail").string();
  const RunResult r = run_cr_sweep(c);
  CHECK(r.exit_code == 3);
  CHECK(r.error.find("levels_override") != std::string::npos);
  const std::string csv = slurp(fs::path(c.output.dir) / "results.csv");
  CHECK(csv.find("t_ns,inf_raw") == 0);
  CHECK(csv.find("# FAILED: ") != std::string::npos);
  CHECK(r.manifest["status"] == "FAILED");

  c.experiment.type = "su2_parallel";
  CHECK_THROWS_AS(run_cr_sweep(c), ConfigError);
}

TEST_CASE("cr sweep with no coupling and no drive") {
  ScenarioConfig c = ScenarioConfig::parse(R"({
  "device": {"rows": 1, "cols": 2, "frequency_pattern": "eight_color", "levels": 3},
  "crosstalk": {"sigma": 0.0, "seed": 7},
  "experiment": {"type": "cr_parallel", "gate_times_ns": [100, 150, 200],
                 "initial_pulses": "off"},
  "expansion": {"d": 0},
  "optimizer": {"enabled": false}
})");
  c.output.dir = scratch("cr_idle").string();
  REQUIRE(run_cr_sweep(c).exit_code == 0);

  // Best local dressing of the identity against the CNOT core, by grid search.
  const Matrix core = canonical_gate({kPi / 2, 0, 0});
  double best = 0.0;
  for (int i = 0; i <= 64; ++i) {
    for (int j = 0; j <= 64; ++j) {
      const Matrix k = kron(rot_x(2 * kPi * i / 64), rot_x(2 * kPi * j / 64));
      best = std::max(best, std::norm((k * core).trace()) / 16.0);
    }
  }
  const auto rows = read_csv(fs::path(c.output.dir) / "results.csv");
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][4]) == Approx(1.0 - best).margin(1e-6));  // mean_pair
    CHECK(std::stod(rows[i][3]) == Approx(1.0 - best).margin(1e-6));  // worst_pair
    CHECK(std::stod(rows[i][1]) == Approx(std::stod(rows[1][1])).margin(1e-9));
  }
}

TEST_CASE("pauli expansion tables") {
  SECTION("4x5 grid yields 31 component tables; no coupling gives the identity") {
    ScenarioConfig c = ScenarioConfig::parse(R"({
  "device": {"rows": 4, "cols": 5, "frequency_pattern": "eight_color", "levels": 2},
  "crosstalk": {"sigma": 0.0, "seed": 7},
  "experiment": {"type": "idle", "gate_times_ns": [50]},
  "expansion": {"d": 1, "o": 2, "weight_cutoff": 2}
})");
    c.output.dir = scratch("pauli").string();
    const RunResult r = run_pauli_expand(c);
    REQUIRE(r.exit_code == 0);
    CHECK(r.manifest["rows"][0]["components"].size() == 31);

    const std::string marg = slurp(fs::path(c.output.dir) / "pauli_marginals.tsv");
    CHECK(marg.rfind("t_ns\tcomponent_id\tpauli_string\tprobability\n", 0) == 0);
    std::istringstream in(slurp(fs::path(c.output.dir) / "pauli_global.tsv"));
    std::string line;
    std::getline(in, line);
    int n_lines = 0;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      std::string t, label, prob;
      std::getline(ls, t, '\t');
      std::getline(ls, label, '\t');
      std::getline(ls, prob, '\t');
      const bool identity = label.find_first_not_of('I') == std::string::npos;
      CHECK(std::stod(prob) == Approx(identity ? 1.0 : 0.0).margin(1e-12));
      ++n_lines;
    }
    // Strings of weight <= 2 on 20 qubits: 1 + 3*20 + 9*190.
    CHECK(n_lines == 1 + 60 + 1710);
  }
}
