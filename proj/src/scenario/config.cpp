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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "xtalk/errors.hpp"
#include "xtalk/rng.hpp"
#include "xtalk/scenario.hpp"

namespace xtalk {
namespace {

using nlohmann::json;
using Path = std::vector<std::string>;

// Maps a key path to the line of its first textual occurrence, searching each
// key after the previous one. Good enough for the flat, human-written files
// we accept; falls back to the deepest key found.
class Locator {
 public:
  Locator(std::string_view text, Path prefix) : text_(text), prefix_(std::move(prefix)) {}

  int line_of(const Path& path) const {
    std::size_t pos = 0;
    Path full = prefix_;
    full.insert(full.end(), path.begin(), path.end());
    for (const auto& key : full) {
      if (!key.empty() && key.front() == '[') continue;
      const std::size_t hit = text_.find("\"" + key + "\"", pos);
      if (hit == std::string_view::npos) break;
      pos = hit;
    }
    return line_at(pos);
  }

  int line_at(std::size_t byte) const {
    byte = std::min(byte, text_.size());
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + byte, '\n'));
  }

 private:
  std::string_view text_;
  Path prefix_;
};

std::string pointer(const Path& path) {
  std::string out;
  for (const auto& key : path) out += (key.front() == '[' ? "" : "/") + key;
  return out.empty() ? "/" : out;
}

[[noreturn]] void fail(const Locator* loc, const Path& path, const std::string& message) {
  std::string prefix;
  if (loc) prefix = "line " + std::to_string(loc->line_of(path)) + ": ";
  throw ConfigError(prefix + pointer(path) + ": " + message);
}

class Reader {
 public:
  Reader(const json& node, Path path, const Locator& loc)
      : node_(node), path_(std::move(path)), loc_(loc) {
    if (!node_.is_object()) fail(&loc_, path_, "expected an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [key, value] : node_.items()) {
      if (!ok.count(key)) fail(&loc_, at(key), "unknown key \"" + key + "\"");
    }
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  Reader child(const std::string& key) const { return Reader(node_.at(key), at(key), loc_); }

  void require(const std::string& key) const {
    if (!has(key)) fail(&loc_, path_, "missing required key \"" + key + "\"");
  }

  void number(const std::string& key, double& out) const {
    if (!has(key)) return;
    const json& v = node_.at(key);
    if (!v.is_number()) fail(&loc_, at(key), "expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) fail(&loc_, at(key), "expected a finite number");
  }

  void integer(const std::string& key, int& out) const {
    if (!has(key)) return;
    const json& v = node_.at(key);
    if (!v.is_number_integer()) fail(&loc_, at(key), "expected an integer");
    const auto wide = v.get<std::int64_t>();
    if (wide < -(1LL << 31) || wide >= (1LL << 31)) fail(&loc_, at(key), "integer out of range");
    out = static_cast<int>(wide);
  }

  void seed(const std::string& key, std::uint64_t& out) const {
    if (!has(key)) return;
    const json& v = node_.at(key);
    if (!v.is_number_unsigned()) fail(&loc_, at(key), "seed must be a non-negative integer");
    out = v.get<std::uint64_t>();
  }

  void boolean(const std::string& key, bool& out) const {
    if (!has(key)) return;
    const json& v = node_.at(key);
    if (!v.is_boolean()) fail(&loc_, at(key), "expected true or false");
    out = v.get<bool>();
  }

  void string(const std::string& key, std::string& out,
              std::initializer_list<const char*> choices) const {
    if (!has(key)) return;
    const json& v = node_.at(key);
    if (!v.is_string()) fail(&loc_, at(key), "expected a string");
    out = v.get<std::string>();
    if (std::none_of(choices.begin(), choices.end(), [&](const char* c) { return out == c; })) {
      std::string list;
      for (const char* c : choices) list += std::string(list.empty() ? "" : ", ") + c;
      fail(&loc_, at(key), "\"" + out + "\" is not one of: " + list);
    }
  }

  void text(const std::string& key, std::string& out) const {
    if (!has(key)) return;
    const json& v = node_.at(key);
    if (!v.is_string() || v.get<std::string>().empty()) {
      fail(&loc_, at(key), "expected a non-empty string");
    }
    out = v.get<std::string>();
  }

  void numbers(const std::string& key, std::vector<double>& out) const {
    if (!has(key)) return;
    const json& v = node_.at(key);
    if (!v.is_array()) fail(&loc_, at(key), "expected an array of numbers");
    out.clear();
    for (const auto& e : v) {
      if (!e.is_number()) fail(&loc_, at(key), "expected an array of numbers");
      out.push_back(e.get<double>());
    }
  }

  void strings(const std::string& key, std::vector<std::string>& out) const {
    if (!has(key)) return;
    const json& v = node_.at(key);
    if (!v.is_array()) fail(&loc_, at(key), "expected an array of strings");
    out.clear();
    for (const auto& e : v) {
      if (!e.is_string()) fail(&loc_, at(key), "expected an array of strings");
      out.push_back(e.get<std::string>());
    }
  }

  void pairs(const std::string& key, std::vector<std::pair<int, int>>& out) const {
    if (!has(key)) return;
    const json& v = node_.at(key);
    if (!v.is_array()) fail(&loc_, at(key), "expected an array of [control, target] pairs");
    out.clear();
    for (const auto& e : v) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
          !e[1].is_number_integer()) {
        fail(&loc_, at(key), "expected an array of [control, target] pairs");
      }
      out.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
  }

  Path at(const std::string& key) const {
    Path p = path_;
    p.push_back(key);
    return p;
  }

 private:
  const json& node_;
  Path path_;
  const Locator& loc_;
};

void read_config(const Reader& r, ScenarioConfig& c) {
  r.allow({"device", "crosstalk", "coupling", "decoherence", "experiment", "expansion",
           "optimizer", "output"});
  r.require("crosstalk");
  r.require("experiment");

  if (r.has("device")) {
    const Reader d = r.child("device");
    d.allow({"rows", "cols", "frequency_pattern", "checkerboard_ghz", "frequencies_ghz",
             "anharmonicity_ghz", "levels", "addressable"});
    d.integer("rows", c.device.rows);
    d.integer("cols", c.device.cols);
    d.string("frequency_pattern", c.device.frequency_pattern,
             {"checkerboard", "eight_color", "explicit"});
    d.numbers("checkerboard_ghz", c.device.checkerboard_ghz);
    d.numbers("frequencies_ghz", c.device.frequencies_ghz);
    d.number("anharmonicity_ghz", c.device.anharmonicity_ghz);
    d.integer("levels", c.device.levels);
    d.boolean("addressable", c.device.addressable);
  }

  const Reader x = r.child("crosstalk");
  x.allow({"sigma", "seed"});
  x.require("seed");
  x.number("sigma", c.crosstalk.sigma);
  x.seed("seed", c.crosstalk.seed);

  if (r.has("coupling")) {
    const Reader j = r.child("coupling");
    j.allow({"j_mhz"});
    j.number("j_mhz", c.coupling.j_mhz);
  }

  if (r.has("decoherence")) {
    const Reader t = r.child("decoherence");
    t.allow({"enabled", "t1_mean_us", "t1_std_us", "t2_ratio", "seed"});
    t.boolean("enabled", c.decoherence.enabled);
    t.number("t1_mean_us", c.decoherence.t1_mean_us);
    t.number("t1_std_us", c.decoherence.t1_std_us);
    t.number("t2_ratio", c.decoherence.t2_ratio);
    if (c.decoherence.enabled) t.require("seed");
    t.seed("seed", c.decoherence.seed);
  }

  const Reader e = r.child("experiment");
  e.allow({"type", "gate_times_ns", "pulse_family", "targets_seed", "n_draws", "pairs", "program",
           "initial_pulses", "cr_reference", "steps_per_ns", "min_steps"});
  e.require("type");
  e.require("gate_times_ns");
  e.string("type", c.experiment.type, {"su2_parallel", "cr_parallel", "pauli_expand", "idle"});
  if (c.experiment.type == "cr_parallel") c.experiment.pulse_family = "hanning";
  e.numbers("gate_times_ns", c.experiment.gate_times_ns);
  e.string("pulse_family", c.experiment.pulse_family, {"gaussian_drag", "hanning"});
  if (c.experiment.type == "su2_parallel") e.require("targets_seed");
  e.seed("targets_seed", c.experiment.targets_seed);
  e.integer("n_draws", c.experiment.n_draws);
  e.pairs("pairs", c.experiment.pairs);
  e.string("program", c.experiment.program, {"idle", "pi2"});
  e.string("initial_pulses", c.experiment.initial_pulses, {"calibrated", "off"});
  e.string("cr_reference", c.experiment.cr_reference, {"isolated", "defaults"});
  e.number("steps_per_ns", c.experiment.steps_per_ns);
  e.integer("min_steps", c.experiment.min_steps);

  if (r.has("expansion")) {
    const Reader p = r.child("expansion");
    p.allow({"d", "o", "weight_cutoff", "levels_override", "dim_cap"});
    p.integer("d", c.expansion.d);
    p.integer("o", c.expansion.o);
    p.integer("weight_cutoff", c.expansion.weight_cutoff);
    p.integer("levels_override", c.expansion.levels_override);
    p.integer("dim_cap", c.expansion.dim_cap);
  }

  if (r.has("optimizer")) {
    const Reader o = r.child("optimizer");
    o.allow({"enabled", "max_iters", "grad_tol", "step_tol", "fd_step", "richardson",
             "line_search", "n_starts", "jitter", "seed", "threads"});
    OptConfig& oc = c.optimizer.config;
    o.boolean("enabled", c.optimizer.enabled);
    o.integer("max_iters", oc.max_iters);
    o.number("grad_tol", oc.grad_tol);
    o.number("step_tol", oc.step_tol);
    o.number("fd_step", oc.fd_step);
    o.boolean("richardson", oc.richardson);
    o.integer("n_starts", oc.n_starts);
    o.number("jitter", oc.jitter);
    o.seed("seed", oc.seed);
    o.integer("threads", oc.threads);
    if (o.has("line_search")) {
      const Reader l = o.child("line_search");
      l.allow({"sufficient_decrease", "backtrack", "max_backtracks"});
      l.number("sufficient_decrease", oc.line_search.sufficient_decrease);
      l.number("backtrack", oc.line_search.backtrack);
      l.integer("max_backtracks", oc.line_search.max_backtracks);
    }
  }

  if (r.has("output")) {
    const Reader w = r.child("output");
    w.allow({"dir", "formats"});
    w.text("dir", c.output.dir);
    w.strings("formats", c.output.formats);
  }
}

void check(const ScenarioConfig& c, const Locator* loc) {
  const auto must = [&](bool ok, Path path, const std::string& message) {
    if (!ok) fail(loc, path, message);
  };
  const auto& dv = c.device;
  must(dv.rows >= 1 && dv.cols >= 1, {"device", "rows"}, "rows and cols must be positive");
  must(dv.levels >= 2 && dv.levels <= 4, {"device", "levels"}, "levels must be 2, 3 or 4");
  must(dv.anharmonicity_ghz != 0.0, {"device", "anharmonicity_ghz"},
       "anharmonicity must be nonzero");
  if (dv.frequency_pattern == "checkerboard") {
    must(dv.checkerboard_ghz.size() == 2, {"device", "checkerboard_ghz"},
         "checkerboard needs exactly two frequencies");
  }
  if (dv.frequency_pattern == "explicit") {
    must(static_cast<int>(dv.frequencies_ghz.size()) == dv.rows * dv.cols,
         {"device", "frequencies_ghz"}, "explicit pattern needs one frequency per site");
  }
  try {
    c.lattice().validate();
  } catch (const ValidationError& err) {
    fail(loc, {"device", "frequency_pattern"},
         std::string("frequency pattern violates the lattice rules: ") + err.what());
  }

  must(c.crosstalk.sigma >= 0.0, {"crosstalk", "sigma"}, "sigma must be non-negative");

  const auto& dc = c.decoherence;
  must(dc.t1_mean_us > 0.0, {"decoherence", "t1_mean_us"}, "T1 mean must be positive");
  must(dc.t1_std_us >= 0.0, {"decoherence", "t1_std_us"}, "T1 spread must be non-negative");
  must(dc.t2_ratio > 0.0, {"decoherence", "t2_ratio"}, "t2_ratio must be positive");
  must(dc.t2_ratio <= 2.0, {"decoherence", "t2_ratio"},
       "T2 <= 2*T1 rule violated (t2_ratio " + (std::ostringstream() << dc.t2_ratio).str() +
           " > 2)");

  const auto& ex = c.experiment;
  must(!ex.gate_times_ns.empty(), {"experiment", "gate_times_ns"}, "no gate times given");
  for (double t : ex.gate_times_ns) {
    must(std::isfinite(t) && t > 0.0, {"experiment", "gate_times_ns"},
         "gate times must be positive");
  }
  must(ex.n_draws >= 1, {"experiment", "n_draws"}, "n_draws must be positive");
  must(ex.steps_per_ns > 0.0, {"experiment", "steps_per_ns"}, "steps_per_ns must be positive");
  must(ex.min_steps >= 1, {"experiment", "min_steps"}, "min_steps must be positive");
  if (ex.type == "su2_parallel") {
    must(ex.pulse_family == "gaussian_drag", {"experiment", "pulse_family"},
         "su2_parallel uses gaussian_drag pulses");
  }
  if (ex.type == "cr_parallel") {
    must(ex.pulse_family == "hanning", {"experiment", "pulse_family"},
         "cr_parallel uses hanning pulses");
    must(!(ex.initial_pulses == "calibrated" && c.coupling.j_mhz == 0.0), {"coupling", "j_mhz"},
         "calibrated cross-resonance pulses need a nonzero coupling");
  }

  const LatticeSpec lattice = c.lattice();
  std::set<int> used;
  for (auto [a, b] : ex.pairs) {
    const bool in_range = a >= 0 && b >= 0 && a < lattice.n_sites() && b < lattice.n_sites();
    must(in_range, {"experiment", "pairs"}, "pair site out of range");
    must(lattice.adjacent(a, b), {"experiment", "pairs"},
         "pair (" + std::to_string(a) + "," + std::to_string(b) + ") is not a lattice edge");
    must(used.insert(a).second && used.insert(b).second, {"experiment", "pairs"},
         "a site appears in more than one pair");
  }
  if (ex.type == "cr_parallel") {
    must(!c.cr_pairs().empty(), {"experiment", "pairs"},
         "cr_parallel needs at least one pair (cols >= 2 or an explicit list)");
  }

  const auto& xp = c.expansion;
  must(xp.d >= 0, {"expansion", "d"}, "d must be non-negative");
  must(xp.o >= 1 && xp.o <= 3, {"expansion", "o"}, "o must be 1, 2 or 3");
  must(xp.weight_cutoff >= 0, {"expansion", "weight_cutoff"}, "weight_cutoff must be >= 0");
  must(xp.levels_override == 0 || (xp.levels_override >= 2 && xp.levels_override <= 4),
       {"expansion", "levels_override"}, "levels_override must be 0, 2, 3 or 4");
  must(xp.dim_cap >= 4, {"expansion", "dim_cap"}, "dim_cap must be at least 4");

  try {
    c.optimizer.config.validate();
  } catch (const ValidationError& err) {
    fail(loc, {"optimizer"}, err.what());
  }

  for (const auto& f : c.output.formats) {
    must(f == "csv" || f == "manifest", {"output", "formats"},
         "unknown output format \"" + f + "\" (csv, manifest)");
  }
}

}  // namespace

ScenarioConfig ScenarioConfig::parse(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& err) {
    const Locator loc(text, {});
    throw ConfigError("line " + std::to_string(loc.line_at(err.byte == 0 ? 0 : err.byte - 1)) +
                      ": malformed JSON: " + err.what());
  }
  Path prefix;
  const json* root = &doc;
  if (doc.is_object() && doc.contains("manifest_version")) {
    if (!doc.contains("config")) throw ConfigError("line 1: manifest has no config member");
    root = &doc.at("config");
    prefix = {"config"};
  }
  const Locator loc(text, prefix);
  ScenarioConfig c;
  read_config(Reader(*root, {}, loc), c);
  check(c, &loc);
  return c;
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void ScenarioConfig::validate() const { check(*this, nullptr); }

nlohmann::json ScenarioConfig::to_json() const {
  json pairs = json::array();
  for (auto [a, b] : experiment.pairs) pairs.push_back({a, b});
  const OptConfig& oc = optimizer.config;
  return {
      {"device",
       {{"rows", device.rows},
        {"cols", device.cols},
        {"frequency_pattern", device.frequency_pattern},
        {"checkerboard_ghz", device.checkerboard_ghz},
        {"frequencies_ghz", device.frequencies_ghz},
        {"anharmonicity_ghz", device.anharmonicity_ghz},
        {"levels", device.levels},
        {"addressable", device.addressable}}},
      {"crosstalk", {{"sigma", crosstalk.sigma}, {"seed", crosstalk.seed}}},
      {"coupling", {{"j_mhz", coupling.j_mhz}}},
      {"decoherence",
       {{"enabled", decoherence.enabled},
        {"t1_mean_us", decoherence.t1_mean_us},
        {"t1_std_us", decoherence.t1_std_us},
        {"t2_ratio", decoherence.t2_ratio},
        {"seed", decoherence.seed}}},
      {"experiment",
       {{"type", experiment.type},
        {"gate_times_ns", experiment.gate_times_ns},
        {"pulse_family", experiment.pulse_family},
        {"targets_seed", experiment.targets_seed},
        {"n_draws", experiment.n_draws},
        {"pairs", pairs},
        {"program", experiment.program},
        {"initial_pulses", experiment.initial_pulses},
        {"cr_reference", experiment.cr_reference},
        {"steps_per_ns", experiment.steps_per_ns},
        {"min_steps", experiment.min_steps}}},
      {"expansion",
       {{"d", expansion.d},
        {"o", expansion.o},
        {"weight_cutoff", expansion.weight_cutoff},
        {"levels_override", expansion.levels_override},
        {"dim_cap", expansion.dim_cap}}},
      {"optimizer",
       {{"enabled", optimizer.enabled},
        {"max_iters", oc.max_iters},
        {"grad_tol", oc.grad_tol},
        {"step_tol", oc.step_tol},
        {"fd_step", oc.fd_step},
        {"richardson", oc.richardson},
        {"line_search",
         {{"sufficient_decrease", oc.line_search.sufficient_decrease},
          {"backtrack", oc.line_search.backtrack},
          {"max_backtracks", oc.line_search.max_backtracks}}},
        {"n_starts", oc.n_starts},
        {"jitter", oc.jitter},
        {"seed", oc.seed},
        {"threads", oc.threads}}},
      {"output", {{"dir", output.dir}, {"formats", output.formats}}},
  };
}

bool ScenarioConfig::writes(std::string_view format) const {
  return std::find(output.formats.begin(), output.formats.end(), format) != output.formats.end();
}

LatticeSpec ScenarioConfig::lattice() const {
  LatticeSpec lattice;
  lattice.rows = device.rows;
  lattice.cols = device.cols;
  lattice.addressable = device.addressable;
  if (device.rows < 1 || device.cols < 1) return lattice;
  if (device.frequency_pattern == "checkerboard" && device.checkerboard_ghz.size() == 2) {
    lattice.frequencies_ghz = LatticeSpec::checkerboard(device.rows, device.cols,
                                                        device.checkerboard_ghz[0],
                                                        device.checkerboard_ghz[1]);
  } else if (device.frequency_pattern == "eight_color") {
    lattice.frequencies_ghz = LatticeSpec::eight_color(device.rows, device.cols);
  } else {
    lattice.frequencies_ghz = device.frequencies_ghz;
  }
  return lattice;
}

DeviceModel ScenarioConfig::build_device() const {
  DeviceModel model;
  model.lattice = lattice();
  const CounterRng t1_rng(decoherence.seed, 0x7431);
  for (int k = 0; k < model.lattice.n_sites(); ++k) {
    TransmonSpec spec;
    spec.frequency_ghz = model.lattice.frequencies_ghz[k];
    spec.anharmonicity_ghz = device.anharmonicity_ghz;
    spec.levels = device.levels;
    if (decoherence.enabled) {
      // Truncated normal by redrawing: a non-positive T1 is unphysical.
      CounterRng rng = t1_rng.substream(static_cast<std::uint64_t>(k));
      double t1_us = 0.0;
      for (int attempt = 0; attempt < 64 && t1_us <= 0.0; ++attempt) {
        t1_us = decoherence.t1_mean_us + decoherence.t1_std_us * rng.normal();
      }
      if (t1_us <= 0.0) throw ConfigError("decoherence: cannot draw a positive T1");
      spec.t1_ns = t1_us * 1e3;
      spec.t2_ns = decoherence.t2_ratio * t1_us * 1e3;
    }
    model.transmons.push_back(spec);
  }
  model.coupling = CouplingGraph::uniform(model.lattice, coupling.j_mhz * 1e-3);
  model.validate();
  return model;
}

CrosstalkSpec ScenarioConfig::build_crosstalk(int draw) const {
  const std::uint64_t seed =
      draw == 0 ? crosstalk.seed
                : CounterRng(crosstalk.seed, static_cast<std::uint64_t>(draw)).next_u64();
  return sample_crosstalk(lattice(), crosstalk.sigma, seed);
}

std::vector<std::pair<int, int>> ScenarioConfig::cr_pairs() const {
  if (!experiment.pairs.empty()) return experiment.pairs;
  std::vector<std::pair<int, int>> out;
  for (int r = 0; r < device.rows; ++r) {
    for (int c = 0; c + 1 < device.cols; c += 2) {
      out.emplace_back(r * device.cols + c, r * device.cols + c + 1);
    }
  }
  return out;
}

void apply_overrides(ScenarioConfig& config, const RunOverrides& overrides) {
  if (overrides.out_dir) config.output.dir = overrides.out_dir->string();
  if (overrides.threads) config.optimizer.config.threads = *overrides.threads;
  if (overrides.levels) {
    config.device.levels = *overrides.levels;
    config.expansion.levels_override = *overrides.levels;
  }
  config.validate();
}

}  // namespace xtalk
