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
#include <chrono>
#include <cmath>

#include "output.hpp"
#include "xtalk/errors.hpp"
#include "xtalk/pulse_optimizer.hpp"
#include "xtalk/rng.hpp"

namespace xtalk {
namespace {

using nlohmann::json;
using detail::ManifestWriter;
using detail::TableWriter;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::filesystem::path prepare_output(const ScenarioConfig& config) {
  const std::filesystem::path dir(config.output.dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void require_type(const ScenarioConfig& config, std::initializer_list<const char*> types,
                  const char* command) {
  for (const char* t : types) {
    if (config.experiment.type == t) return;
  }
  throw ConfigError("/experiment/type: \"" + config.experiment.type + "\" cannot run with " +
                    command);
}

OptResult optimize(const std::function<double(const RealVector&)>& f,
                   const std::function<RealVector(const RealVector&)>& grad, const RealVector& x0,
                   const OptConfig& config) {
  return minimize_multistart(f, x0, config, nullptr,
                             [&](const RealVector& x, double) { return grad(x); });
}

std::vector<Matrix> draw_targets(std::uint64_t seed, int draw, int n_sites) {
  CounterRng rng = CounterRng(seed, 0x68616172ULL).substream(static_cast<std::uint64_t>(draw));
  std::vector<Matrix> targets;
  for (int k = 0; k < n_sites; ++k) targets.push_back(haar_su2(rng));
  return targets;
}

std::string join_sites(const std::vector<int>& sites) {
  std::string out;
  for (int s : sites) out += (out.empty() ? "" : "-") + std::to_string(s);
  return out;
}

// Wraps the sweep body: failures flush the partial tables with a FAILED
// marker and mark the manifest.
template <class Body>
RunResult run_guarded(ManifestWriter& manifest,
                      std::vector<TableWriter*> tables, Body&& body) {
  const auto start = Clock::now();
  RunResult result;
  try {
    body();
  } catch (const std::exception& err) {
    result.exit_code = 3;
    result.error = err.what();
    for (TableWriter* t : tables) t->fail(result.error);
  }
  result.manifest = manifest.finish(result.error, seconds_since(start));
  return result;
}

}  // namespace

RunResult run_su2_sweep(const ScenarioConfig& config) {
  require_type(config, {"su2_parallel"}, "su2-sweep");
  const auto dir = prepare_output(config);
  const bool csv = config.writes("csv");
  TableWriter results(dir / "results.csv",
                      {"t_ns", "r_avg_raw", "r_avg_opt", "mean_leakage_raw", "mean_leakage_opt",
                       "r_avg_free"},
                      ',', csv);
  TableWriter sites(dir / "sites.csv",
                    {"t_ns", "draw", "site", "fidelity_raw", "fidelity_opt", "leakage_raw",
                     "leakage_opt"},
                    ',', csv);
  ManifestWriter manifest(config, "su2-sweep");

  return run_guarded(manifest, {&results, &sites}, [&] {
    const DeviceModel device = config.build_device();
    const int n = device.n_sites();
    LocalSimOptions sim;
    sim.steps_per_ns = config.experiment.steps_per_ns;
    sim.min_steps = config.experiment.min_steps;
    sim.decoherence = config.decoherence.enabled;
    const int draws = config.experiment.n_draws;

    for (double t : config.experiment.gate_times_ns) {
      const auto row_start = Clock::now();
      double raw = 0.0, opt = 0.0, free = 0.0, leak_raw = 0.0, leak_opt = 0.0;
      json per_draw = json::array();
      for (int d = 0; d < draws; ++d) {
        Su2Problem problem{device, config.build_crosstalk(d),
                           draw_targets(config.experiment.targets_seed, d, n), t, sim};
        Su2Problem clean = problem;
        clean.crosstalk = CrosstalkSpec::none(n);
        const Su2Objective objective(std::move(problem));
        const Su2Objective free_objective(std::move(clean));

        const RealVector x0 = objective.defaults();
        const LocalSimResult before = objective.evaluate(x0);
        const LocalSimResult baseline = free_objective.evaluate(x0);
        RealVector x_opt = x0;
        if (config.optimizer.enabled) {
          const OptConfig& oc = config.optimizer.config;
          const OptResult r = optimize(
              [&](const RealVector& x) { return objective(x); },
              [&](const RealVector& x) { return objective.gradient(x, oc.fd_step, oc.richardson); },
              x0, oc);
          x_opt = r.x_opt;
          manifest.traces().push_back({{"t_ns", t},
                                       {"draw", d},
                                       {"trace", detail::trace_json(r.objective_trace)},
                                       {"stop_reason", r.stop_reason},
                                       {"iterations", r.iterations},
                                       {"converged", r.converged}});
        }
        const LocalSimResult after = objective.evaluate(x_opt);

        raw += before.r_avg / draws;
        opt += after.r_avg / draws;
        free += baseline.r_avg / draws;
        leak_raw += before.mean_leakage / draws;
        leak_opt += after.mean_leakage / draws;
        for (int k = 0; k < n; ++k) {
          sites.add({format_value(t), std::to_string(d), std::to_string(k),
                     format_value(before.per_site_fidelity[k]),
                     format_value(after.per_site_fidelity[k]),
                     format_value(before.per_site_leakage[k]),
                     format_value(after.per_site_leakage[k])});
        }
        json x_json = json::array();
        for (Eigen::Index i = 0; i < x_opt.size(); ++i) x_json.push_back(x_opt(i));
        per_draw.push_back({{"draw", d},
                            {"fidelity_raw", before.per_site_fidelity},
                            {"fidelity_opt", after.per_site_fidelity},
                            {"leakage_raw", before.per_site_leakage},
                            {"leakage_opt", after.per_site_leakage},
                            {"x_opt", x_json}});
      }
      results.add({format_value(t), format_value(raw), format_value(opt), format_value(leak_raw),
                   format_value(leak_opt), format_value(free)});
      manifest.rows().push_back({{"t_ns", t},
                                 {"r_avg_raw", raw},
                                 {"r_avg_opt", opt},
                                 {"r_avg_free", free},
                                 {"mean_leakage_raw", leak_raw},
                                 {"mean_leakage_opt", leak_opt},
                                 {"draws", per_draw},
                                 {"wall_time_s", seconds_since(row_start)}});
      manifest.checkpoint();
    }
  });
}

RunResult run_cr_sweep(const ScenarioConfig& config) {
  require_type(config, {"cr_parallel"}, "cr-sweep");
  const auto dir = prepare_output(config);
  TableWriter results(dir / "results.csv",
                      {"t_ns", "inf_raw", "inf_opt", "worst_pair", "mean_pair", "inf_free"}, ',',
                      config.writes("csv"));
  ManifestWriter manifest(config, "cr-sweep");

  return run_guarded(manifest, {&results}, [&] {
    const DeviceModel device = config.build_device();
    const auto pairs = config.cr_pairs();
    ExpansionOptions expansion;
    expansion.levels_override = config.expansion.levels_override;
    expansion.steps_per_ns = config.experiment.steps_per_ns;
    expansion.min_steps = config.experiment.min_steps;
    expansion.decoherence = config.decoherence.enabled;
    expansion.dim_cap = config.expansion.dim_cap;
    const OptConfig& oc = config.optimizer.config;
    // Reported pair infidelities use the full multi-start dressing search.
    const LocalInvariantOptions refined{.n_starts = 8, .seed = 0x4b414bULL,
                                        .fixed_dressing = false};
    const int draws = config.experiment.n_draws;
    json pair_json = json::array();
    for (auto [c, t] : pairs) pair_json.push_back({c, t});
    manifest.extra()["pairs"] = pair_json;

    for (double t_cr : config.experiment.gate_times_ns) {
      const auto row_start = Clock::now();
      double raw = 0.0, opt = 0.0, free = 0.0, mean_pair = 0.0, worst = 0.0;
      json per_draw = json::array();
      for (int d = 0; d < draws; ++d) {
        CrProblem problem;
        problem.device = device;
        problem.crosstalk = config.build_crosstalk(d);
        problem.pairs = pairs;
        problem.t_cr = t_cr;
        problem.d = config.expansion.d;
        problem.expansion = expansion;
        CrProblem isolated = problem;
        isolated.device = isolate_pairs(device, pairs);
        isolated.crosstalk = CrosstalkSpec::none(device.n_sites());
        isolated.d = 0;
        const CrObjective objective(std::move(problem));
        const CrObjective iso_objective(std::move(isolated));

        RealVector x0 = config.experiment.initial_pulses == "calibrated"
                            ? iso_objective.defaults()
                            : RealVector::Zero(iso_objective.layout().size());
        // Fails fast (e.g. on the dimension cap) before any optimization.
        const double f_start = objective(x0);
        RealVector x_raw = x0;
        json draw_traces;
        if (config.optimizer.enabled && config.experiment.cr_reference == "isolated") {
          const OptResult r = optimize(
              [&](const RealVector& x) { return iso_objective(x); },
              [&](const RealVector& x) {
                return iso_objective.gradient(x, oc.fd_step, oc.richardson);
              },
              x0, oc);
          x_raw = r.x_opt;
          draw_traces["isolated"] = detail::trace_json(r.objective_trace);
        }
        const double f_free = iso_objective(x_raw);
        const double f_raw = x_raw == x0 ? f_start : objective(x_raw);
        RealVector x_opt = x_raw;
        if (config.optimizer.enabled) {
          const OptResult r = optimize(
              [&](const RealVector& x) { return objective(x); },
              [&](const RealVector& x) { return objective.gradient(x, oc.fd_step, oc.richardson); },
              x_raw, oc);
          x_opt = r.x_opt;
          draw_traces["full"] = detail::trace_json(r.objective_trace);
          draw_traces["stop_reason"] = r.stop_reason;
          draw_traces["iterations"] = r.iterations;
        }
        const double f_opt = objective(x_opt);
        const CrEvaluation report = objective.evaluate(x_opt, &refined);
        if (!draw_traces.is_null()) {
          draw_traces["t_ns"] = t_cr;
          draw_traces["draw"] = d;
          manifest.traces().push_back(draw_traces);
        }

        raw += f_raw / draws;
        opt += f_opt / draws;
        free += f_free / draws;
        mean_pair += report.mean / draws;
        for (double v : report.pair_infidelity) worst = std::max(worst, v);
        json x_json = json::array();
        for (Eigen::Index i = 0; i < x_opt.size(); ++i) x_json.push_back(x_opt(i));
        per_draw.push_back({{"draw", d},
                            {"inf_free", f_free},
                            {"inf_raw", f_raw},
                            {"inf_opt", f_opt},
                            {"pair_infidelity", report.pair_infidelity},
                            {"pair_leakage", report.pair_leakage},
                            {"x_opt", x_json}});
      }
      results.add({format_value(t_cr), format_value(raw), format_value(opt), format_value(worst),
                   format_value(mean_pair), format_value(free)});
      manifest.rows().push_back({{"t_ns", t_cr},
                                 {"inf_raw", raw},
                                 {"inf_opt", opt},
                                 {"inf_free", free},
                                 {"worst_pair", worst},
                                 {"mean_pair", mean_pair},
                                 {"draws", per_draw},
                                 {"wall_time_s", seconds_since(row_start)}});
      manifest.checkpoint();
    }
  });
}

RunResult run_pauli_expand(const ScenarioConfig& config) {
  require_type(config, {"pauli_expand", "idle"}, "pauli-expand");
  const auto dir = prepare_output(config);
  const bool csv = config.writes("csv");
  TableWriter marginals(dir / "pauli_marginals.tsv",
                        {"t_ns", "component_id", "pauli_string", "probability"}, '\t', csv);
  TableWriter global(dir / "pauli_global.tsv", {"t_ns", "pauli_string", "probability"}, '\t',
                     csv);
  TableWriter results(dir / "results.csv", {"t_ns", "kind", "id", "sites", "fidelity"}, ',', csv);
  ManifestWriter manifest(config, "pauli-expand");

  return run_guarded(manifest, {&marginals, &global, &results}, [&] {
    const DeviceModel device = config.build_device();
    const CrosstalkSpec crosstalk = config.build_crosstalk(0);
    std::vector<std::vector<int>> groups;
    for (auto [a, b] : config.experiment.pairs) groups.push_back({a, b});
    const InteractionGraph graph = groups.empty()
                                       ? InteractionGraph::from_device(device, &crosstalk)
                                       : InteractionGraph::grouped(device, &crosstalk, groups);
    const ExpansionOrder order{config.expansion.d, config.expansion.o};
    ExpansionOptions options;
    options.levels_override = config.expansion.levels_override;
    options.steps_per_ns = config.experiment.steps_per_ns;
    options.min_steps = config.experiment.min_steps;
    options.decoherence = config.decoherence.enabled;
    options.dim_cap = config.expansion.dim_cap;
    const bool pi2 = config.experiment.type == "pauli_expand" && config.experiment.program == "pi2";
    const std::optional<int> cutoff =
        order.o == 2 ? std::optional<int>(config.expansion.weight_cutoff) : std::nullopt;

    for (double t : config.experiment.gate_times_ns) {
      const auto row_start = Clock::now();
      PulseProgram program;
      NodeTargets targets;
      if (pi2) {
        for (int k = 0; k < device.n_sites(); ++k) {
          DriveTone tone;
          tone.target_site = k;
          tone.carrier_ghz = device.transmons[k].frequency_ghz;
          tone.envelope = default_pi2_pulse(t, device.transmons[k].anharmonicity_ghz);
          program.tones.push_back(tone);
        }
        for (int v = 0; v < graph.n_nodes(); ++v) {
          Matrix u = phased_pi2(0.0);
          for (std::size_t i = 1; i < graph.nodes[v].sites.size(); ++i) u = kron(u, phased_pi2(0.0));
          targets[v] = u;
        }
      }
      const int steps = std::max(options.min_steps,
                                 static_cast<int>(std::ceil(options.steps_per_ns * t)));
      const TimeGrid grid(0.0, t, steps);
      const ExpansionResult run = run_expansion(graph, order, device, program, crosstalk, targets,
                                                grid, options, cutoff);

      json components = json::array();
      for (std::size_t id = 0; id < run.components.size(); ++id) {
        const ComponentChannel& cc = run.components[id];
        std::vector<int> sites;
        for (int v : cc.component.nodes) {
          for (int s : graph.nodes[v].sites) sites.push_back(s);
        }
        const int m = static_cast<int>(sites.size());
        for (std::size_t a = 0; a < cc.marginal_rates.size(); ++a) {
          marginals.stage({format_value(t), std::to_string(id),
                         pauli_label(static_cast<PauliIndex>(a), m),
                         format_value(cc.marginal_rates[a])});
        }
        results.stage({format_value(t), "component", std::to_string(id), join_sites(sites),
                     format_value(cc.marginal_rates.front())});
        components.push_back({{"id", id},
                              {"nodes", cc.component.nodes},
                              {"sites", sites},
                              {"environment", cc.environment},
                              {"closure_sites", cc.sites},
                              {"leakage", cc.leakage}});
      }
      json row = {{"t_ns", t},
                  {"components", components},
                  {"distinct_closures", run.distinct_closures}};
      if (cutoff) {
        const PauliDistribution& dist = run.assembly.distribution;
        for (const auto& [index, p] : dist.entries) {
          global.stage({format_value(t), pauli_label(index, dist.n_sites), format_value(p)});
        }
        for (int v = 0; v < graph.n_nodes(); ++v) {
          results.stage({format_value(t), "node", std::to_string(v),
                       join_sites(graph.nodes[v].sites),
                       format_value(fidelity_from_rates(dist, graph, {v}))});
        }
        for (std::size_t e = 0; e < graph.edges.size(); ++e) {
          const auto& edge = graph.edges[e];
          std::vector<int> sites = graph.nodes[edge.a].sites;
          for (int s : graph.nodes[edge.b].sites) sites.push_back(s);
          results.stage({format_value(t), "edge", std::to_string(e), join_sites(sites),
                       format_value(fidelity_from_rates(dist, graph, {edge.a, edge.b}))});
        }
        row["total_probability"] = dist.total();
        row["max_node_discrepancy"] = run.assembly.max_node_discrepancy;
      }
      marginals.commit();
      global.commit();
      results.commit();
      row["wall_time_s"] = seconds_since(row_start);
      manifest.rows().push_back(row);
      manifest.checkpoint();
    }
  });
}

}  // namespace xtalk
