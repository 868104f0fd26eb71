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
#include <sstream>

#include "xtalk/errors.hpp"
#include "xtalk/log.hpp"
#include "xtalk/pauli_expansion.hpp"

namespace xtalk {

double PauliDistribution::total() const {
  double sum = 0.0;
  for (const auto& [index, p] : entries) sum += p;
  return sum;
}

double PauliDistribution::probability(PauliIndex index) const {
  const auto it = entries.find(index);
  return it == entries.end() ? 0.0 : it->second;
}

namespace {

/// Base-4 index over `sites` (in order) of the global string `a`.
PauliIndex restrict_to(PauliIndex a, const std::vector<int>& sites, int n) {
  PauliIndex local = 0;
  for (int s : sites) local = 4 * local + static_cast<PauliIndex>(pauli_digit(a, s, n));
  return local;
}

/// Calls fn(index) for every n-qubit string of weight <= w, in increasing
/// index order within each weight.
template <typename Fn>
void for_each_low_weight(int n, int w, Fn&& fn) {
  std::vector<int> support;
  std::vector<PauliIndex> out;
  // Depth-first over increasing site lists.
  auto rec = [&](auto&& self, int next, PauliIndex acc) -> void {
    out.push_back(acc);
    if (static_cast<int>(support.size()) == w) return;
    for (int s = next; s < n; ++s) {
      support.push_back(s);
      for (PauliIndex code = 1; code < 4; ++code) {
        self(self, s + 1, acc | (code << (2 * (n - 1 - s))));
      }
      support.pop_back();
    }
  };
  rec(rec, 0, 0);
  std::sort(out.begin(), out.end());
  for (PauliIndex a : out) fn(a);
}

}  // namespace

AssemblyReport assemble_global(const std::map<Component, std::vector<double>>& marginals,
                               const InteractionGraph& graph, int weight_cutoff) {
  graph.validate();
  if (weight_cutoff < 0) throw ValidationError("weight cutoff must be nonnegative");
  const int n = graph.n_sites;
  const int n_nodes = graph.n_nodes();
  const auto adj = graph.adjacency();

  struct Factor {
    std::vector<int> sites;
    const std::vector<double>* rates;
  };
  std::vector<Factor> edge_factors;
  std::vector<int> degree(n_nodes, 0);
  auto sites_of = [&](const std::vector<int>& nodes) {
    std::vector<int> sites;
    for (int v : nodes) sites.insert(sites.end(), graph.nodes[v].sites.begin(), graph.nodes[v].sites.end());
    return sites;
  };
  for (const auto& [component, rates] : marginals) {
    if (component.nodes.size() > 2) throw ValidationError("global assembly assumes o = 2");
    const std::vector<int> sites = sites_of(component.nodes);
    if (rates.size() != pauli_count(static_cast<int>(sites.size()))) {
      throw ValidationError("component marginal has the wrong length");
    }
  }
  for (const InteractionEdge& e : graph.edges) {
    Component c;
    c.nodes = {e.a, e.b};
    c.edges = {{e.a, e.b}};
    const auto it = marginals.find(c);
    if (it == marginals.end()) {
      std::ostringstream msg;
      msg << "missing marginal for edge component (" << e.a << ", " << e.b << ")";
      throw ValidationError(msg.str());
    }
    edge_factors.push_back({sites_of(c.nodes), &it->second});
    ++degree[e.a];
    ++degree[e.b];
  }

  // Node marginals: the component's own for isolated nodes, otherwise the
  // average of the incident edge marginals.
  AssemblyReport report;
  std::vector<std::vector<double>> node_rates(n_nodes);
  for (int v = 0; v < n_nodes; ++v) {
    const int k = static_cast<int>(graph.nodes[v].sites.size());
    if (degree[v] == 0) {
      Component c;
      c.nodes = {v};
      const auto it = marginals.find(c);
      if (it == marginals.end()) {
        throw ValidationError("missing marginal for isolated node " + std::to_string(v));
      }
      node_rates[v] = it->second;
      continue;
    }
    std::vector<std::vector<double>> views;
    for (int w : adj[v]) {
      const int a = std::min(v, w);
      const int b = std::max(v, w);
      Component c;
      c.nodes = {a, b};
      c.edges = {{a, b}};
      const std::vector<double>& rates = marginals.at(c);
      const int ka = static_cast<int>(graph.nodes[a].sites.size());
      const int kb = static_cast<int>(graph.nodes[b].sites.size());
      std::vector<int> keep;
      for (int i = 0; i < (v == a ? ka : kb); ++i) keep.push_back(v == a ? i : ka + i);
      views.push_back(marginalize_rates(rates, ka + kb, keep));
    }
    std::vector<double> mean(pauli_count(k), 0.0);
    for (const auto& view : views) {
      for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += view[i] / views.size();
    }
    for (const auto& view : views) {
      for (std::size_t i = 0; i < mean.size(); ++i) {
        report.max_node_discrepancy = std::max(report.max_node_discrepancy, std::abs(view[i] - mean[i]));
      }
    }
    node_rates[v] = std::move(mean);
  }
  if (report.max_node_discrepancy > 1e-6) {
    std::ostringstream msg;
    msg << "inconsistent node marginals (max discrepancy " << report.max_node_discrepancy << ")";
    warn(msg.str());
  }

  PauliDistribution& dist = report.distribution;
  dist.n_sites = n;
  dist.weight_cutoff = weight_cutoff;
  for_each_low_weight(n, std::min(weight_cutoff, n), [&](PauliIndex a) {
    double p = 1.0;
    for (const Factor& f : edge_factors) p *= (*f.rates)[restrict_to(a, f.sites, n)];
    for (int v = 0; v < n_nodes && p != 0.0; ++v) {
      const int exponent = 1 - degree[v];
      if (exponent == 0) continue;
      const double pv = node_rates[v][restrict_to(a, graph.nodes[v].sites, n)];
      if (exponent < 0 && pv <= 0.0) {
        p = 0.0;  // consistent factors vanish here as well
      } else {
        p *= std::pow(pv, exponent);
      }
    }
    dist.entries.emplace(a, p);
  });
  return report;
}

double fidelity_from_rates(const PauliDistribution& distribution, const InteractionGraph& graph,
                           const std::vector<int>& nodes) {
  std::vector<int> sites;
  for (int v : nodes) {
    if (v < 0 || v >= graph.n_nodes()) throw ValidationError("node out of range");
    sites.insert(sites.end(), graph.nodes[v].sites.begin(), graph.nodes[v].sites.end());
  }
  double phi = 0.0;
  for (const auto& [a, p] : distribution.entries) {
    if (restrict_to(a, sites, distribution.n_sites) == 0) phi += p;
  }
  return phi;
}

ExpansionResult run_expansion(const InteractionGraph& graph, const ExpansionOrder& order,
                              const DeviceModel& device, const PulseProgram& program,
                              const CrosstalkSpec& crosstalk, const NodeTargets& targets,
                              const TimeGrid& grid, const ExpansionOptions& options,
                              std::optional<int> weight_cutoff) {
  order.validate();
  ExpansionResult result;
  struct Cached {
    QuantumChannel channel;
    double leakage;
  };
  std::map<std::vector<int>, Cached> cache;
  for (const Component& c : enumerate_components(graph, order.o)) {
    ComponentChannel cc;
    cc.component = c;
    cc.environment = environment_closure(c.nodes, graph, order.d);
    cc.sites = closure_sites(graph, c.nodes, cc.environment);
    auto it = cache.find(cc.sites);
    if (it == cache.end()) {
      double leakage = 0.0;
      QuantumChannel ch = evolve_sites(device, cc.sites, program, crosstalk,
                                       ideal_on_sites(graph, cc.sites, targets), grid, options, &leakage);
      it = cache.emplace(cc.sites, Cached{std::move(ch), leakage}).first;
    }
    cc.channel = it->second.channel;
    cc.leakage = it->second.leakage;
    std::vector<int> positions;
    for (int v : c.nodes) {
      for (int s : graph.nodes[v].sites) {
        positions.push_back(static_cast<int>(std::lower_bound(cc.sites.begin(), cc.sites.end(), s) -
                                             cc.sites.begin()));
      }
    }
    cc.marginal_rates = marginal_rates_from_channel(cc.channel, positions);
    result.components.push_back(std::move(cc));
  }
  result.distinct_closures = static_cast<int>(cache.size());
  if (weight_cutoff && order.o == 2) {
    std::map<Component, std::vector<double>> marginals;
    for (const ComponentChannel& cc : result.components) marginals[cc.component] = cc.marginal_rates;
    result.assembly = assemble_global(marginals, graph, *weight_cutoff);
  }
  return result;
}

}  // namespace xtalk
