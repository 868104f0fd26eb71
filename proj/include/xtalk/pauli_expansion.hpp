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

#include <map>
#include <optional>
#include <vector>

#include "xtalk/device.hpp"
#include "xtalk/linalg.hpp"
#include "xtalk/pauli.hpp"

namespace xtalk {

// -- interaction graph ------------------------------------------------------

struct InteractionNode {
  std::vector<int> sites;
};

struct InteractionEdge {
  int a = 0;  ///< node indices, a < b
  int b = 0;
  bool coupling = false;   ///< capacitive J edge
  bool crosstalk = false;  ///< drive bleed-through edge
};

struct InteractionGraph {
  int n_sites = 0;
  std::vector<InteractionNode> nodes;
  std::vector<InteractionEdge> edges;

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  std::vector<std::vector<int>> adjacency() const;
  bool adjacent(int a, int b) const;
  /// Node owning each site.
  std::vector<int> node_of_site() const;
  void validate() const;

  /// One node per site; edges from the coupling graph and the crosstalk
  /// sparsity set.
  static InteractionGraph from_device(const DeviceModel& device, const CrosstalkSpec* crosstalk);
  /// Groups the given site sets (e.g. CR pairs) into single nodes; every other
  /// site is its own node. Edges are induced from the site-level graph.
  static InteractionGraph grouped(const DeviceModel& device, const CrosstalkSpec* crosstalk,
                                  const std::vector<std::vector<int>>& groups);
  /// Single-site nodes on a rows x cols grid with nearest-neighbour edges.
  static InteractionGraph grid(int rows, int cols);
  static InteractionGraph from_edges(int n_nodes, const std::vector<std::pair<int, int>>& edges);
};

struct ExpansionOrder {
  int d = 1;
  int o = 2;
  void validate() const;
};

// -- components -------------------------------------------------------------

struct Component {
  std::vector<int> nodes;                  ///< sorted
  std::vector<std::pair<int, int>> edges;  ///< sorted node pairs of G inside `nodes`

  bool operator<(const Component& other) const;
  bool operator==(const Component& other) const = default;
};

/// Connected induced subgraphs of order <= o. A component of order below o
/// is kept only when no G-edge leaves it.
std::vector<Component> enumerate_components(const InteractionGraph& graph, int o);

/// Nodes within graph distance d of `component`, excluding the component.
std::vector<int> environment_closure(const std::vector<int>& component,
                                     const InteractionGraph& graph, int d);

// -- rates ------------------------------------------------------------------

inline constexpr double kNegativeClampTol = 1e-9;
inline constexpr double kNegativeErrorTol = 1e-6;

/// p = W^-1 f over all 4^m Pauli strings. Negatives above -1e-6 are clamped
/// to zero (with a warning beyond -1e-9); larger ones raise SimulationError.
std::vector<double> pauli_rates_from_channel(const QuantumChannel& channel);
/// Rates restricted to strings supported on `qubits` (marginal over the rest).
std::vector<double> marginal_rates_from_channel(const QuantumChannel& channel,
                                                const std::vector<int>& qubits);
/// Sums out every qubit not listed in `keep`; the result is indexed over
/// `keep` in the given order.
std::vector<double> marginalize_rates(const std::vector<double>& rates, int n_qubits,
                                      const std::vector<int>& keep);
/// Clamps small negatives in place and validates the result.
void sanitize_rates(std::vector<double>& rates);

// -- component evolution ----------------------------------------------------

struct ExpansionOptions {
  /// Levels per transmon inside closures; 0 keeps the device value.
  int levels_override = 2;
  double steps_per_ns = 20.0;
  int min_steps = 64;
  bool decoherence = false;
  LindbladScheme scheme = LindbladScheme::kStrangSplit;
  int dim_cap = 256;
};

struct ComponentChannel {
  Component component;
  std::vector<int> environment;  ///< node indices
  std::vector<int> sites;        ///< closure sites, ascending
  QuantumChannel channel = QuantumChannel::identity({2});  ///< error map on 2^|sites|
  std::vector<double> marginal_rates;  ///< over the component's sites
  double leakage = 0.0;
};

/// Ideal gate per node (acting on the node's sites in order). Missing nodes
/// default to the identity.
using NodeTargets = std::map<int, Matrix>;

/// Sites of the component and its environment, ascending.
std::vector<int> closure_sites(const InteractionGraph& graph, const std::vector<int>& component,
                               const std::vector<int>& environment);

/// Qubit-projected error channel of `sites` evolved jointly under the
/// program: the ideal factorized gate is inverted so only errors remain.
QuantumChannel evolve_sites(const DeviceModel& device, const std::vector<int>& sites,
                            const PulseProgram& program, const CrosstalkSpec& crosstalk,
                            const Matrix& ideal, const TimeGrid& grid,
                            const ExpansionOptions& options, double* leakage = nullptr);

/// Tensor product of node targets in closure-site order.
Matrix ideal_on_sites(const InteractionGraph& graph, const std::vector<int>& sites,
                      const NodeTargets& targets);

ComponentChannel evolve_component(const InteractionGraph& graph, const Component& component,
                                  const std::vector<int>& environment, const DeviceModel& device,
                                  const PulseProgram& program, const CrosstalkSpec& crosstalk,
                                  const NodeTargets& targets, const TimeGrid& grid,
                                  const ExpansionOptions& options);

// -- assembly ---------------------------------------------------------------

struct PauliDistribution {
  int n_sites = 0;
  int weight_cutoff = 0;
  std::map<PauliIndex, double> entries;

  double total() const;
  double probability(PauliIndex index) const;
};

struct AssemblyReport {
  PauliDistribution distribution;
  double max_node_discrepancy = 0.0;
};

/// Marginals keyed by component; each is indexed over the component's sites
/// in ascending node order (sites of a node in their stored order). Assumes
/// o = 2: edge components and isolated nodes.
AssemblyReport assemble_global(const std::map<Component, std::vector<double>>& marginals,
                               const InteractionGraph& graph, int weight_cutoff);

/// Probability of the identity on `qubits` of a rate vector over n qubits.
double fidelity_from_rates(const std::vector<double>& rates, int n_qubits,
                           const std::vector<int>& qubits);
/// Same for a global distribution and a set of nodes.
double fidelity_from_rates(const PauliDistribution& distribution, const InteractionGraph& graph,
                           const std::vector<int>& nodes);

// -- driver -----------------------------------------------------------------

struct ExpansionResult {
  std::vector<ComponentChannel> components;
  AssemblyReport assembly;
  int distinct_closures = 0;
};

/// Runs the (d, o) expansion. Components whose closures cover the same sites
/// share one simulation. The global distribution is assembled only for o = 2
/// and when a weight cutoff is given.
ExpansionResult run_expansion(const InteractionGraph& graph, const ExpansionOrder& order,
                              const DeviceModel& device, const PulseProgram& program,
                              const CrosstalkSpec& crosstalk, const NodeTargets& targets,
                              const TimeGrid& grid, const ExpansionOptions& options,
                              std::optional<int> weight_cutoff = 2);

}  // namespace xtalk
