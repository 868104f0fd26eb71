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
#include <deque>
#include <set>
#include <string>

#include "xtalk/errors.hpp"
#include "xtalk/pauli_expansion.hpp"

namespace xtalk {

std::vector<std::vector<int>> InteractionGraph::adjacency() const {
  std::vector<std::vector<int>> adj(nodes.size());
  for (const InteractionEdge& e : edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

bool InteractionGraph::adjacent(int a, int b) const {
  if (a > b) std::swap(a, b);
  return std::any_of(edges.begin(), edges.end(),
                     [&](const InteractionEdge& e) { return e.a == a && e.b == b; });
}

std::vector<int> InteractionGraph::node_of_site() const {
  std::vector<int> owner(n_sites, -1);
  for (int v = 0; v < n_nodes(); ++v) {
    for (int s : nodes[v].sites) owner.at(s) = v;
  }
  return owner;
}

void InteractionGraph::validate() const {
  if (n_sites < 1) throw ValidationError("interaction graph needs at least one site");
  std::vector<int> seen(n_sites, 0);
  for (const InteractionNode& node : nodes) {
    if (node.sites.empty()) throw ValidationError("interaction graph node without sites");
    for (int s : node.sites) {
      if (s < 0 || s >= n_sites) throw ValidationError("interaction graph site out of range");
      if (seen[s]++) {
        throw ValidationError("site " + std::to_string(s) + " belongs to two interaction nodes");
      }
    }
  }
  for (int s = 0; s < n_sites; ++s) {
    if (!seen[s]) throw ValidationError("site " + std::to_string(s) + " belongs to no node");
  }
  std::set<std::pair<int, int>> pairs;
  for (const InteractionEdge& e : edges) {
    if (e.a < 0 || e.b >= n_nodes() || e.a >= e.b) {
      throw ValidationError("interaction edges must join two distinct nodes with a < b");
    }
    if (!pairs.insert({e.a, e.b}).second) throw ValidationError("duplicate interaction edge");
  }
}

namespace {

void add_edge(std::map<std::pair<int, int>, InteractionEdge>& edges, int a, int b, bool coupling,
              bool crosstalk) {
  if (a == b) return;
  if (a > b) std::swap(a, b);
  InteractionEdge& e = edges[{a, b}];
  e.a = a;
  e.b = b;
  e.coupling = e.coupling || coupling;
  e.crosstalk = e.crosstalk || crosstalk;
}

InteractionGraph build(const DeviceModel& device, const CrosstalkSpec* crosstalk,
                       std::vector<InteractionNode> nodes) {
  InteractionGraph g;
  g.n_sites = device.n_sites();
  g.nodes = std::move(nodes);
  const std::vector<int> owner = g.node_of_site();
  std::map<std::pair<int, int>, InteractionEdge> edges;
  for (const CouplingEdge& c : device.coupling.edges) {
    if (c.j_ghz != 0.0) add_edge(edges, owner.at(c.j), owner.at(c.k), true, false);
  }
  if (crosstalk != nullptr) {
    for (const auto& [j, k] : crosstalk->sparsity) add_edge(edges, owner.at(j), owner.at(k), false, true);
  }
  for (const auto& [key, e] : edges) g.edges.push_back(e);
  g.validate();
  return g;
}

}  // namespace

InteractionGraph InteractionGraph::from_device(const DeviceModel& device,
                                               const CrosstalkSpec* crosstalk) {
  return grouped(device, crosstalk, {});
}

InteractionGraph InteractionGraph::grouped(const DeviceModel& device, const CrosstalkSpec* crosstalk,
                                           const std::vector<std::vector<int>>& groups) {
  const int n = device.n_sites();
  std::vector<int> grouped_site(n, 0);
  std::vector<InteractionNode> nodes;
  for (const auto& group : groups) {
    for (int s : group) {
      if (s < 0 || s >= n) throw ValidationError("node group site out of range");
      if (grouped_site[s]++) throw ValidationError("site listed in two node groups");
    }
  }
  // Nodes are ordered by their smallest site.
  std::vector<std::pair<int, InteractionNode>> keyed;
  for (const auto& group : groups) {
    if (group.empty()) throw ValidationError("empty node group");
    keyed.push_back({*std::min_element(group.begin(), group.end()), InteractionNode{group}});
  }
  for (int s = 0; s < n; ++s) {
    if (!grouped_site[s]) keyed.push_back({s, InteractionNode{{s}}});
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (auto& [key, node] : keyed) nodes.push_back(std::move(node));
  return build(device, crosstalk, std::move(nodes));
}

InteractionGraph InteractionGraph::grid(int rows, int cols) {
  if (rows < 1 || cols < 1) throw ValidationError("grid dimensions must be positive");
  std::vector<std::pair<int, int>> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int v = r * cols + c;
      if (c + 1 < cols) edges.push_back({v, v + 1});
      if (r + 1 < rows) edges.push_back({v, v + cols});
    }
  }
  return from_edges(rows * cols, edges);
}

InteractionGraph InteractionGraph::from_edges(int n_nodes,
                                              const std::vector<std::pair<int, int>>& edges) {
  InteractionGraph g;
  g.n_sites = n_nodes;
  for (int v = 0; v < n_nodes; ++v) g.nodes.push_back({{v}});
  for (auto [a, b] : edges) {
    if (a > b) std::swap(a, b);
    g.edges.push_back({a, b, true, false});
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const InteractionEdge& x, const InteractionEdge& y) {
    return std::pair(x.a, x.b) < std::pair(y.a, y.b);
  });
  g.validate();
  return g;
}

void ExpansionOrder::validate() const {
  if (d < 0) throw ValidationError("expansion distance d must be nonnegative");
  if (o < 1) throw ValidationError("expansion order o must be at least 1");
}

bool Component::operator<(const Component& other) const {
  if (nodes.size() != other.nodes.size()) return nodes.size() < other.nodes.size();
  if (nodes != other.nodes) return nodes < other.nodes;
  return edges < other.edges;
}

std::vector<Component> enumerate_components(const InteractionGraph& graph, int o) {
  graph.validate();
  if (o < 1) throw ValidationError("expansion order o must be at least 1");
  const auto adj = graph.adjacency();

  // Grow connected vertex sets one neighbour at a time.
  std::set<std::vector<int>> level;
  for (int v = 0; v < graph.n_nodes(); ++v) level.insert({v});
  std::set<std::vector<int>> connected = level;
  for (int size = 2; size <= o; ++size) {
    std::set<std::vector<int>> next;
    for (const auto& set : level) {
      for (int v : set) {
        for (int w : adj[v]) {
          if (std::binary_search(set.begin(), set.end(), w)) continue;
          std::vector<int> grown = set;
          grown.insert(std::upper_bound(grown.begin(), grown.end(), w), w);
          next.insert(std::move(grown));
        }
      }
    }
    connected.insert(next.begin(), next.end());
    level = std::move(next);
  }

  std::vector<Component> out;
  for (const auto& set : connected) {
    const int order = static_cast<int>(set.size());
    bool closed = true;
    for (int v : set) {
      for (int w : adj[v]) closed = closed && std::binary_search(set.begin(), set.end(), w);
    }
    if (order < o && !closed) continue;
    Component c;
    c.nodes = set;
    for (const InteractionEdge& e : graph.edges) {
      if (std::binary_search(set.begin(), set.end(), e.a) &&
          std::binary_search(set.begin(), set.end(), e.b)) {
        c.edges.push_back({e.a, e.b});
      }
    }
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> environment_closure(const std::vector<int>& component,
                                     const InteractionGraph& graph, int d) {
  if (d < 0) throw ValidationError("environment distance must be nonnegative");
  const auto adj = graph.adjacency();
  std::vector<int> dist(graph.n_nodes(), -1);
  std::deque<int> queue;
  for (int v : component) {
    if (v < 0 || v >= graph.n_nodes()) throw ValidationError("component node out of range");
    dist[v] = 0;
    queue.push_back(v);
  }
  std::vector<int> env;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (dist[v] == d) continue;
    for (int w : adj[v]) {
      if (dist[w] >= 0) continue;
      dist[w] = dist[v] + 1;
      env.push_back(w);
      queue.push_back(w);
    }
  }
  std::sort(env.begin(), env.end());
  return env;
}

}  // namespace xtalk
