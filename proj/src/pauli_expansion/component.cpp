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
#include <map>
#include <set>

#include "xtalk/errors.hpp"
#include "xtalk/pauli_expansion.hpp"

namespace xtalk {
namespace {

/// Basis indices of the joint space whose every factor is in {0, 1}, in the
/// order of the qubit tensor product.
std::vector<int> qubit_indices(const Dims& dims) {
  const int m = static_cast<int>(dims.size());
  std::vector<int> idx;
  for (int q = 0; q < (1 << m); ++q) {
    int flat = 0;
    for (int p = 0; p < m; ++p) flat = flat * dims[p] + ((q >> (m - 1 - p)) & 1);
    idx.push_back(flat);
  }
  return idx;
}

/// Operator on m qubits acting as `local` on `positions` (most significant
/// first) and as the identity elsewhere.
Matrix embed_on_positions(const Matrix& local, const std::vector<int>& positions, int m) {
  const int dim = 1 << m;
  int mask = 0;
  for (int p : positions) mask |= 1 << (m - 1 - p);
  auto local_index = [&](int b) {
    int l = 0;
    for (int p : positions) l = 2 * l + ((b >> (m - 1 - p)) & 1);
    return l;
  };
  Matrix out = Matrix::Zero(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      if ((r & ~mask) != (c & ~mask)) continue;
      out(r, c) = local(local_index(r), local_index(c));
    }
  }
  return out;
}

}  // namespace

std::vector<int> closure_sites(const InteractionGraph& graph, const std::vector<int>& component,
                               const std::vector<int>& environment) {
  std::set<int> sites;
  for (const auto* list : {&component, &environment}) {
    for (int v : *list) {
      if (v < 0 || v >= graph.n_nodes()) throw ValidationError("closure node out of range");
      sites.insert(graph.nodes[v].sites.begin(), graph.nodes[v].sites.end());
    }
  }
  return {sites.begin(), sites.end()};
}

Matrix ideal_on_sites(const InteractionGraph& graph, const std::vector<int>& sites,
                      const NodeTargets& targets) {
  const int m = static_cast<int>(sites.size());
  Matrix out = Matrix::Identity(1 << m, 1 << m);
  const std::vector<int> owner = graph.node_of_site();
  std::set<int> nodes;
  for (int s : sites) nodes.insert(owner.at(s));
  for (int v : nodes) {
    const auto it = targets.find(v);
    if (it == targets.end()) continue;
    const auto& node_sites = graph.nodes[v].sites;
    std::vector<int> positions;
    for (int s : node_sites) {
      const auto pos = std::lower_bound(sites.begin(), sites.end(), s);
      if (pos == sites.end() || *pos != s) {
        throw ValidationError("closure splits an interaction node");
      }
      positions.push_back(static_cast<int>(pos - sites.begin()));
    }
    const int dim = 1 << node_sites.size();
    if (it->second.rows() != dim || it->second.cols() != dim) {
      throw ValidationError("node target has the wrong dimension");
    }
    out = embed_on_positions(it->second, positions, m) * out;
  }
  return out;
}

QuantumChannel evolve_sites(const DeviceModel& device, const std::vector<int>& sites,
                            const PulseProgram& program, const CrosstalkSpec& crosstalk,
                            const Matrix& ideal, const TimeGrid& grid,
                            const ExpansionOptions& options, double* leakage) {
  JointOptions jopts;
  jopts.levels_override = options.levels_override;
  jopts.dim_cap = options.dim_cap;
  const JointHamiltonian h(device, sites, program, crosstalk, jopts);
  const int m = static_cast<int>(sites.size());
  const int q = 1 << m;
  if (ideal.rows() != q || ideal.cols() != q) {
    throw ValidationError("ideal gate dimension does not match the closure");
  }
  const std::vector<int> idx = qubit_indices(h.dims());
  const Dims qubit_dims(m, 2);
  const double t_end = grid.t_end();
  const HamiltonianFn fn = [&h](double t) { return h(t); };
  std::vector<Matrix> collapse;
  if (options.decoherence) collapse = h.collapse_ops();

  if (collapse.empty()) {
    Matrix u = h.driven() ? propagate_unitary(fn, grid, h.dims()).matrix()
                          : expm_hermitian(h.static_part(), grid.duration());
    u = h.to_site_frames(u, t_end);
    Matrix k(q, q);
    for (int c = 0; c < q; ++c) {
      for (int r = 0; r < q; ++r) k(r, c) = u(idx[r], idx[c]);
    }
    if (leakage != nullptr) *leakage = std::clamp(1.0 - k.squaredNorm() / q, 0.0, 1.0);
    return QuantumChannel::kraus({ideal.adjoint() * k}, qubit_dims);
  }

  LindbladOptions lopts;
  lopts.scheme = options.scheme;
  const Matrix s = h.superop_to_site_frames(lindblad_superop(fn, collapse, grid, lopts), t_end);
  const int d = h.dim();
  Matrix sq(q * q, q * q);
  for (int l = 0; l < q; ++l) {
    for (int k = 0; k < q; ++k) {
      for (int j = 0; j < q; ++j) {
        for (int i = 0; i < q; ++i) sq(i + q * j, k + q * l) = s(idx[i] + d * idx[j], idx[k] + d * idx[l]);
      }
    }
  }
  if (leakage != nullptr) {
    double kept = 0.0;
    for (int i = 0; i < q; ++i) {
      for (int k = 0; k < q; ++k) kept += sq(i + q * i, k + q * k).real();
    }
    *leakage = std::clamp(1.0 - kept / q, 0.0, 1.0);
  }
  return QuantumChannel::superop(superop_from_unitary(ideal.adjoint()) * sq, qubit_dims);
}

ComponentChannel evolve_component(const InteractionGraph& graph, const Component& component,
                                  const std::vector<int>& environment, const DeviceModel& device,
                                  const PulseProgram& program, const CrosstalkSpec& crosstalk,
                                  const NodeTargets& targets, const TimeGrid& grid,
                                  const ExpansionOptions& options) {
  ComponentChannel out;
  out.component = component;
  out.environment = environment;
  out.sites = closure_sites(graph, component.nodes, environment);
  out.channel = evolve_sites(device, out.sites, program, crosstalk,
                             ideal_on_sites(graph, out.sites, targets), grid, options, &out.leakage);
  std::vector<int> positions;
  for (int v : component.nodes) {
    for (int s : graph.nodes[v].sites) {
      positions.push_back(
          static_cast<int>(std::lower_bound(out.sites.begin(), out.sites.end(), s) - out.sites.begin()));
    }
  }
  out.marginal_rates = marginal_rates_from_channel(out.channel, positions);
  return out;
}

}  // namespace xtalk
