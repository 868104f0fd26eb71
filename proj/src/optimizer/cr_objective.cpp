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
#include <map>
#include <set>

#include "xtalk/errors.hpp"
#include "xtalk/pulse_optimizer.hpp"

namespace xtalk {

QuantumChannel reduce_to_qubits(const QuantumChannel& channel, const std::vector<int>& keep) {
  const int n = static_cast<int>(channel.dims().size());
  for (int d : channel.dims()) {
    if (d != 2) throw ValidationError("reduce_to_qubits expects qubit subsystems");
  }
  const int m = static_cast<int>(keep.size());
  std::vector<int> env;
  for (int q = 0; q < n; ++q) {
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) env.push_back(q);
  }
  if (static_cast<int>(env.size()) + m != n) throw ValidationError("reduce_to_qubits: bad qubit list");
  const int dk = 1 << m;
  const int de = 1 << (n - m);
  const int big = 1 << n;
  // full[k * de + e]: joint index of kept state k and environment state e.
  std::vector<int> full(static_cast<std::size_t>(dk) * de);
  for (int k = 0; k < dk; ++k) {
    for (int e = 0; e < de; ++e) {
      int idx = 0;
      for (int i = 0; i < m; ++i) idx |= ((k >> (m - 1 - i)) & 1) << (n - 1 - keep[i]);
      for (int i = 0; i < n - m; ++i) idx |= ((e >> (n - m - 1 - i)) & 1) << (n - 1 - env[i]);
      full[k * de + e] = idx;
    }
  }
  Matrix s = Matrix::Zero(dk * dk, dk * dk);
  if (channel.form() == QuantumChannel::Form::kSuperop) {
    const Matrix& sf = channel.superoperator();
    for (int c2 = 0; c2 < dk; ++c2) {
      for (int c1 = 0; c1 < dk; ++c1) {
        for (int r2 = 0; r2 < dk; ++r2) {
          for (int r1 = 0; r1 < dk; ++r1) {
            Complex acc = 0.0;
            for (int e = 0; e < de; ++e) {
              for (int f = 0; f < de; ++f) {
                acc += sf(full[r1 * de + e] + big * full[r2 * de + e],
                          full[c1 * de + f] + big * full[c2 * de + f]);
              }
            }
            s(r1 + dk * r2, c1 + dk * c2) = acc / static_cast<double>(de);
          }
        }
      }
    }
  } else {
    Matrix kij(dk, dk);
    for (const Matrix& k : channel.kraus_operators()) {
      for (int e = 0; e < de; ++e) {
        for (int f = 0; f < de; ++f) {
          for (int c = 0; c < dk; ++c) {
            for (int r = 0; r < dk; ++r) kij(r, c) = k(full[r * de + e], full[c * de + f]);
          }
          s += kron(kij.conjugate(), kij);
        }
      }
    }
    s /= static_cast<double>(de);
  }
  return QuantumChannel::superop(std::move(s), Dims(m, 2));
}

DeviceModel isolate_pairs(const DeviceModel& device, const std::vector<std::pair<int, int>>& pairs) {
  DeviceModel out = device;
  out.coupling.edges.clear();
  for (const CouplingEdge& e : device.coupling.edges) {
    for (const auto& [a, b] : pairs) {
      if ((e.j == a && e.k == b) || (e.j == b && e.k == a)) out.coupling.edges.push_back(e);
    }
  }
  return out;
}

namespace {

double coupling_between(const DeviceModel& device, int a, int b) {
  for (const CouplingEdge& e : device.coupling.edges) {
    if ((e.j == a && e.k == b) || (e.j == b && e.k == a)) return e.j_ghz;
  }
  return 0.0;
}

int steps_for(double duration, const ExpansionOptions& opts) {
  return std::max(opts.min_steps, static_cast<int>(std::ceil(duration * opts.steps_per_ns)));
}

}  // namespace

CrObjective::CrObjective(CrProblem problem)
    : problem_(std::move(problem)),
      grid_(0.0, problem_.t_cr, steps_for(problem_.t_cr, problem_.expansion)) {
  problem_.device.validate();
  problem_.crosstalk.validate();
  if (problem_.pairs.empty()) throw ValidationError("cross-resonance problem needs at least one pair");
  if (problem_.d < 0) throw ValidationError("expansion distance must be nonnegative");
  std::vector<std::vector<int>> groups;
  std::set<int> used;
  for (const auto& [c, t] : problem_.pairs) {
    if (c == t || !used.insert(c).second || !used.insert(t).second) {
      throw ValidationError("cross-resonance pairs must use distinct sites");
    }
    if (!problem_.device.lattice.adjacent(c, t)) {
      throw ValidationError("cross-resonance pair sites must be lattice neighbours");
    }
    groups.push_back({c, t});
    drive_sites_.push_back(c);
    drive_sites_.push_back(t);
  }
  graph_ = InteractionGraph::grouped(problem_.device, &problem_.crosstalk, groups);
  layout_ = ParamLayout::cr(static_cast<int>(drive_sites_.size()));

  const std::vector<int> owner = graph_.node_of_site();
  std::map<std::vector<int>, int> index;
  for (const auto& [c, t] : problem_.pairs) {
    const int node = owner[c];
    pair_node_.push_back(node);
    const std::vector<int> sites =
        closure_sites(graph_, {node}, environment_closure({node}, graph_, problem_.d));
    auto [it, inserted] = index.emplace(sites, static_cast<int>(closures_.size()));
    if (inserted) closures_.push_back(sites);
    pair_closure_.push_back(it->second);
  }
  for (const auto& sites : closures_) {
    std::vector<int> deps;
    for (int b = 0; b < layout_.n_drives; ++b) {
      const int s = drive_sites_[b];
      bool reaches = std::binary_search(sites.begin(), sites.end(), s);
      for (int k : sites) {
        reaches = reaches || (problem_.crosstalk.allowed(s, k) && problem_.crosstalk.beta(s, k) != 0.0);
      }
      if (!reaches) continue;
      for (int p = 0; p < 8; ++p) deps.push_back(8 * b + p);
    }
    deps_.push_back(std::move(deps));
  }
}

RealVector CrObjective::defaults() const {
  RealVector x = RealVector::Zero(layout_.size());
  for (std::size_t p = 0; p < problem_.pairs.size(); ++p) {
    const auto [c, t] = problem_.pairs[p];
    const double delta = angular(problem_.device.lattice.frequencies_ghz[c] -
                                 problem_.device.lattice.frequencies_ghz[t]);
    const double j = angular(coupling_between(problem_.device, c, t));
    if (j == 0.0) throw ValidationError("cross-resonance defaults need a coupled pair");
    const int levels = problem_.expansion.levels_override > 0 ? problem_.expansion.levels_override
                                                             : problem_.device.transmons[c].levels;
    double rate = j / delta;
    if (levels >= 3) {
      const double alpha = angular(problem_.device.transmons[c].anharmonicity_ghz);
      rate *= alpha / (delta + alpha);
    }
    // ZX coefficient (x / 2) * rate integrated over the window gives pi / 4.
    x(8 * (2 * p)) = std::numbers::pi / (2.0 * std::abs(rate) * problem_.t_cr);
  }
  return x;
}

PulseProgram CrObjective::program(const RealVector& x) const {
  if (x.size() != layout_.size()) throw ValidationError("parameter vector has the wrong length");
  PulseProgram prog;
  for (int b = 0; b < layout_.n_drives; ++b) {
    const int site = drive_sites_[b];
    // Controls are driven at their partner's frequency, targets at their own.
    const int carrier_site = b % 2 == 0 ? problem_.pairs[b / 2].second : site;
    Hanning h;
    h.t_gate = problem_.t_cr;
    for (int k = 0; k < 3; ++k) {
      h.cx[k] = x(8 * b + k);
      h.cy[k] = x(8 * b + 3 + k);
    }
    DriveTone tone;
    tone.target_site = site;
    tone.carrier_ghz = problem_.device.lattice.frequencies_ghz[carrier_site] + x(8 * b + 6);
    tone.phase = x(8 * b + 7);
    tone.envelope = h;
    prog.tones.push_back(tone);
  }
  return prog;
}

double CrObjective::closure_term(int closure, const RealVector& x, const LocalInvariantOptions& inv,
                                 std::vector<double>* infidelity,
                                 std::vector<double>* leakage) const {
  const std::vector<int>& sites = closures_[closure];
  const int m = static_cast<int>(sites.size());
  const QuantumChannel channel =
      evolve_sites(problem_.device, sites, program(x), problem_.crosstalk,
                   Matrix::Identity(1 << m, 1 << m), grid_, problem_.expansion);
  auto position = [&](int s) {
    return static_cast<int>(std::lower_bound(sites.begin(), sites.end(), s) - sites.begin());
  };
  double sum = 0.0;
  for (std::size_t p = 0; p < problem_.pairs.size(); ++p) {
    if (pair_closure_[p] != closure) continue;
    const auto [c, t] = problem_.pairs[p];
    const QuantumChannel pair = reduce_to_qubits(channel, {position(c), position(t)});
    const double r = local_invariant_infidelity(pair, problem_.target_class, inv).infidelity;
    sum += r;
    if (infidelity != nullptr) (*infidelity)[p] = r;
    if (leakage != nullptr) {
      const Matrix& s = pair.superoperator();
      double kept = 0.0;
      for (int i = 0; i < 4; ++i) {
        for (int k = 0; k < 4; ++k) kept += s(5 * i, 5 * k).real();
      }
      (*leakage)[p] = std::clamp(1.0 - kept / 4.0, 0.0, 1.0);
    }
  }
  return sum;
}

double CrObjective::operator()(const RealVector& x) const {
  double sum = 0.0;
  for (int c = 0; c < static_cast<int>(closures_.size()); ++c) {
    sum += closure_term(c, x, problem_.invariant, nullptr, nullptr);
  }
  return sum / static_cast<double>(problem_.pairs.size());
}

CrEvaluation CrObjective::evaluate(const RealVector& x, const LocalInvariantOptions* invariant) const {
  CrEvaluation out;
  const std::size_t n = problem_.pairs.size();
  out.pair_infidelity.assign(n, 0.0);
  out.pair_leakage.assign(n, 0.0);
  const LocalInvariantOptions& inv = invariant ? *invariant : problem_.invariant;
  for (int c = 0; c < static_cast<int>(closures_.size()); ++c) {
    closure_term(c, x, inv, &out.pair_infidelity, &out.pair_leakage);
  }
  for (double r : out.pair_infidelity) out.mean += r / static_cast<double>(n);
  return out;
}

RealVector CrObjective::gradient(const RealVector& x, double fd_step, bool richardson) const {
  return separable_gradient(
      [this](int c, const RealVector& v) {
        return closure_term(c, v, problem_.invariant, nullptr, nullptr);
      },
      deps_, 1.0 / static_cast<double>(problem_.pairs.size()), x, fd_step, richardson);
}

}  // namespace xtalk
