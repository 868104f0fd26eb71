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

#include "xtalk/errors.hpp"
#include "xtalk/gates.hpp"
#include "xtalk/local_sim.hpp"

namespace xtalk {

TimeGrid LocalSimOptions::grid_for(double duration) const {
  if (!(duration > 0.0)) throw ValidationError("simulation duration must be positive");
  const int n = std::max(min_steps, static_cast<int>(std::ceil(duration * steps_per_ns)));
  return TimeGrid(0.0, duration, n);
}

SiteResult simulate_site(const DeviceModel& device, int site, const PulseProgram& program,
                         const CrosstalkSpec& crosstalk, const TimeGrid& grid,
                         const LocalSimOptions& options) {
  JointOptions jopts;
  jopts.levels_override = options.levels_override;
  jopts.include_coupling = false;
  const JointHamiltonian h(device, {site}, program, crosstalk, jopts);
  const HamiltonianFn fn = [&h](double t) { return h(t); };
  const Dims dims = h.dims();
  std::vector<Matrix> collapse;
  if (options.decoherence) collapse = h.collapse_ops();

  SiteResult out{QuantumChannel::identity(dims), {QuantumChannel::identity({2}), 0.0}};
  if (collapse.empty()) {
    Matrix u;
    if (h.driven()) {
      u = propagate_unitary(fn, grid, dims).matrix();
    } else {
      u = expm_hermitian(h.static_part(), grid.duration());
    }
    out.full = QuantumChannel::unitary(std::move(u), dims);
  } else {
    LindbladOptions lopts;
    lopts.scheme = options.scheme;
    out.full = QuantumChannel::superop(lindblad_superop(fn, collapse, grid, lopts), dims);
  }
  out.qubit = project_to_qubit(out.full);
  return out;
}

ProjectedMap project_to_qubit(const QuantumChannel& full) {
  const int d = full.dim();
  if (d < 2) throw ValidationError("project_to_qubit needs at least two levels");
  ProjectedMap out{QuantumChannel::identity({2}), 0.0};
  if (full.form() == QuantumChannel::Form::kUnitary || full.form() == QuantumChannel::Form::kKraus) {
    std::vector<Matrix> ks;
    double kept = 0.0;
    for (const Matrix& k : full.kraus_operators()) {
      ks.push_back(k.topLeftCorner(2, 2));
      kept += ks.back().squaredNorm();
    }
    out.leakage = std::clamp(1.0 - 0.5 * kept, 0.0, 1.0);
    out.map = QuantumChannel::kraus(std::move(ks), {2});
    return out;
  }
  const Matrix s = full.superoperator();
  Matrix q(4, 4);
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < 2; ++i) {
      for (int l = 0; l < 2; ++l) {
        for (int k = 0; k < 2; ++k) q(i + 2 * j, k + 2 * l) = s(i + d * j, k + d * l);
      }
    }
  }
  // tr E'(1) = sum_{i,k} q(i + 2 i, k + 2 k)
  double kept = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) kept += q(3 * i, 3 * k).real();
  }
  out.leakage = std::clamp(1.0 - 0.5 * kept, 0.0, 1.0);
  out.map = QuantumChannel::superop(std::move(q), {2});
  return out;
}

double local_process_fidelity(const Matrix& target, const QuantumChannel& actual) {
  if (target.rows() != 2 || actual.dim() != 2) {
    throw ValidationError("local_process_fidelity compares single-qubit maps");
  }
  const double phi = process_fidelity(QuantumChannel::unitary(target, {2}), actual);
  return std::clamp(phi, 0.0, 1.0);
}

double multiplicative_fidelity(std::span<const double> per_site) {
  double p = 1.0;
  for (double f : per_site) {
    if (!(f >= 0.0 && f <= 1.0)) throw ValidationError("site fidelities must lie in [0, 1]");
    p *= f;
  }
  return p;
}

LocalSimResult simulate_local(const DeviceModel& device, const PulseProgram& program,
                              const CrosstalkSpec& crosstalk, const std::vector<Matrix>& targets,
                              const TimeGrid& grid, const LocalSimOptions& options) {
  const int n = device.n_sites();
  if (static_cast<int>(targets.size()) != n) {
    throw ValidationError("simulate_local needs one target per site");
  }
  LocalSimResult out;
  double sum_phi = 0.0;
  double sum_leak = 0.0;
  for (int k = 0; k < n; ++k) {
    SiteResult site = simulate_site(device, k, program, crosstalk, grid, options);
    const double phi = local_process_fidelity(targets[k], site.qubit.map);
    out.per_site_map.push_back(site.qubit.map);
    out.per_site_fidelity.push_back(phi);
    out.per_site_leakage.push_back(site.qubit.leakage);
    sum_phi += phi;
    sum_leak += site.qubit.leakage;
  }
  out.r_avg = 1.0 - sum_phi / n;
  out.mean_leakage = sum_leak / n;
  return out;
}

}  // namespace xtalk
