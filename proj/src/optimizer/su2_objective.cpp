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

#include <set>

#include "xtalk/errors.hpp"
#include "xtalk/pulse_optimizer.hpp"

namespace xtalk {

Su2Objective::Su2Objective(Su2Problem problem)
    : problem_(std::move(problem)), grid_(problem_.sim.grid_for(2.0 * problem_.t_pi2)) {
  problem_.device.validate();
  problem_.crosstalk.validate();
  const int n = problem_.device.n_sites();
  if (problem_.crosstalk.n_sites() != n) throw ValidationError("crosstalk size does not match the device");
  if (static_cast<int>(problem_.targets.size()) != n) {
    throw ValidationError("need one SU(2) target per site");
  }
  layout_ = ParamLayout::su2(n);
  for (const Matrix& u : problem_.targets) decomposition_.push_back(su2_decompose(u));
  // Site k reads its own block and the pulse parameters of every drive that
  // bleeds into it; a neighbour's frame angle never reaches it.
  for (int k = 0; k < n; ++k) {
    std::vector<int> deps;
    for (int j = 0; j < n; ++j) {
      const bool own = j == k;
      if (!own && !(problem_.crosstalk.allowed(j, k) && problem_.crosstalk.beta(j, k) != 0.0)) continue;
      for (int p = 0; p < (own ? 7 : 6); ++p) deps.push_back(7 * j + p);
    }
    deps_.push_back(std::move(deps));
  }
}

RealVector Su2Objective::defaults() const {
  RealVector x = RealVector::Zero(layout_.size());
  for (int k = 0; k < layout_.n_drives; ++k) {
    const GaussianDrag g =
        default_pi2_pulse(problem_.t_pi2, problem_.device.transmons[k].anharmonicity_ghz);
    x(7 * k + 0) = x(7 * k + 3) = g.x_scale;
    x(7 * k + 1) = x(7 * k + 4) = g.y_scale;
  }
  return x;
}

PulseProgram Su2Objective::program(const RealVector& x) const {
  if (x.size() != layout_.size()) throw ValidationError("parameter vector has the wrong length");
  PulseProgram prog;
  for (int k = 0; k < layout_.n_drives; ++k) {
    const double gammas[2] = {decomposition_[k].gamma1, decomposition_[k].gamma2};
    for (int seg = 0; seg < 2; ++seg) {
      GaussianDrag g = default_pi2_pulse(problem_.t_pi2, problem_.device.transmons[k].anharmonicity_ghz);
      g.x_scale = x(7 * k + 3 * seg);
      g.y_scale = x(7 * k + 3 * seg + 1);
      DriveTone tone;
      tone.target_site = k;
      tone.carrier_ghz = problem_.device.lattice.frequencies_ghz[k];
      tone.phase = gammas[seg] + x(7 * k + 3 * seg + 2);
      tone.envelope = g;
      tone.t_start = seg * problem_.t_pi2;
      prog.tones.push_back(tone);
    }
  }
  return prog;
}

Matrix Su2Objective::frame_target(int site, const RealVector& x) const {
  return rot_z(decomposition_[site].gamma3 + x(7 * site + 6)).adjoint() * problem_.targets[site];
}

double Su2Objective::site_infidelity(int site, const RealVector& x) const {
  const SiteResult r =
      simulate_site(problem_.device, site, program(x), problem_.crosstalk, grid_, problem_.sim);
  return 1.0 - local_process_fidelity(frame_target(site, x), r.qubit.map);
}

double Su2Objective::operator()(const RealVector& x) const {
  const PulseProgram prog = program(x);
  double sum = 0.0;
  for (int k = 0; k < layout_.n_drives; ++k) {
    const SiteResult r = simulate_site(problem_.device, k, prog, problem_.crosstalk, grid_, problem_.sim);
    sum += local_process_fidelity(frame_target(k, x), r.qubit.map);
  }
  return 1.0 - sum / layout_.n_drives;
}

LocalSimResult Su2Objective::evaluate(const RealVector& x) const {
  std::vector<Matrix> targets;
  for (int k = 0; k < layout_.n_drives; ++k) targets.push_back(frame_target(k, x));
  return simulate_local(problem_.device, program(x), problem_.crosstalk, targets, grid_, problem_.sim);
}

RealVector Su2Objective::gradient(const RealVector& x, double fd_step, bool richardson) const {
  return separable_gradient([this](int k, const RealVector& v) { return site_infidelity(k, v); },
                            deps_, 1.0 / layout_.n_drives, x, fd_step, richardson);
}

}  // namespace xtalk
