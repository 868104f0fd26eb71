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

#include <array>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xtalk/device.hpp"
#include "xtalk/gates.hpp"
#include "xtalk/local_sim.hpp"
#include "xtalk/optimize.hpp"
#include "xtalk/pauli_expansion.hpp"

namespace xtalk {

enum class LayoutScheme { kSu2_7n, kCr_8n };

/// su2_7n, per drive: x1, y1, phase1, x2, y2, phase2, vz (two pi/2 segments
/// and a virtual-Z frame angle). cr_8n, per drive: cx1..cx3, cy1..cy3,
/// detuning (GHz) and phase.
struct ParamLayout {
  LayoutScheme scheme = LayoutScheme::kSu2_7n;
  int n_drives = 0;
  std::vector<std::string> names;
  std::optional<Bounds> bounds;

  static ParamLayout su2(int n_drives);
  static ParamLayout cr(int n_drives);
  int per_drive() const { return scheme == LayoutScheme::kSu2_7n ? 7 : 8; }
  int size() const { return per_drive() * n_drives; }
};

/// x-quadrature scale giving a 2-level rotation angle (pulse area) of pi/2.
double calibrate_pi2(const GaussianDrag& shape);
/// c1 with c2 = c3 = 0 giving area pi/2 over the Hanning window.
double calibrate_pi2(const Hanning& shape);

/// Gaussian with sigma = t_gate / 4, calibrated x scale and half-derivative
/// DRAG for the given anharmonicity (GHz).
GaussianDrag default_pi2_pulse(double t_gate, double anharmonicity_ghz);

// -- parallel single-qubit gates --------------------------------------------

struct Su2Problem {
  DeviceModel device;
  CrosstalkSpec crosstalk;
  std::vector<Matrix> targets;  ///< one SU(2) target per site
  double t_pi2 = 10.0;
  LocalSimOptions sim;
};

class Su2Objective {
 public:
  explicit Su2Objective(Su2Problem problem);

  const Su2Problem& problem() const { return problem_; }
  const ParamLayout& layout() const { return layout_; }
  const std::vector<Su2Decomposition>& decompositions() const { return decomposition_; }
  /// Calibrated defaults: x = calibrated scale, y = x (half-derivative DRAG),
  /// zero phase and frame offsets.
  RealVector defaults() const;

  PulseProgram program(const RealVector& x) const;
  /// Target of site k in the frame that absorbs Z_{gamma3 + vz}.
  Matrix frame_target(int site, const RealVector& x) const;

  double operator()(const RealVector& x) const;
  LocalSimResult evaluate(const RealVector& x) const;
  double site_infidelity(int site, const RealVector& x) const;
  /// Central differences that re-simulate only the sites a coordinate reaches.
  RealVector gradient(const RealVector& x, double fd_step, bool richardson = false) const;

 private:
  Su2Problem problem_;
  ParamLayout layout_;
  std::vector<Su2Decomposition> decomposition_;
  std::vector<std::vector<int>> deps_;
  TimeGrid grid_;
};

// -- parallel cross-resonance gates -----------------------------------------

struct CrProblem {
  DeviceModel device;
  CrosstalkSpec crosstalk;
  std::vector<std::pair<int, int>> pairs;  ///< (control, target)
  std::array<double, 3> target_class{std::numbers::pi / 2, 0.0, 0.0};
  double t_cr = 200.0;
  int d = 1;
  ExpansionOptions expansion;
  LocalInvariantOptions invariant{.n_starts = 8, .seed = 0x4b414bULL, .fixed_dressing = true};
};

/// Device with only the intra-pair couplings (no nonlocal crosstalk).
DeviceModel isolate_pairs(const DeviceModel& device, const std::vector<std::pair<int, int>>& pairs);

struct CrEvaluation {
  std::vector<double> pair_infidelity;
  std::vector<double> pair_leakage;
  double mean = 0.0;
};

class CrObjective {
 public:
  explicit CrObjective(CrProblem problem);

  const CrProblem& problem() const { return problem_; }
  const ParamLayout& layout() const { return layout_; }
  const InteractionGraph& graph() const { return graph_; }
  /// Drive site of parameter block b (controls and targets, pair by pair).
  int drive_site(int block) const { return drive_sites_[block]; }
  /// Control pulses sized for a pi/2 ZX rotation from the effective
  /// cross-resonance rate; target drives start off.
  RealVector defaults() const;

  PulseProgram program(const RealVector& x) const;
  double operator()(const RealVector& x) const;
  CrEvaluation evaluate(const RealVector& x, const LocalInvariantOptions* invariant = nullptr) const;
  RealVector gradient(const RealVector& x, double fd_step, bool richardson = false) const;

 private:
  double closure_term(int closure, const RealVector& x, const LocalInvariantOptions& inv,
                      std::vector<double>* infidelity, std::vector<double>* leakage) const;

  CrProblem problem_;
  ParamLayout layout_;
  InteractionGraph graph_;
  std::vector<int> drive_sites_;
  std::vector<int> pair_node_;
  std::vector<std::vector<int>> closures_;  ///< distinct closure site sets
  std::vector<int> pair_closure_;           ///< closure index of each pair
  std::vector<std::vector<int>> deps_;      ///< per closure
  TimeGrid grid_;
};

/// Channel on the listed qubit positions (in that order) when the remaining
/// qubits start maximally mixed and are traced out afterwards.
QuantumChannel reduce_to_qubits(const QuantumChannel& channel, const std::vector<int>& keep);

}  // namespace xtalk
