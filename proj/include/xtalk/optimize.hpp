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

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace xtalk {

using RealVector = Eigen::VectorXd;
using Objective = std::function<double(const RealVector&)>;
/// Gradient callback; receives the point and the objective value there.
using GradientFn = std::function<RealVector(const RealVector&, double)>;

struct LineSearchConfig {
  double sufficient_decrease = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 50;
};

struct OptConfig {
  int max_iters = 500;
  double grad_tol = 1e-8;
  double step_tol = 1e-12;
  /// Relative finite-difference step: h_i = fd_step * max(|x_i|, 1).
  double fd_step = 1e-6;
  bool richardson = false;
  LineSearchConfig line_search;
  /// Multi-start: total number of starts (the unperturbed x0 is start 0) and
  /// the relative jitter applied to the others.
  int n_starts = 1;
  double jitter = 0.05;
  std::uint64_t seed = 0;
  /// Worker threads for finite-difference probes (objective must be reentrant).
  int threads = 1;

  void validate() const;
};

struct Bounds {
  RealVector lo;
  RealVector hi;

  RealVector project(const RealVector& x) const;
  bool contains(const RealVector& x) const;
};

struct OptResult {
  RealVector x_opt;
  double f_opt = 0.0;
  /// (iteration, value) at iteration 0 and at every accepted step.
  std::vector<std::pair<int, double>> objective_trace;
  double grad_norm_final = 0.0;
  bool converged = false;
  std::string stop_reason;
  int iterations = 0;
  int evaluations = 0;
  double wall_time = 0.0;
  int best_start = 0;
};

/// Central differences with per-coordinate relative step. With richardson
/// set, combines steps h and h/2 as (4 D(h/2) - D(h)) / 3.
RealVector gradient(const Objective& f, const RealVector& x, double fd_step,
                    bool richardson = false, int threads = 1);

/// Gradient of weight * sum_u term(u, x) when term u reads only the
/// coordinates in deps[u]: coordinate i is probed only in the terms that read
/// it. Same step rule as gradient().
RealVector separable_gradient(const std::function<double(int, const RealVector&)>& term,
                              const std::vector<std::vector<int>>& deps, double weight,
                              const RealVector& x, double fd_step, bool richardson = false);

/// BFGS with backtracking (Armijo) line search and box projection.
OptResult minimize(const Objective& f, const RealVector& x0, const OptConfig& config,
                   const Bounds* bounds = nullptr, const GradientFn& grad = {});

/// Runs minimize() from x0 and config.n_starts - 1 jittered copies and keeps
/// the lowest final value (ties go to the lower start index).
OptResult minimize_multistart(const Objective& f, const RealVector& x0, const OptConfig& config,
                              const Bounds* bounds = nullptr, const GradientFn& grad = {});

}  // namespace xtalk
