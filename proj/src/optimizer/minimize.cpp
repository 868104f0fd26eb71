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
#include <string>
#include <thread>

#include "xtalk/errors.hpp"
#include "xtalk/optimize.hpp"
#include "xtalk/rng.hpp"

namespace xtalk {

void OptConfig::validate() const {
  if (max_iters < 1) throw ValidationError("optimizer max_iters must be positive");
  if (!(grad_tol > 0.0) || !(step_tol > 0.0) || !(fd_step > 0.0)) {
    throw ValidationError("optimizer tolerances and fd_step must be positive");
  }
  if (!(line_search.sufficient_decrease > 0.0 && line_search.sufficient_decrease < 1.0)) {
    throw ValidationError("line search sufficient-decrease constant must lie in (0, 1)");
  }
  if (!(line_search.backtrack > 0.0 && line_search.backtrack < 1.0)) {
    throw ValidationError("line search backtrack factor must lie in (0, 1)");
  }
  if (line_search.max_backtracks < 1) throw ValidationError("max_backtracks must be positive");
  if (n_starts < 1) throw ValidationError("n_starts must be positive");
  if (!(jitter >= 0.0)) throw ValidationError("jitter must be non-negative");
  if (threads < 1) throw ValidationError("threads must be positive");
}

RealVector Bounds::project(const RealVector& x) const {
  if (lo.size() == 0) return x;
  return x.cwiseMax(lo).cwiseMin(hi);
}

bool Bounds::contains(const RealVector& x) const {
  if (lo.size() == 0) return true;
  return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
}

namespace {

double probe(const Objective& f, const RealVector& x, Eigen::Index i) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    throw SimulationError("objective is not finite at a finite-difference probe of coordinate " +
                          std::to_string(i));
  }
  return v;
}

double central(const Objective& f, RealVector x, Eigen::Index i, double h) {
  const double xi = x(i);
  x(i) = xi + h;
  const double up = probe(f, x, i);
  x(i) = xi - h;
  const double down = probe(f, x, i);
  return (up - down) / (2.0 * h);
}

}  // namespace

RealVector gradient(const Objective& f, const RealVector& x, double fd_step, bool richardson,
                    int threads) {
  const Eigen::Index n = x.size();
  RealVector g(n);
  auto work = [&](Eigen::Index i) {
    const double h = fd_step * std::max(std::abs(x(i)), 1.0);
    const double d1 = central(f, x, i, h);
    g(i) = richardson ? (4.0 * central(f, x, i, 0.5 * h) - d1) / 3.0 : d1;
  };
  if (threads <= 1 || n < 2) {
    for (Eigen::Index i = 0; i < n; ++i) work(i);
    return g;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (Eigen::Index i = t; i < n; i += threads) work(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return g;
}

RealVector separable_gradient(const std::function<double(int, const RealVector&)>& term,
                              const std::vector<std::vector<int>>& deps, double weight,
                              const RealVector& x, double fd_step, bool richardson) {
  const Eigen::Index n = x.size();
  std::vector<std::vector<int>> readers(static_cast<std::size_t>(n));
  for (std::size_t u = 0; u < deps.size(); ++u) {
    for (int i : deps[u]) {
      if (i < 0 || i >= n) throw ValidationError("separable_gradient: dependency out of range");
      readers[i].push_back(static_cast<int>(u));
    }
  }
  RealVector g = RealVector::Zero(n);
  RealVector probe_x = x;
  auto partial_sum = [&](Eigen::Index i, double value) {
    probe_x(i) = value;
    double s = 0.0;
    for (int u : readers[i]) s += term(u, probe_x);
    probe_x(i) = x(i);
    if (!std::isfinite(s)) {
      throw SimulationError("objective is not finite at a gradient probe of coordinate " +
                            std::to_string(i));
    }
    return s;
  };
  auto diff = [&](Eigen::Index i, double h) {
    return (partial_sum(i, x(i) + h) - partial_sum(i, x(i) - h)) / (2.0 * h);
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    if (readers[i].empty()) continue;
    const double h = fd_step * std::max(std::abs(x(i)), 1.0);
    const double d1 = diff(i, h);
    g(i) = weight * (richardson ? (4.0 * diff(i, 0.5 * h) - d1) / 3.0 : d1);
  }
  return g;
}

namespace {

// Gradient norm with components that push against an active bound removed.
double projected_norm(const RealVector& x, const RealVector& g, const Bounds* bounds) {
  if (bounds == nullptr || bounds->lo.size() == 0) return g.norm();
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) <= bounds->lo(i) && g(i) > 0.0) continue;
    if (x(i) >= bounds->hi(i) && g(i) < 0.0) continue;
    s += g(i) * g(i);
  }
  return std::sqrt(s);
}

}  // namespace

OptResult minimize(const Objective& f, const RealVector& x0, const OptConfig& config,
                   const Bounds* bounds, const GradientFn& grad) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  OptResult result;
  const Eigen::Index n = x0.size();
  auto project = [&](const RealVector& v) { return bounds ? bounds->project(v) : v; };
  int evaluations = 0;
  auto eval = [&](const RealVector& v) {
    ++evaluations;
    return f(v);
  };
  auto eval_grad = [&](const RealVector& v, double fv) {
    if (grad) return grad(v, fv);
    evaluations += static_cast<int>(2 * n * (config.richardson ? 2 : 1));
    return gradient(f, v, config.fd_step, config.richardson, config.threads);
  };

  RealVector x = project(x0);
  double fx = eval(x);
  if (!std::isfinite(fx)) throw SimulationError("objective is not finite at the starting point");
  RealVector g = eval_grad(x, fx);
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  bool h_is_identity = true;
  result.objective_trace.emplace_back(0, fx);
  result.stop_reason = "max_iters";

  int it = 0;
  while (it < config.max_iters) {
    if (projected_norm(x, g, bounds) < config.grad_tol) {
      result.converged = true;
      result.stop_reason = "grad_tol";
      break;
    }
    RealVector p = -(h * g);
    if (g.dot(p) >= 0.0) {
      h.setIdentity();
      h_is_identity = true;
      p = -g;
    }
    bool accepted = false;
    RealVector x_new;
    RealVector s;
    double f_new = fx;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      double alpha = 1.0;
      for (int b = 0; b < config.line_search.max_backtracks; ++b, alpha *= config.line_search.backtrack) {
        x_new = project(x + alpha * p);
        s = x_new - x;
        if (s.norm() == 0.0) break;
        f_new = eval(x_new);
        if (std::isfinite(f_new) && f_new < fx &&
            f_new <= fx + config.line_search.sufficient_decrease * g.dot(s)) {
          accepted = true;
          break;
        }
      }
      if (!accepted && !h_is_identity) {
        h.setIdentity();
        h_is_identity = true;
        p = -g;
      } else {
        break;
      }
    }
    if (!accepted) {
      result.stop_reason = "line_search_failed";
      break;
    }
    ++it;
    RealVector g_new = eval_grad(x_new, f_new);
    const RealVector y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (h_is_identity) h *= sy / y.squaredNorm();
      const double rho = 1.0 / sy;
      const RealVector hy = h * y;
      h += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) -
           rho * (hy * s.transpose() + s * hy.transpose());
      h_is_identity = false;
    }
    x = x_new;
    fx = f_new;
    g = g_new;
    result.objective_trace.emplace_back(it, fx);
    if (s.norm() < config.step_tol * (1.0 + x.norm())) {
      result.converged = true;
      result.stop_reason = "step_tol";
      break;
    }
  }
  result.iterations = it;
  result.x_opt = x;
  result.f_opt = fx;
  result.grad_norm_final = projected_norm(x, g, bounds);
  result.evaluations = evaluations;
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

OptResult minimize_multistart(const Objective& f, const RealVector& x0, const OptConfig& config,
                              const Bounds* bounds, const GradientFn& grad) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  OptResult best;
  const CounterRng root(config.seed, 0x6d756c7469ULL);
  for (int k = 0; k < config.n_starts; ++k) {
    RealVector xs = x0;
    if (k > 0) {
      CounterRng rng = root.substream(static_cast<std::uint64_t>(k));
      for (Eigen::Index i = 0; i < xs.size(); ++i) xs(i) *= 1.0 + config.jitter * rng.normal();
    }
    OptResult r = minimize(f, xs, config, bounds, grad);
    r.best_start = k;
    if (k == 0 || r.f_opt < best.f_opt) {
      const int evals = k == 0 ? 0 : best.evaluations;
      best = std::move(r);
      best.evaluations += evals;
    } else {
      best.evaluations += r.evaluations;
    }
  }
  best.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return best;
}

}  // namespace xtalk
