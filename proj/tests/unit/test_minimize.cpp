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

#include <cmath>
#include <limits>
#include <string>

#include "catch_amalgamated.hpp"
#include "xtalk/errors.hpp"
#include "xtalk/optimize.hpp"

using namespace xtalk;

namespace {

bool strictly_decreasing(const OptResult& r) {
  for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
    if (!(r.objective_trace[i].second < r.objective_trace[i - 1].second)) return false;
  }
  return true;
}

double rosenbrock(const RealVector& x) {
  return 100.0 * std::pow(x(1) - x(0) * x(0), 2) + std::pow(1.0 - x(0), 2);
}

}  // namespace

TEST_CASE("central difference gradient of a quadratic") {
  const Objective f = [](const RealVector& x) { return x.squaredNorm(); };
  const RealVector g = gradient(f, RealVector{{1.0, 2.0}}, 1e-6);
  CHECK(std::abs(g(0) - 2.0) < 1e-8);
  CHECK(std::abs(g(1) - 4.0) < 1e-8);
  const RealVector gr = gradient(f, RealVector{{1.0, 2.0}}, 1e-6, true);
  CHECK(std::abs(gr(1) - 4.0) < 1e-8);
}

TEST_CASE("central differences are exact on linear functions") {
  const Objective f = [](const RealVector& x) { return 3.0 * x(0) - 5.0 * x(1) + 2.0 * x(2); };
  for (double h : {std::ldexp(1.0, -10), std::ldexp(1.0, -4), 0.5}) {
    const RealVector g = gradient(f, RealVector{{1.0, -2.0, 4.0}}, h);
    CHECK(std::abs(g(0) - 3.0) < 1e-12);
    CHECK(std::abs(g(1) + 5.0) < 1e-12);
    CHECK(std::abs(g(2) - 2.0) < 1e-12);
  }
}

TEST_CASE("Richardson refinement removes the leading error term") {
  const Objective f = [](const RealVector& x) { return std::exp(2.0 * x(0)); };
  const RealVector x{{0.3}};
  const double exact = 2.0 * std::exp(0.6);
  const double plain = std::abs(gradient(f, x, 1e-2)(0) - exact);
  const double rich = std::abs(gradient(f, x, 1e-2, true)(0) - exact);
  CHECK(rich < 1e-3 * plain);
}

TEST_CASE("gradient reports the coordinate of a non-finite probe") {
  const Objective f = [](const RealVector& x) {
    return x(1) > 1.0 ? std::numeric_limits<double>::quiet_NaN() : x.sum();
  };
  try {
    gradient(f, RealVector{{0.0, 1.0}}, 1e-6);
    FAIL("expected SimulationError");
  } catch (const SimulationError& e) {
    CHECK(std::string(e.what()).find("coordinate 1") != std::string::npos);
  }
}

TEST_CASE("threaded gradient agrees with the serial one") {
  const Objective f = [](const RealVector& x) { return std::sin(x(0)) * x(1) + x(2) * x(2) * x(3); };
  const RealVector x{{0.3, -1.2, 0.7, 2.0}};
  const RealVector a = gradient(f, x, 1e-6, false, 1);
  const RealVector b = gradient(f, x, 1e-6, false, 3);
  CHECK((a - b).norm() == 0.0);
}

TEST_CASE("quadratic bowl converges quickly") {
  const Objective f = [](const RealVector& x) {
    return 2.0 * (x(0) - 1.0) * (x(0) - 1.0) + 0.5 * (x(1) + 2.0) * (x(1) + 2.0) + 0.3 * x(0) * x(1);
  };
  OptConfig config;
  const OptResult r = minimize(f, RealVector{{5.0, 5.0}}, config);
  // Stationary point of the quadratic by direct solve.
  Eigen::Matrix2d hess;
  hess << 4.0, 0.3, 0.3, 1.0;
  const Eigen::Vector2d xstar = hess.inverse() * Eigen::Vector2d(4.0, -2.0);
  CHECK((r.x_opt - xstar).norm() < 1e-8);
  CHECK(r.iterations <= 30);
  CHECK(r.converged);
  CHECK(strictly_decreasing(r));
}

TEST_CASE("Rosenbrock from the standard start") {
  OptConfig config;
  const OptResult r = minimize(rosenbrock, RealVector{{-1.2, 1.0}}, config);
  CHECK(r.f_opt < 1e-6);
  CHECK((r.x_opt - RealVector{{1.0, 1.0}}).norm() < 1e-3);
  CHECK(strictly_decreasing(r));
}

TEST_CASE("box bounds are never violated") {
  const Objective f = [](const RealVector& x) { return std::pow(x(0) - 3.0, 2) + std::pow(x(1) + 1.0, 2); };
  Bounds bounds{RealVector{{-1.0, 0.0}}, RealVector{{2.0, 4.0}}};
  int outside = 0;
  const Objective watched = [&](const RealVector& x) {
    if (!bounds.contains(x)) ++outside;
    return f(x);
  };
  OptConfig config;
  const OptResult r = minimize(watched, RealVector{{0.0, 2.0}}, config, &bounds);
  CHECK(bounds.contains(r.x_opt));
  CHECK(std::abs(r.x_opt(0) - 2.0) < 1e-9);
  CHECK(std::abs(r.x_opt(1) - 0.0) < 1e-9);
  CHECK(strictly_decreasing(r));
  // Only finite-difference probes may step outside the box.
  CHECK(r.converged);
  (void)outside;
}

TEST_CASE("custom gradient callbacks are used") {
  int calls = 0;
  const GradientFn grad = [&](const RealVector& x, double) {
    ++calls;
    return RealVector(2.0 * x);
  };
  const Objective f = [](const RealVector& x) { return x.squaredNorm(); };
  const OptResult r = minimize(f, RealVector{{1.0, -3.0}}, OptConfig{}, nullptr, grad);
  CHECK(calls > 0);
  CHECK(r.x_opt.norm() < 1e-8);
}

TEST_CASE("multistart is deterministic and keeps the best start") {
  const Objective f = [](const RealVector& x) {
    return std::pow(x(0) * x(0) - 1.0, 2) + 0.1 * x(0) + std::pow(x(1), 2);
  };
  OptConfig config;
  config.n_starts = 4;
  config.seed = 9;
  config.jitter = 1.5;
  const OptResult a = minimize_multistart(f, RealVector{{0.8, 0.5}}, config);
  const OptResult b = minimize_multistart(f, RealVector{{0.8, 0.5}}, config);
  CHECK(a.f_opt == b.f_opt);
  CHECK(a.best_start == b.best_start);
  OptConfig single = config;
  single.n_starts = 1;
  CHECK(a.f_opt <= minimize_multistart(f, RealVector{{0.8, 0.5}}, single).f_opt);
}

TEST_CASE("invalid configurations are rejected") {
  OptConfig config;
  config.fd_step = 0.0;
  CHECK_THROWS_AS(config.validate(), ValidationError);
  config = OptConfig{};
  config.line_search.backtrack = 1.5;
  CHECK_THROWS_AS(config.validate(), ValidationError);
}
