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

#include "xtalk/errors.hpp"
#include "xtalk/gates.hpp"
#include "xtalk/optimize.hpp"

namespace xtalk {

namespace {

Matrix dressed_target(const RealVector& x, const Matrix& core) {
  const Matrix u = kron(zyz_compose(x(0), x(1), x(2)), zyz_compose(x(3), x(4), x(5)));
  const Matrix v = kron(zyz_compose(x(6), x(7), x(8)), zyz_compose(x(9), x(10), x(11)));
  return u * core * v;
}

}  // namespace

LocalInvariantResult local_invariant_infidelity(const QuantumChannel& actual,
                                                const std::array<double, 3>& target_class,
                                                const LocalInvariantOptions& options) {
  if (actual.dim() != 4) throw ValidationError("local_invariant_infidelity expects two qubits");
  if (options.n_starts < 1) throw ValidationError("local_invariant_infidelity needs a start");
  const Matrix choi = actual.choi();
  const Matrix core = canonical_gate(target_class);

  const Objective objective = [&](const RealVector& x) {
    const Matrix t = dressed_target(x, core);
    const Eigen::Map<const Vector> v(t.data(), 16);
    return 1.0 - (v.adjoint() * choi * v).value().real() / 16.0;
  };

  // Start 0: locals of the nearest unitary's KAK form.
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (choi + choi.adjoint()));
  const Vector top = eig.eigenvectors().col(3);
  const Matrix k = Eigen::Map<const Matrix>(top.data(), 4, 4);
  Eigen::JacobiSVD<Matrix> svd(k, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const KakCoordinates kak = kak_decompose(svd.matrixU() * svd.matrixV().adjoint());
  RealVector x0(12);
  const Matrix* locals[4] = {&kak.k1a, &kak.k1b, &kak.k2a, &kak.k2b};
  for (int q = 0; q < 4; ++q) {
    const auto ang = zyz_angles(*locals[q]);
    for (int a = 0; a < 3; ++a) x0(3 * q + a) = ang[a];
  }

  OptConfig config;
  config.max_iters = options.max_iters;
  config.grad_tol = 1e-10;
  config.fd_step = 1e-7;

  const int starts = options.fixed_dressing ? 1 : options.n_starts;
  const CounterRng root(options.seed, 0x6c6f63616cULL);
  LocalInvariantResult best;
  for (int s = 0; s < starts; ++s) {
    RealVector xs = x0;
    if (s > 0) {
      CounterRng rng = root.substream(static_cast<std::uint64_t>(s));
      for (Eigen::Index i = 0; i < xs.size(); ++i) xs(i) = kTwoPi * rng.uniform();
    }
    const OptResult r = minimize(objective, xs, config);
    if (s == 0 || r.f_opt < best.infidelity) {
      best.infidelity = r.f_opt;
      for (int i = 0; i < 12; ++i) best.angles[i] = r.x_opt(i);
      best.converged = r.converged;
      best.best_start = s;
    }
  }
  if (best.infidelity < 0.0 && best.infidelity > -1e-12) best.infidelity = 0.0;
  return best;
}

}  // namespace xtalk
