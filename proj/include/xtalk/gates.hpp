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
#include <cstdint>

#include "xtalk/linalg.hpp"
#include "xtalk/rng.hpp"

namespace xtalk {

// Rotation conventions: R_P(theta) = exp(-i theta P / 2).
Matrix rot_x(double theta);
Matrix rot_y(double theta);
Matrix rot_z(double theta);
/// Z_{-gamma} X_{pi/2} Z_{gamma}: a pi/2 pulse with carrier phase gamma.
Matrix phased_pi2(double gamma);

/// |tr(A^dagger B)|^2 / d^2.
double process_fidelity(const Matrix& a, const Matrix& b);
/// tr(S_A^dagger S_B) / d^2 (real part); equals the unitary formula for unitary channels.
double process_fidelity(const QuantumChannel& a, const QuantumChannel& b);
/// (d Phi + 1) / (d + 1)
double average_gate_fidelity(double process_fidelity, int dim);

/// Target U = Z_{gamma3} V(gamma2) V(gamma1), V(g) = Z_{-g} X_{pi/2} Z_g.
struct Su2Decomposition {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
};

Su2Decomposition su2_decompose(const Matrix& u);
Matrix su2_compose(const Su2Decomposition& d);
/// Euler angles of U = e^{i phase} Z_a Y_b Z_c.
std::array<double, 3> zyz_angles(const Matrix& u);
Matrix zyz_compose(double a, double b, double c);

/// Haar-random SU(2) element from a uniformly distributed unit quaternion.
Matrix haar_su2(CounterRng& rng);
Matrix haar_su2(std::uint64_t seed);

/// Canonical gate A(c) = exp(-i (c1 XX + c2 YY + c3 ZZ) / 2).
Matrix canonical_gate(const std::array<double, 3>& c);

/// U = phase * (k1a (x) k1b) A(c) (k2a (x) k2b), all local factors in SU(2).
/// Coordinates lie in the chamber pi/2 >= c1 >= c2 >= |c3| with c3 >= 0 when
/// c1 = pi/2 (e.g. CNOT -> (pi/2, 0, 0), SWAP -> (pi/2, pi/2, pi/2)).
struct KakCoordinates {
  Matrix k1a, k1b;
  std::array<double, 3> c{};
  Matrix k2a, k2b;
  Complex phase{1.0, 0.0};

  Matrix reconstruct() const;
};

KakCoordinates kak_decompose(const Matrix& u);

/// Makhlin local invariants (G1 complex, G2 real stored as a Complex).
std::array<Complex, 2> makhlin_invariants(const Matrix& u);

struct LocalInvariantOptions {
  int n_starts = 8;
  std::uint64_t seed = 0x4b414bULL;
  /// Single start from the KAK dressing of the nearest unitary, refined once.
  bool fixed_dressing = false;
  int max_iters = 200;
};

struct LocalInvariantResult {
  double infidelity = 1.0;
  std::array<double, 12> angles{};
  bool converged = false;
  int best_start = 0;
};

/// Minimum over local dressings (u1 (x) u2) A(c) (v1 (x) v2) of one minus the
/// process fidelity against `actual` (two qubits, possibly trace decreasing).
LocalInvariantResult local_invariant_infidelity(const QuantumChannel& actual,
                                                const std::array<double, 3>& target_class,
                                                const LocalInvariantOptions& options = {});

/// Reference CNOT in the computational basis (qubit 0 controls).
Matrix cnot();

}  // namespace xtalk
