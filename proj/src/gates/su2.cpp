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
#include <numbers>

#include "xtalk/errors.hpp"
#include "xtalk/gates.hpp"

namespace xtalk {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

}  // namespace

Matrix rot_x(double theta) {
  Matrix m(2, 2);
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  m << c, Complex(0.0, -s), Complex(0.0, -s), c;
  return m;
}

Matrix rot_y(double theta) {
  Matrix m(2, 2);
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  m << c, -s, s, c;
  return m;
}

Matrix rot_z(double theta) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = std::exp(Complex(0.0, -0.5 * theta));
  m(1, 1) = std::exp(Complex(0.0, 0.5 * theta));
  return m;
}

Matrix phased_pi2(double gamma) { return rot_z(-gamma) * rot_x(0.5 * kPi) * rot_z(gamma); }

std::array<double, 3> zyz_angles(const Matrix& u) {
  if (u.rows() != 2 || u.cols() != 2) throw ValidationError("zyz_angles expects a 2x2 matrix");
  const Complex det = u.determinant();
  if (std::abs(det) < 1e-12) throw ValidationError("zyz_angles: singular matrix");
  const Matrix v = u / std::sqrt(det);
  // v = [[e^{-i(a+c)/2} cos(b/2), -e^{-i(a-c)/2} sin(b/2)],
  //      [e^{ i(a-c)/2} sin(b/2),  e^{ i(a+c)/2} cos(b/2)]]
  const double b = 2.0 * std::atan2(std::abs(v(1, 0)), std::abs(v(1, 1)));
  const double sum = std::abs(v(1, 1)) > 1e-14 ? 2.0 * std::arg(v(1, 1)) : 0.0;
  const double diff = std::abs(v(1, 0)) > 1e-14 ? 2.0 * std::arg(v(1, 0)) : 0.0;
  return {0.5 * (sum + diff), b, 0.5 * (sum - diff)};
}

Matrix zyz_compose(double a, double b, double c) { return rot_z(a) * rot_y(b) * rot_z(c); }

Su2Decomposition su2_decompose(const Matrix& u) {
  // X_{pi/2} Z_t X_{pi/2} = Z_pi Y_{t+pi} up to phase, which turns
  // Z_{g3} V(g2) V(g1) into Z_{g3-g2+pi} Y_{g2-g1+pi} Z_{g1}.
  const auto [a, b, c] = zyz_angles(u);
  return {wrap(c), wrap(b + c - kPi), wrap(a + b + c)};
}

Matrix su2_compose(const Su2Decomposition& d) {
  return rot_z(d.gamma3) * phased_pi2(d.gamma2) * phased_pi2(d.gamma1);
}

Matrix haar_su2(CounterRng& rng) {
  double q[4];
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& v : q) {
      v = rng.normal();
      norm += v * v;
    }
  } while (norm < 1e-300);
  norm = std::sqrt(norm);
  for (double& v : q) v /= norm;
  Matrix m(2, 2);
  m << Complex(q[0], q[1]), Complex(q[2], q[3]), Complex(-q[2], q[3]), Complex(q[0], -q[1]);
  return m;
}

Matrix haar_su2(std::uint64_t seed) {
  CounterRng rng(seed, 0x68616172ULL);
  return haar_su2(rng);
}

}  // namespace xtalk
