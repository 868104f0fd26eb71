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
#include <numbers>

#include "xtalk/errors.hpp"
#include "xtalk/gates.hpp"

namespace xtalk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBoundaryTol = 1e-9;

// Columns: Bell states (00+11), i(00-11), i(01+10), (01-10), all / sqrt 2.
// Conjugation by this basis maps SU(2) x SU(2) onto SO(4).
Matrix magic_basis() {
  Matrix b = Matrix::Zero(4, 4);
  const double r = 1.0 / std::sqrt(2.0);
  b(0, 0) = r;
  b(3, 0) = r;
  b(0, 1) = Complex(0.0, r);
  b(3, 1) = Complex(0.0, -r);
  b(1, 2) = Complex(0.0, r);
  b(2, 2) = Complex(0.0, r);
  b(1, 3) = r;
  b(2, 3) = -r;
  return b;
}

Matrix pauli(int k) {
  Matrix m = Matrix::Zero(2, 2);
  switch (k) {
    case 0:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case 1:
      m(0, 1) = Complex(0.0, -1.0);
      m(1, 0) = Complex(0.0, 1.0);
      break;
    default:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
  }
  return m;
}

// Splits a 4x4 product a (x) b into its factors, each scaled to SU(2).
std::pair<Matrix, Matrix> split_product(const Matrix& k) {
  Matrix r(4, 4);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int p = 0; p < 2; ++p) {
        for (int q = 0; q < 2; ++q) r(2 * i + j, 2 * p + q) = k(2 * i + p, 2 * j + q);
      }
    }
  }
  Eigen::JacobiSVD<Matrix> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double s = std::sqrt(svd.singularValues()(0));
  Matrix a(2, 2);
  Matrix b(2, 2);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      a(i, j) = s * svd.matrixU()(2 * i + j, 0);
      b(i, j) = s * std::conj(svd.matrixV()(2 * i + j, 0));
    }
  }
  a /= std::sqrt(a.determinant());
  b /= std::sqrt(b.determinant());
  return {a, b};
}

struct Dressed {
  Matrix k1a, k1b, k2a, k2b;
  std::array<double, 3> c;
};

// A(c) = A(c - s pi e_i) (i sigma_i (x) i sigma_i)^s up to phase, s = +-1.
void shift(Dressed& d, int i, int s) {
  const Matrix w = kImag * pauli(i);
  d.c[i] -= s * kPi;
  d.k2a = w * d.k2a;
  d.k2b = w * d.k2b;
}

// Local w (x) w maps the Pauli pair (i, j) onto each other, so
// A(c) = W^dagger A(c with c_i, c_j swapped) W.
void swap_coords(Dressed& d, int i, int j) {
  Matrix w;
  const int other = 3 - i - j;
  if (other == 2) {
    w = rot_z(0.5 * kPi);
  } else if (other == 1) {
    w = rot_y(0.5 * kPi);
  } else {
    w = rot_x(0.5 * kPi);
  }
  std::swap(d.c[i], d.c[j]);
  d.k1a = d.k1a * w.adjoint();
  d.k1b = d.k1b * w.adjoint();
  d.k2a = w * d.k2a;
  d.k2b = w * d.k2b;
}

// Conjugation by i sigma_k (x) 1 flips the two coordinates other than k.
void negate_pair(Dressed& d, int k) {
  const Matrix w = kImag * pauli(k);
  for (int i = 0; i < 3; ++i) {
    if (i != k) d.c[i] = -d.c[i];
  }
  d.k1a = d.k1a * w.adjoint();
  d.k2a = w * d.k2a;
}

void canonicalize(Dressed& d) {
  for (int i = 0; i < 3; ++i) {
    while (d.c[i] > 0.5 * kPi + kBoundaryTol) shift(d, i, 1);
    while (d.c[i] <= -0.5 * kPi + kBoundaryTol) shift(d, i, -1);
  }
  for (int pass = 0; pass < 2; ++pass) {
    for (int i = 0; i < 2; ++i) {
      if (std::abs(d.c[i]) < std::abs(d.c[i + 1])) swap_coords(d, i, i + 1);
    }
  }
  if (d.c[0] < 0.0 && d.c[1] < 0.0) {
    negate_pair(d, 2);
  } else if (d.c[0] < 0.0) {
    negate_pair(d, 1);
  } else if (d.c[1] < 0.0) {
    negate_pair(d, 0);
  }
  if (d.c[0] >= 0.5 * kPi - kBoundaryTol && d.c[2] < 0.0) {
    negate_pair(d, 1);
    shift(d, 0, -1);
  }
}

}  // namespace

Matrix canonical_gate(const std::array<double, 3>& c) {
  // XX, YY and ZZ commute and are diagonal in the magic basis.
  const Matrix b = magic_basis();
  Vector phases(4);
  for (int k = 0; k < 4; ++k) {
    double arg = 0.0;
    for (int p = 0; p < 3; ++p) {
      const Matrix pp = kron(pauli(p), pauli(p));
      arg += c[p] * (b.col(k).adjoint() * pp * b.col(k)).value().real();
    }
    phases(k) = std::exp(Complex(0.0, -0.5 * arg));
  }
  return b * phases.asDiagonal() * b.adjoint();
}

Matrix KakCoordinates::reconstruct() const {
  return phase * kron(k1a, k1b) * canonical_gate(c) * kron(k2a, k2b);
}

KakCoordinates kak_decompose(const Matrix& u) {
  if (u.rows() != 4 || u.cols() != 4) throw ValidationError("kak_decompose expects a 4x4 matrix");
  if ((u * u.adjoint() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() > 1e-8) {
    throw ValidationError("kak_decompose expects a unitary matrix");
  }
  const Matrix b = magic_basis();
  const Matrix su = u / std::pow(u.determinant(), 0.25);
  const Matrix up = b.adjoint() * su * b;
  const Matrix m = up.transpose() * up;

  // m is symmetric unitary, so its real and imaginary parts are commuting
  // real symmetric matrices. A generic real combination separates every
  // eigenspace; the fixed list keeps the result deterministic.
  static constexpr double kMix[] = {0.6180339887498949, 1.4142135623730951, 0.2718281828459045,
                                    3.1415926535897931, 0.5772156649015329, 1.7320508075688772,
                                    0.1234567890123457, 2.2360679774997898};
  const RealMatrix re = m.real();
  const RealMatrix im = m.imag();
  RealMatrix p;
  Vector diag(4);
  bool found = false;
  for (double kappa : kMix) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(re + kappa * im);
    p = eig.eigenvectors();
    const Matrix dm = p.transpose().cast<Complex>() * m * p.cast<Complex>();
    Matrix off = dm;
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() < 1e-9) {
      diag = dm.diagonal();
      found = true;
      break;
    }
  }
  if (!found) throw SimulationError("kak_decompose: failed to diagonalize the magic-basis square");
  if (p.determinant() < 0.0) p.col(0) = -p.col(0);

  Vector half(4);
  Complex prod = 1.0;
  for (int k = 0; k < 4; ++k) {
    half(k) = std::exp(Complex(0.0, 0.5 * std::arg(diag(k))));
    prod *= half(k);
  }
  if (prod.real() < 0.0) half(0) = -half(0);

  const Matrix pc = p.cast<Complex>();
  Matrix k1 = up * pc * half.cwiseInverse().asDiagonal();
  const Matrix k1_real = k1.real().cast<Complex>();
  const Matrix left = b * k1_real * b.adjoint();
  const Matrix right = b * pc.transpose() * b.adjoint();

  // arg(half_k) = -(c . s_k)/2 + phi, with s_k the magic-basis eigenvalues
  // of XX, YY and ZZ.
  RealMatrix sys(4, 4);
  Eigen::VectorXd rhs(4);
  for (int k = 0; k < 4; ++k) {
    for (int p2 = 0; p2 < 3; ++p2) {
      const Matrix pp = kron(pauli(p2), pauli(p2));
      sys(k, p2) = -0.5 * (b.col(k).adjoint() * pp * b.col(k)).value().real();
    }
    sys(k, 3) = 1.0;
    rhs(k) = std::arg(half(k));
  }
  const Eigen::VectorXd sol = sys.fullPivLu().solve(rhs);

  Dressed d;
  std::tie(d.k1a, d.k1b) = split_product(left);
  std::tie(d.k2a, d.k2b) = split_product(right);
  d.c = {sol(0), sol(1), sol(2)};
  canonicalize(d);

  KakCoordinates out;
  out.k1a = d.k1a;
  out.k1b = d.k1b;
  out.k2a = d.k2a;
  out.k2b = d.k2b;
  out.c = d.c;
  const Matrix core = kron(d.k1a, d.k1b) * canonical_gate(d.c) * kron(d.k2a, d.k2b);
  out.phase = (core.adjoint() * u).trace() / 4.0;
  out.phase /= std::abs(out.phase);
  return out;
}

std::array<Complex, 2> makhlin_invariants(const Matrix& u) {
  if (u.rows() != 4 || u.cols() != 4) throw ValidationError("makhlin_invariants expects 4x4");
  const Matrix b = magic_basis();
  const Matrix up = b.adjoint() * u * b;
  const Matrix m = up.transpose() * up;
  const Complex det = u.determinant();
  const Complex tr = m.trace();
  const Complex tr2 = (m * m).trace();
  return {tr * tr / (16.0 * det), (tr * tr - tr2) / (4.0 * det)};
}

}  // namespace xtalk
