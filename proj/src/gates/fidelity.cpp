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

namespace xtalk {

double process_fidelity(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw ValidationError("process_fidelity: dimension mismatch");
  }
  const double d = static_cast<double>(a.rows());
  return std::norm((a.adjoint() * b).trace()) / (d * d);
}

double process_fidelity(const QuantumChannel& a, const QuantumChannel& b) {
  if (a.dim() != b.dim()) throw ValidationError("process_fidelity: dimension mismatch");
  const double d = a.dim();
  if (a.form() == QuantumChannel::Form::kUnitary && b.form() == QuantumChannel::Form::kUnitary) {
    return process_fidelity(a.unitary_matrix(), b.unitary_matrix());
  }
  if (a.form() == QuantumChannel::Form::kUnitary) {
    // vec(U)^dagger Choi_B vec(U) avoids forming the second superoperator.
    const Matrix& u = a.unitary_matrix();
    const Eigen::Map<const Vector> v(u.data(), u.size());
    return (v.adjoint() * b.choi() * v).value().real() / (d * d);
  }
  if (b.form() == QuantumChannel::Form::kUnitary) return process_fidelity(b, a);
  return (a.superoperator().adjoint() * b.superoperator()).trace().real() / (d * d);
}

double average_gate_fidelity(double phi, int dim) { return (dim * phi + 1.0) / (dim + 1.0); }

Matrix cnot() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(2, 3) = 1.0;
  m(3, 2) = 1.0;
  return m;
}

}  // namespace xtalk
