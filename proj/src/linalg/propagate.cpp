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
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "xtalk/errors.hpp"
#include "xtalk/linalg.hpp"

namespace xtalk {

namespace {

std::vector<Matrix> to_matrices(const std::vector<Operator>& ops, int dim) {
  std::vector<Matrix> out;
  out.reserve(ops.size());
  for (const Operator& op : ops) {
    if (op.dim() != dim) throw ValidationError("collapse operator dimension mismatch");
    out.push_back(op.matrix());
  }
  return out;
}

void check_sample(const Matrix& h, int dim, double t) {
  if (h.rows() != dim || h.cols() != dim) {
    std::ostringstream msg;
    msg << "Hamiltonian sample at t=" << t << " has dimension " << h.rows() << "x" << h.cols()
        << ", expected " << dim;
    throw ValidationError(msg.str());
  }
}

}  // namespace

Matrix expm_hermitian(const Matrix& h, double dt) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const Matrix& v = eig.eigenvectors();
  Vector phases(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    phases(k) = std::polar(1.0, -lambda(k) * dt);
  }
  return v * phases.asDiagonal() * v.adjoint();
}

Operator expm_hermitian_generator(const Operator& h, double dt) {
  const double dev = h.hermiticity_error();
  if (dev > 1e-12) {
    std::ostringstream msg;
    msg << "generator is not Hermitian (max |H - H^dagger| = " << dev << ")";
    throw ValidationError(msg.str());
  }
  return Operator(expm_hermitian(h.matrix(), dt), h.basis_dims());
}

Operator propagate_unitary(const HamiltonianFn& hamiltonian_at, const TimeGrid& grid,
                           const Dims& dims) {
  Matrix first = hamiltonian_at(grid.midpoint(0));
  const int dim = static_cast<int>(first.rows());
  check_sample(first, dim, grid.midpoint(0));
  Matrix u = expm_hermitian(first, grid.dt());
  for (int step = 1; step < grid.n_steps(); ++step) {
    const double t = grid.midpoint(step);
    const Matrix h = hamiltonian_at(t);
    check_sample(h, dim, t);
    u = expm_hermitian(h, grid.dt()) * u;
  }
  return Operator(std::move(u), dims.empty() ? Dims{dim} : dims);
}

Matrix dissipator(const std::vector<Matrix>& collapse, int dim) {
  const int d2 = dim * dim;
  Matrix out = Matrix::Zero(d2, d2);
  const Matrix id = Matrix::Identity(dim, dim);
  for (const Matrix& c : collapse) {
    const Matrix cdc = c.adjoint() * c;
    out += kron(c.conjugate(), c) - 0.5 * kron(id, cdc) - 0.5 * kron(cdc.transpose(), id);
  }
  return out;
}

Matrix liouvillian(const Matrix& h, const std::vector<Matrix>& collapse) {
  const int dim = static_cast<int>(h.rows());
  const Matrix id = Matrix::Identity(dim, dim);
  Matrix l = -kImag * (kron(id, h) - kron(h.transpose(), id));
  if (!collapse.empty()) l += dissipator(collapse, dim);
  return l;
}

Matrix lindblad_superop(const HamiltonianFn& hamiltonian_at, const std::vector<Matrix>& collapse,
                        const TimeGrid& grid, const LindbladOptions& options) {
  const double dt = grid.dt();
  Matrix h = hamiltonian_at(grid.midpoint(0));
  const int dim = static_cast<int>(h.rows());
  check_sample(h, dim, grid.midpoint(0));
  for (const Matrix& c : collapse) {
    if (c.rows() != dim || c.cols() != dim) {
      throw ValidationError("collapse operator dimension mismatch");
    }
  }

  Matrix s;
  if (options.scheme == LindbladScheme::kExact) {
    s = Matrix::Identity(dim * dim, dim * dim);
    for (int step = 0; step < grid.n_steps(); ++step) {
      if (step > 0) {
        h = hamiltonian_at(grid.midpoint(step));
        check_sample(h, dim, grid.midpoint(step));
      }
      const Matrix gen = liouvillian(h, collapse) * dt;
      s = gen.exp() * s;
    }
  } else {
    const Matrix d = dissipator(collapse, dim);
    const Matrix half = (d * (0.5 * dt)).exp();
    const Matrix full = half * half;
    s = half;
    for (int step = 0; step < grid.n_steps(); ++step) {
      if (step > 0) {
        h = hamiltonian_at(grid.midpoint(step));
        check_sample(h, dim, grid.midpoint(step));
      }
      s = superop_from_unitary(expm_hermitian(h, dt)) * s;
      s = (step + 1 == grid.n_steps() ? half : full) * s;
    }
  }

  const double dev = QuantumChannel::superop(s, {dim}).trace_deviation();
  if (dev > options.trace_tol) {
    std::ostringstream msg;
    msg << "Lindblad propagation lost trace (deviation " << dev << " > " << options.trace_tol
        << "); use a finer time grid";
    throw SimulationError(msg.str());
  }
  return s;
}

QuantumChannel propagate_lindblad(const HamiltonianFn& hamiltonian_at,
                                  const std::vector<Operator>& collapse_ops, const TimeGrid& grid,
                                  const QuantumChannel& input, const LindbladOptions& options) {
  const Matrix s =
      lindblad_superop(hamiltonian_at, to_matrices(collapse_ops, input.dim()), grid, options);
  if (s.rows() != input.dim() * input.dim()) {
    throw ValidationError("Lindblad input channel dimension mismatch");
  }
  return QuantumChannel::superop(s * input.superoperator(), input.dims());
}

Matrix propagate_lindblad(const HamiltonianFn& hamiltonian_at,
                          const std::vector<Operator>& collapse_ops, const TimeGrid& grid,
                          const Matrix& rho, const LindbladOptions& options) {
  const int dim = static_cast<int>(rho.rows());
  const Matrix s = lindblad_superop(hamiltonian_at, to_matrices(collapse_ops, dim), grid, options);
  if (s.rows() != dim * dim) throw ValidationError("Lindblad input state dimension mismatch");
  const Vector out = s * Eigen::Map<const Vector>(rho.data(), rho.size());
  Matrix result = Eigen::Map<const Matrix>(out.data(), dim, dim);
  const double dev = std::abs(result.trace() - rho.trace());
  if (dev > options.trace_tol) {
    std::ostringstream msg;
    msg << "Lindblad propagation lost trace (deviation " << dev << "); use a finer time grid";
    throw SimulationError(msg.str());
  }
  return result;
}

}  // namespace xtalk
