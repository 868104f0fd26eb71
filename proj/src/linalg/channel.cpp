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

#include <Eigen/Eigenvalues>

#include "xtalk/errors.hpp"
#include "xtalk/linalg.hpp"

namespace xtalk {

namespace {

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unvec(const Vector& v, int dim) { return Eigen::Map<const Matrix>(v.data(), dim, dim); }

// Matrix M with tr(E(rho)) = tr(M rho) for every rho.
Matrix trace_functional(const Matrix& superop, int dim) {
  Matrix m = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const auto row = superop.row(i + dim * i);
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) m(b, a) += row(a + dim * b);
    }
  }
  return m;
}

}  // namespace

QuantumChannel::QuantumChannel(Form form, std::vector<Matrix> ops, Dims dims)
    : form_(form), ops_(std::move(ops)), dims_(std::move(dims)) {}

QuantumChannel QuantumChannel::unitary(Matrix u, Dims dims) {
  if (u.rows() != u.cols() || u.rows() != dims_product(dims)) {
    throw ValidationError("unitary channel: dimension mismatch");
  }
  return QuantumChannel(Form::kUnitary, {std::move(u)}, std::move(dims));
}

QuantumChannel QuantumChannel::kraus(std::vector<Matrix> ops, Dims dims) {
  const int d = dims_product(dims);
  if (ops.empty()) throw ValidationError("kraus channel: empty operator list");
  for (const Matrix& k : ops) {
    if (k.rows() != d || k.cols() != d) throw ValidationError("kraus channel: dimension mismatch");
  }
  return QuantumChannel(Form::kKraus, std::move(ops), std::move(dims));
}

QuantumChannel QuantumChannel::superop(Matrix s, Dims dims) {
  const int d = dims_product(dims);
  if (s.rows() != d * d || s.cols() != d * d) {
    throw ValidationError("superoperator channel: dimension mismatch");
  }
  return QuantumChannel(Form::kSuperop, {std::move(s)}, std::move(dims));
}

QuantumChannel QuantumChannel::identity(Dims dims) {
  const int d = dims_product(dims);
  return unitary(Matrix::Identity(d, d), std::move(dims));
}

const Matrix& QuantumChannel::unitary_matrix() const {
  if (form_ != Form::kUnitary) throw ValidationError("channel is not held in unitary form");
  return ops_.front();
}

std::vector<Matrix> QuantumChannel::kraus_operators() const {
  if (form_ != Form::kSuperop) return ops_;
  return kraus_from_choi(choi(), dim());
}

Matrix QuantumChannel::superoperator() const {
  if (form_ == Form::kSuperop) return ops_.front();
  const int d = dim();
  Matrix s = Matrix::Zero(d * d, d * d);
  for (const Matrix& k : ops_) s += kron(k.conjugate(), k);
  return s;
}

Matrix QuantumChannel::choi() const {
  const int d = dim();
  if (form_ == Form::kSuperop) return reshuffle(ops_.front(), d);
  Matrix c = Matrix::Zero(d * d, d * d);
  for (const Matrix& k : ops_) {
    const Vector v = vec(k);
    c.noalias() += v * v.adjoint();
  }
  return c;
}

Matrix QuantumChannel::apply(const Matrix& rho) const {
  const int d = dim();
  if (rho.rows() != d || rho.cols() != d) throw ValidationError("apply: dimension mismatch");
  if (form_ == Form::kSuperop) return unvec(ops_.front() * vec(rho), d);
  Matrix out = Matrix::Zero(d, d);
  for (const Matrix& k : ops_) out += k * rho * k.adjoint();
  return out;
}

QuantumChannel QuantumChannel::then(const QuantumChannel& next) const {
  if (next.dims_ != dims_) throw ValidationError("channel composition: basis mismatch");
  if (form_ == Form::kUnitary && next.form_ == Form::kUnitary) {
    return unitary(next.ops_.front() * ops_.front(), dims_);
  }
  if (form_ != Form::kSuperop && next.form_ != Form::kSuperop) {
    std::vector<Matrix> ops;
    ops.reserve(ops_.size() * next.ops_.size());
    for (const Matrix& b : next.ops_) {
      for (const Matrix& a : ops_) ops.push_back(b * a);
    }
    return kraus(std::move(ops), dims_);
  }
  return superop(next.superoperator() * superoperator(), dims_);
}

double QuantumChannel::trace_deviation() const {
  const int d = dim();
  Matrix m;
  if (form_ == Form::kSuperop) {
    m = trace_functional(ops_.front(), d);
  } else {
    m = Matrix::Zero(d, d);
    for (const Matrix& k : ops_) m += k.adjoint() * k;
  }
  return (m - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

double QuantumChannel::trace_excess() const {
  const int d = dim();
  Matrix m;
  if (form_ == Form::kSuperop) {
    m = trace_functional(ops_.front(), d);
  } else {
    m = Matrix::Zero(d, d);
    for (const Matrix& k : ops_) m += k.adjoint() * k;
  }
  const Matrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(herm, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff() - 1.0;
}

Matrix reshuffle(const Matrix& m, int dim) {
  const int d = dim;
  if (m.rows() != d * d || m.cols() != d * d) throw ValidationError("reshuffle: dimension mismatch");
  Matrix out(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        for (int l = 0; l < d; ++l) out(i + d * k, j + d * l) = m(i + d * j, k + d * l);
      }
    }
  }
  return out;
}

std::vector<Matrix> kraus_from_choi(const Matrix& choi, int dim, double cutoff) {
  const Matrix herm = 0.5 * (choi + choi.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(herm);
  std::vector<Matrix> ops;
  for (Eigen::Index k = eig.eigenvalues().size() - 1; k >= 0; --k) {
    const double lambda = eig.eigenvalues()(k);
    if (lambda <= cutoff) break;
    ops.push_back(std::sqrt(lambda) * unvec(eig.eigenvectors().col(k), dim));
  }
  if (ops.empty()) ops.push_back(Matrix::Zero(dim, dim));
  return ops;
}

Matrix superop_from_unitary(const Matrix& u) { return kron(u.conjugate(), u); }

}  // namespace xtalk
