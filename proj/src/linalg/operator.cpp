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
#include <string>

#include "xtalk/errors.hpp"
#include "xtalk/linalg.hpp"

namespace xtalk {

int dims_product(const Dims& dims) {
  int p = 1;
  for (int d : dims) {
    if (d <= 0) throw ValidationError("subsystem dimension must be positive");
    p *= d;
  }
  return p;
}

Operator::Operator(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw ValidationError("operator must be square");
  dims_ = {static_cast<int>(entries_.rows())};
}

Operator::Operator(Matrix entries, Dims basis_dims)
    : entries_(std::move(entries)), dims_(std::move(basis_dims)) {
  if (entries_.rows() != entries_.cols()) throw ValidationError("operator must be square");
  if (dims_product(dims_) != entries_.rows()) {
    throw ValidationError("basis_dims product " + std::to_string(dims_product(dims_)) +
                          " does not match operator dimension " +
                          std::to_string(entries_.rows()));
  }
}

Operator Operator::zero(const Dims& dims) {
  const int n = dims_product(dims);
  return Operator(Matrix::Zero(n, n), dims);
}

Operator Operator::identity(const Dims& dims) {
  const int n = dims_product(dims);
  return Operator(Matrix::Identity(n, n), dims);
}

double Operator::hermiticity_error() const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

double Operator::unitarity_error() const {
  const Matrix prod = entries_ * entries_.adjoint();
  return (prod - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
}

Operator Operator::adjoint() const { return Operator(entries_.adjoint(), dims_); }

Operator operator*(const Operator& a, const Operator& b) {
  if (a.dims_ != b.dims_) throw ValidationError("operator product: basis mismatch");
  return Operator(a.entries_ * b.entries_, a.dims_);
}

Operator operator+(const Operator& a, const Operator& b) {
  if (a.dims_ != b.dims_) throw ValidationError("operator sum: basis mismatch");
  return Operator(a.entries_ + b.entries_, a.dims_);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Operator kron(const Operator& a, const Operator& b) {
  Dims dims = a.basis_dims();
  dims.insert(dims.end(), b.basis_dims().begin(), b.basis_dims().end());
  return Operator(kron(a.matrix(), b.matrix()), dims);
}

Matrix embed(const Matrix& local, int site, const Dims& dims) {
  if (site < 0 || site >= static_cast<int>(dims.size())) throw ValidationError("embed: bad site");
  if (local.rows() != dims[site]) throw ValidationError("embed: local dimension mismatch");
  int before = 1;
  for (int k = 0; k < site; ++k) before *= dims[k];
  int after = 1;
  for (std::size_t k = site + 1; k < dims.size(); ++k) after *= dims[k];
  return kron(kron(Matrix::Identity(before, before), local), Matrix::Identity(after, after));
}

TimeGrid::TimeGrid(double t_start, double t_end, int n_steps)
    : t_start_(t_start), t_end_(t_end), n_steps_(n_steps) {
  if (!(t_end > t_start)) throw ValidationError("time grid requires t_end > t_start");
  if (n_steps < 1) throw ValidationError("time grid requires n_steps >= 1");
}

TimeGrid TimeGrid::refined(int factor) const {
  return TimeGrid(t_start_, t_end_, n_steps_ * factor);
}

}  // namespace xtalk
