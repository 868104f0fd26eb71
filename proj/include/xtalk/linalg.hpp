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

#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace xtalk {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using Dims = std::vector<int>;

inline constexpr Complex kImag{0.0, 1.0};
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Angular frequency in rad/ns for a frequency given in GHz.
inline double angular(double ghz) { return kTwoPi * ghz; }

int dims_product(const Dims& dims);

/// Dense operator on a tensor-product space. Subsystem 0 is the most
/// significant factor of the Kronecker ordering.
class Operator {
 public:
  Operator() = default;
  explicit Operator(Matrix entries);
  Operator(Matrix entries, Dims basis_dims);

  static Operator zero(const Dims& dims);
  static Operator identity(const Dims& dims);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Dims& basis_dims() const { return dims_; }
  const Matrix& matrix() const { return entries_; }
  Complex operator()(int row, int col) const { return entries_(row, col); }

  /// Max absolute entry of H - H^dagger.
  double hermiticity_error() const;
  /// Max absolute entry of U U^dagger - 1.
  double unitarity_error() const;
  bool is_hermitian(double tol = 1e-12) const { return hermiticity_error() <= tol; }
  bool is_unitary(double tol = 1e-12) const { return unitarity_error() <= tol; }

  Operator adjoint() const;

  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator+(const Operator& a, const Operator& b);

 private:
  Matrix entries_;
  Dims dims_;
};

Matrix kron(const Matrix& a, const Matrix& b);
Operator kron(const Operator& a, const Operator& b);

/// Embeds a single-subsystem operator at position `site` of `dims`.
Matrix embed(const Matrix& local, int site, const Dims& dims);

/// Uniform grid of piecewise-constant segments on [t_start, t_end] (ns).
class TimeGrid {
 public:
  TimeGrid(double t_start, double t_end, int n_steps);

  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }
  int n_steps() const { return n_steps_; }
  double duration() const { return t_end_ - t_start_; }
  double dt() const { return (t_end_ - t_start_) / n_steps_; }
  double midpoint(int step) const { return t_start_ + (step + 0.5) * dt(); }
  TimeGrid refined(int factor) const;

 private:
  double t_start_;
  double t_end_;
  int n_steps_;
};

/// Completely positive map held as a unitary, a Kraus list or a
/// superoperator. Superoperators act on column-stacked density matrices:
/// vec(A rho B) = (B^T kron A) vec(rho).
class QuantumChannel {
 public:
  enum class Form { kUnitary, kKraus, kSuperop };

  static QuantumChannel unitary(Matrix u, Dims dims);
  static QuantumChannel kraus(std::vector<Matrix> ops, Dims dims);
  static QuantumChannel superop(Matrix s, Dims dims);
  static QuantumChannel identity(Dims dims);

  Form form() const { return form_; }
  const Dims& dims() const { return dims_; }
  int dim() const { return dims_product(dims_); }

  /// Only valid for Form::kUnitary.
  const Matrix& unitary_matrix() const;
  std::vector<Matrix> kraus_operators() const;
  Matrix superoperator() const;
  Matrix choi() const;

  Matrix apply(const Matrix& rho) const;
  /// The map rho -> next(this(rho)).
  QuantumChannel then(const QuantumChannel& next) const;

  /// Max deviation of tr(E(.)) from tr(.) over the matrix-unit basis.
  double trace_deviation() const;
  /// Largest eigenvalue of sum K^dagger K minus one (<= 0 when trace non-increasing).
  double trace_excess() const;

 private:
  QuantumChannel(Form form, std::vector<Matrix> ops, Dims dims);

  Form form_ = Form::kUnitary;
  std::vector<Matrix> ops_;
  Dims dims_;
};

/// Reshuffle between superoperator and Choi matrix (involution).
Matrix reshuffle(const Matrix& m, int dim);
std::vector<Matrix> kraus_from_choi(const Matrix& choi, int dim, double cutoff = 1e-14);
Matrix superop_from_unitary(const Matrix& u);

// -- propagation ------------------------------------------------------------

using HamiltonianFn = std::function<Matrix(double)>;

/// exp(-i H dt) for Hermitian H via eigendecomposition.
Operator expm_hermitian_generator(const Operator& h, double dt);
/// Unchecked kernel used in the time-stepping loops.
Matrix expm_hermitian(const Matrix& h, double dt);

/// Time-ordered product of midpoint-sampled segment propagators.
Operator propagate_unitary(const HamiltonianFn& hamiltonian_at, const TimeGrid& grid,
                           const Dims& dims = {});

enum class LindbladScheme {
  kExact,        ///< exp of the full Liouvillian per segment
  kStrangSplit,  ///< dissipator half-steps around the unitary segment
};

struct LindbladOptions {
  LindbladScheme scheme = LindbladScheme::kExact;
  double trace_tol = 1e-6;
};

/// Column-stacked Liouvillian of -i[H, .] + sum_c D[c].
Matrix liouvillian(const Matrix& h, const std::vector<Matrix>& collapse);
Matrix dissipator(const std::vector<Matrix>& collapse, int dim);

/// Returns the superoperator of the Lindblad evolution over `grid`.
Matrix lindblad_superop(const HamiltonianFn& hamiltonian_at, const std::vector<Matrix>& collapse,
                        const TimeGrid& grid, const LindbladOptions& options = {});

QuantumChannel propagate_lindblad(const HamiltonianFn& hamiltonian_at,
                                  const std::vector<Operator>& collapse_ops, const TimeGrid& grid,
                                  const QuantumChannel& input, const LindbladOptions& options = {});
Matrix propagate_lindblad(const HamiltonianFn& hamiltonian_at,
                          const std::vector<Operator>& collapse_ops, const TimeGrid& grid,
                          const Matrix& rho, const LindbladOptions& options = {});

}  // namespace xtalk
