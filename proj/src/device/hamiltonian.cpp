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
#include <set>
#include <string>

#include "xtalk/device.hpp"
#include "xtalk/errors.hpp"

namespace xtalk {

Matrix lowering_operator(int levels) {
  Matrix a = Matrix::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Matrix number_operator(int levels) {
  Matrix n = Matrix::Zero(levels, levels);
  for (int k = 0; k < levels; ++k) n(k, k) = k;
  return n;
}

Operator lab_hamiltonian(const TransmonSpec& site, std::span<const SeenDrive> drives, double t) {
  site.validate();
  const int d = site.levels;
  const double w = angular(site.frequency_ghz);
  const double alpha = angular(site.anharmonicity_ghz);
  Matrix h = Matrix::Zero(d, d);
  for (int n = 0; n < d; ++n) h(n, n) = w * n + 0.5 * alpha * n * (n - 1);
  double field = 0.0;
  for (const auto& s : drives) {
    const Quadratures q = s.tone->envelope_at(t);
    const double arg = s.tone->angular_carrier() * t + s.tone->total_phase() + s.theta;
    field += s.beta * (q.x * std::cos(arg) + q.y * std::sin(arg));
  }
  const Matrix a = lowering_operator(d);
  h += field * (a + a.adjoint());
  return Operator(h);
}

Operator rotating_frame(const Operator& lab, const std::vector<double>& frame_ghz, double t) {
  Dims dims = lab.basis_dims();
  if (dims.empty()) dims = {lab.dim()};
  if (frame_ghz.size() != dims.size()) {
    throw ValidationError("rotating_frame needs one frame frequency per subsystem");
  }
  const int dim = lab.dim();
  Vector energy = Vector::Zero(dim);
  for (int b = 0; b < dim; ++b) {
    int rest = b;
    double e = 0.0;
    for (int p = static_cast<int>(dims.size()) - 1; p >= 0; --p) {
      e += angular(frame_ghz[p]) * (rest % dims[p]);
      rest /= dims[p];
    }
    energy(b) = e;
  }
  Matrix h = lab.matrix();
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) h(r, c) *= std::exp(kImag * t * (energy(r).real() - energy(c).real()));
  }
  for (int b = 0; b < dim; ++b) h(b, b) -= energy(b);
  return Operator(h, dims);
}

Operator rotating_frame(const TransmonSpec& site, std::span<const SeenDrive> drives,
                        double frame_ghz, double t, bool rwa) {
  if (!rwa) return rotating_frame(lab_hamiltonian(site, drives, t), {frame_ghz}, t);
  site.validate();
  const int d = site.levels;
  const double dw = angular(site.frequency_ghz - frame_ghz);
  const double alpha = angular(site.anharmonicity_ghz);
  Matrix h = Matrix::Zero(d, d);
  for (int n = 0; n < d; ++n) h(n, n) = dw * n + 0.5 * alpha * n * (n - 1);
  Complex c = 0.0;
  for (const auto& s : drives) {
    const Quadratures q = s.tone->envelope_at(t);
    const double arg = (s.tone->angular_carrier() - angular(frame_ghz)) * t +
                       s.tone->total_phase() + s.theta;
    c += 0.5 * s.beta * Complex(q.x, -q.y) * std::exp(kImag * arg);
  }
  const Matrix a = lowering_operator(d);
  h += c * a + std::conj(c) * a.adjoint();
  return Operator(h);
}

Operator interaction_hamiltonian(const CouplingGraph& graph, const Dims& dims, int dim_cap) {
  const int dim = dims_product(dims);
  if (dim > dim_cap) {
    throw ValidationError("interaction Hamiltonian dimension " + std::to_string(dim) +
                          " exceeds the cap " + std::to_string(dim_cap));
  }
  const int n = static_cast<int>(dims.size());
  Matrix h = Matrix::Zero(dim, dim);
  for (const auto& e : graph.edges) {
    if (e.j < 0 || e.k < 0 || e.j >= n || e.k >= n || e.j == e.k) {
      throw ValidationError("coupling edge refers to a subsystem outside dims");
    }
    const Matrix aj = embed(lowering_operator(dims[e.j]), e.j, dims);
    const Matrix ak = embed(lowering_operator(dims[e.k]), e.k, dims);
    const Matrix hop = aj * ak.adjoint();
    h += angular(e.j_ghz) * (hop + hop.adjoint());
  }
  return Operator(h, dims);
}

std::pair<double, double> effective_cr_coefficients(double j_ghz, double delta_ghz, double omega) {
  if (delta_ghz == 0.0) throw ValidationError("cross-resonance detuning must be nonzero");
  return {omega, -omega * j_ghz / delta_ghz};
}

double dephasing_rate(const TransmonSpec& spec) {
  if (!spec.t1_ns || !spec.t2_ns) return 0.0;
  return 1.0 / *spec.t2_ns - 0.5 / *spec.t1_ns;
}

std::vector<Operator> decoherence_ops(const TransmonSpec& spec) {
  spec.validate();
  std::vector<Operator> out;
  if (!spec.t1_ns) return out;
  out.emplace_back(std::sqrt(1.0 / *spec.t1_ns) * lowering_operator(spec.levels));
  const double gamma_phi = dephasing_rate(spec);
  if (gamma_phi > 0.0) {
    out.emplace_back(std::sqrt(2.0 * gamma_phi) * number_operator(spec.levels));
  }
  return out;
}

JointHamiltonian::JointHamiltonian(const DeviceModel& device, std::vector<int> sites,
                                   const PulseProgram& program, const CrosstalkSpec& crosstalk,
                                   const JointOptions& options)
    : sites_(std::move(sites)) {
  if (sites_.empty()) throw ValidationError("JointHamiltonian needs at least one site");
  std::set<int> seen;
  for (int s : sites_) {
    if (s < 0 || s >= device.n_sites()) throw ValidationError("site index out of range");
    if (!seen.insert(s).second) throw ValidationError("duplicate site in JointHamiltonian");
  }
  if (options.levels_override != 0 && (options.levels_override < 2 || options.levels_override > 4)) {
    throw ValidationError("levels_override must be 0, 2, 3 or 4");
  }
  const int n = static_cast<int>(sites_.size());
  long long dim = 1;
  for (int s : sites_) {
    TransmonSpec spec = device.transmons[s];
    if (options.levels_override != 0) spec.levels = options.levels_override;
    specs_.push_back(spec);
    dims_.push_back(spec.levels);
    dim *= spec.levels;
  }
  if (dim > options.dim_cap) {
    throw ValidationError("joint Hilbert space of " + std::to_string(n) + " sites has dimension " +
                          std::to_string(dim) + " > dim_cap " + std::to_string(options.dim_cap) +
                          "; use levels_override = 2 or a smaller closure depth d");
  }
  dim_ = static_cast<int>(dim);
  frame_ghz_ = options.frame_ghz.value_or(specs_.front().frequency_ghz);

  std::vector<int> stride(n, 1);
  for (int p = n - 2; p >= 0; --p) stride[p] = stride[p + 1] * dims_[p + 1];
  occupations_.assign(n, Eigen::VectorXi(dim_));
  for (int b = 0; b < dim_; ++b) {
    for (int p = 0; p < n; ++p) occupations_[p](b) = (b / stride[p]) % dims_[p];
  }

  static_ = Matrix::Zero(dim_, dim_);
  for (int p = 0; p < n; ++p) {
    const double dw = angular(specs_[p].frequency_ghz - frame_ghz_);
    const double alpha = angular(specs_[p].anharmonicity_ghz);
    for (int b = 0; b < dim_; ++b) {
      const int m = occupations_[p](b);
      static_(b, b) += dw * m + 0.5 * alpha * m * (m - 1);
    }
  }

  lowering_.resize(n);
  for (int p = 0; p < n; ++p) {
    for (int b = 0; b < dim_; ++b) {
      const int m = occupations_[p](b);
      if (m > 0) lowering_[p].push_back({b - stride[p], b, std::sqrt(static_cast<double>(m))});
    }
  }

  if (options.include_coupling) {
    CouplingGraph local;
    for (const auto& e : device.coupling.edges) {
      const auto pj = std::find(sites_.begin(), sites_.end(), e.j);
      const auto pk = std::find(sites_.begin(), sites_.end(), e.k);
      if (pj == sites_.end() || pk == sites_.end()) continue;
      local.edges.push_back({static_cast<int>(pj - sites_.begin()),
                             static_cast<int>(pk - sites_.begin()), e.j_ghz});
    }
    if (!local.edges.empty()) static_ += interaction_hamiltonian(local, dims_, dim_).matrix();
  }

  for (int p = 0; p < n; ++p) {
    for (const auto& s : drives_seen_by(sites_[p], program, crosstalk)) {
      terms_.push_back({p, s.tone, s.beta, s.tone->angular_carrier() - angular(frame_ghz_),
                        s.tone->total_phase() + s.theta});
    }
  }
}

void JointHamiltonian::evaluate(double t, Matrix& out) const {
  out = static_;
  const int n = static_cast<int>(sites_.size());
  Complex coeff[16];
  std::vector<Complex> heap;
  Complex* c = coeff;
  if (n > 16) {
    heap.assign(n, 0.0);
    c = heap.data();
  } else {
    std::fill(coeff, coeff + n, Complex(0.0));
  }
  for (const auto& term : terms_) {
    const Quadratures q = term.tone->envelope_at(t);
    if (q.x == 0.0 && q.y == 0.0) continue;
    c[term.position] +=
        0.5 * term.beta * Complex(q.x, -q.y) * std::exp(kImag * (term.detuning * t + term.phase));
  }
  for (int p = 0; p < n; ++p) {
    if (c[p] == 0.0) continue;
    const Complex cc = std::conj(c[p]);
    for (const auto& e : lowering_[p]) {
      out(e.row, e.col) += c[p] * e.value;
      out(e.col, e.row) += cc * e.value;
    }
  }
}

Matrix JointHamiltonian::operator()(double t) const {
  Matrix out;
  evaluate(t, out);
  return out;
}

Vector JointHamiltonian::frame_phases(double t) const {
  Vector phases(dim_);
  for (int b = 0; b < dim_; ++b) {
    double e = 0.0;
    for (std::size_t p = 0; p < sites_.size(); ++p) {
      e += angular(specs_[p].frequency_ghz - frame_ghz_) * occupations_[p](b);
    }
    phases(b) = std::exp(kImag * (e * t));
  }
  return phases;
}

Matrix JointHamiltonian::to_site_frames(const Matrix& op, double t) const {
  return frame_phases(t).asDiagonal() * op;
}

Matrix JointHamiltonian::superop_to_site_frames(const Matrix& superop, double t) const {
  const Vector d = frame_phases(t);
  Vector row(dim_ * dim_);
  for (int j = 0; j < dim_; ++j) {
    for (int i = 0; i < dim_; ++i) row(i + dim_ * j) = d(i) * std::conj(d(j));
  }
  return row.asDiagonal() * superop;
}

std::vector<Matrix> JointHamiltonian::collapse_ops() const {
  std::vector<Matrix> out;
  for (std::size_t p = 0; p < sites_.size(); ++p) {
    for (const auto& op : decoherence_ops(specs_[p])) {
      out.push_back(embed(op.matrix(), static_cast<int>(p), dims_));
    }
  }
  return out;
}

}  // namespace xtalk
