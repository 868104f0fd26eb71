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
#include <string>

#include "xtalk/device.hpp"
#include "xtalk/errors.hpp"
#include "xtalk/rng.hpp"

namespace xtalk {

namespace {

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void TransmonSpec::validate() const {
  if (!finite(frequency_ghz) || frequency_ghz <= 0.0) {
    throw ValidationError("transmon frequency must be positive");
  }
  if (!finite(anharmonicity_ghz)) throw ValidationError("transmon anharmonicity must be finite");
  if (levels < 2 || levels > 4) throw ValidationError("transmon levels must be 2, 3 or 4");
  if (t1_ns && !(*t1_ns > 0.0)) throw ValidationError("T1 must be positive");
  if (t2_ns) {
    if (!(*t2_ns > 0.0)) throw ValidationError("T2 must be positive");
    if (!t1_ns) throw ValidationError("T2 given without T1");
    if (*t2_ns > 2.0 * *t1_ns * (1.0 + 1e-12)) {
      throw ValidationError("T2 = " + std::to_string(*t2_ns) + " ns exceeds 2 T1 = " +
                            std::to_string(2.0 * *t1_ns) + " ns");
    }
  }
}

std::vector<std::pair<int, int>> LatticeSpec::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) out.emplace_back(site(r, c), site(r, c + 1));
      if (r + 1 < rows) out.emplace_back(site(r, c), site(r + 1, c));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> LatticeSpec::neighbors(int s) const {
  const int r = s / cols;
  const int c = s % cols;
  std::vector<int> out;
  if (r > 0) out.push_back(site(r - 1, c));
  if (c > 0) out.push_back(site(r, c - 1));
  if (c + 1 < cols) out.push_back(site(r, c + 1));
  if (r + 1 < rows) out.push_back(site(r + 1, c));
  return out;
}

bool LatticeSpec::adjacent(int a, int b) const {
  if (a < 0 || b < 0 || a >= n_sites() || b >= n_sites()) return false;
  const int dr = std::abs(a / cols - b / cols);
  const int dc = std::abs(a % cols - b % cols);
  return dr + dc == 1;
}

void LatticeSpec::validate() const {
  if (rows < 1 || cols < 1) throw ValidationError("lattice rows and cols must be positive");
  if (static_cast<int>(frequencies_ghz.size()) != n_sites()) {
    throw ValidationError("lattice has " + std::to_string(n_sites()) + " sites but " +
                          std::to_string(frequencies_ghz.size()) + " frequencies");
  }
  for (double f : frequencies_ghz) {
    if (!finite(f) || f <= 0.0) throw ValidationError("lattice frequencies must be positive");
  }
  if (addressable) {
    for (auto [a, b] : edges()) {
      if (frequencies_ghz[a] == frequencies_ghz[b]) {
        throw ValidationError("adjacent sites " + std::to_string(a) + " and " +
                              std::to_string(b) + " share a frequency label");
      }
    }
  }
}

std::vector<double> LatticeSpec::checkerboard(int rows, int cols, double f0, double f1) {
  std::vector<double> out(static_cast<std::size_t>(rows * cols));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) out[r * cols + c] = ((r + c) % 2 == 0) ? f0 : f1;
  }
  return out;
}

std::vector<double> LatticeSpec::eight_color(int rows, int cols) {
  std::vector<double> out(static_cast<std::size_t>(rows * cols));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) out[r * cols + c] = 3.0 + 0.1 * ((c + 3 * r) % 8);
  }
  return out;
}

CrosstalkSpec CrosstalkSpec::none(int n_sites) {
  CrosstalkSpec spec;
  spec.beta = RealMatrix::Identity(n_sites, n_sites);
  spec.theta = RealMatrix::Zero(n_sites, n_sites);
  return spec;
}

bool CrosstalkSpec::allowed(int j, int k) const {
  if (j == k) return true;
  for (auto [a, b] : sparsity) {
    if ((a == j && b == k) || (a == k && b == j)) return true;
  }
  return false;
}

void CrosstalkSpec::validate() const {
  const auto n = beta.rows();
  if (beta.cols() != n || theta.rows() != n || theta.cols() != n) {
    throw ValidationError("crosstalk beta and theta must be square and of equal size");
  }
  for (auto [a, b] : sparsity) {
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) {
      throw ValidationError("crosstalk sparsity pair out of range");
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (!finite(beta(j, k)) || !finite(theta(j, k))) {
        throw ValidationError("crosstalk entries must be finite");
      }
      if (j == k) {
        if (beta(j, k) != 1.0 || theta(j, k) != 0.0) {
          throw ValidationError("crosstalk diagonal must be beta = 1, theta = 0");
        }
      } else if (beta(j, k) != 0.0 && !allowed(static_cast<int>(j), static_cast<int>(k))) {
        throw ValidationError("crosstalk beta(" + std::to_string(j) + "," + std::to_string(k) +
                              ") is nonzero outside the sparsity set");
      }
    }
  }
}

CouplingGraph CouplingGraph::uniform(const LatticeSpec& lattice, double j_ghz) {
  CouplingGraph g;
  for (auto [a, b] : lattice.edges()) g.edges.push_back({a, b, j_ghz});
  return g;
}

void CouplingGraph::validate(const LatticeSpec& lattice) const {
  for (const auto& e : edges) {
    if (!lattice.adjacent(e.j, e.k)) {
      throw ValidationError("coupling edge (" + std::to_string(e.j) + "," + std::to_string(e.k) +
                            ") is not a lattice edge");
    }
    if (!finite(e.j_ghz)) throw ValidationError("coupling strength must be finite");
  }
}

double GaussianDrag::shape(double t) const {
  if (t < 0.0 || t > t_gate) return 0.0;
  const double c = 0.5 * t_gate;
  const double e0 = std::exp(-c * c / (2.0 * sigma * sigma));
  const double g = std::exp(-(t - c) * (t - c) / (2.0 * sigma * sigma));
  return (g - e0) / (1.0 - e0);
}

double GaussianDrag::shape_derivative(double t) const {
  if (t < 0.0 || t > t_gate) return 0.0;
  const double c = 0.5 * t_gate;
  const double e0 = std::exp(-c * c / (2.0 * sigma * sigma));
  const double g = std::exp(-(t - c) * (t - c) / (2.0 * sigma * sigma));
  return -(t - c) / (sigma * sigma) * g / (1.0 - e0);
}

double GaussianDrag::shape_area() const {
  const double c = 0.5 * t_gate;
  const double e0 = std::exp(-c * c / (2.0 * sigma * sigma));
  const double gauss = sigma * std::sqrt(kTwoPi) * std::erf(c / (std::sqrt(2.0) * sigma));
  return (gauss - e0 * t_gate) / (1.0 - e0);
}

Quadratures GaussianDrag::evaluate(double t) const {
  if (t < 0.0 || t > t_gate) return {};
  Quadratures q;
  q.x = x_scale * shape(t);
  if (y_scale != 0.0 && drag_coeff != 0.0) {
    if (anharmonicity == 0.0) throw ValidationError("DRAG quadrature needs a nonzero anharmonicity");
    q.y = -y_scale * drag_coeff * shape_derivative(t) / (2.0 * anharmonicity);
  }
  return q;
}

Quadratures Hanning::evaluate(double t) const {
  if (t < 0.0 || t > t_gate) return {};
  Quadratures q;
  for (int k = 0; k < 3; ++k) {
    const double w = 1.0 - std::cos(kTwoPi * (k + 1) * t / t_gate);
    q.x += cx[k] * w;
    q.y += cy[k] * w;
  }
  return q;
}

Quadratures evaluate_envelope(const PulseEnvelope& envelope, double t) {
  return std::visit([t](const auto& e) { return e.evaluate(t); }, envelope);
}

double envelope_duration(const PulseEnvelope& envelope) {
  return std::visit([](const auto& e) { return e.t_gate; }, envelope);
}

Quadratures DriveTone::envelope_at(double t) const {
  return evaluate_envelope(envelope, t - t_start);
}

double PulseProgram::duration() const {
  double end = 0.0;
  for (const auto& tone : tones) end = std::max(end, tone.t_start + envelope_duration(tone.envelope));
  return end;
}

void DeviceModel::validate() const {
  lattice.validate();
  if (static_cast<int>(transmons.size()) != n_sites()) {
    throw ValidationError("device needs one transmon spec per lattice site");
  }
  for (int k = 0; k < n_sites(); ++k) {
    transmons[k].validate();
    if (std::abs(transmons[k].frequency_ghz - lattice.frequencies_ghz[k]) > 1e-12) {
      throw ValidationError("transmon " + std::to_string(k) +
                            " frequency disagrees with the lattice frequency pattern");
    }
  }
  coupling.validate(lattice);
}

std::vector<SeenDrive> drives_seen_by(int site, const PulseProgram& program,
                                      const CrosstalkSpec& crosstalk) {
  std::vector<SeenDrive> out;
  for (const auto& tone : program.tones) {
    const int j = tone.target_site;
    if (j == site) {
      out.push_back({&tone, 1.0, 0.0});
    } else if (j < crosstalk.n_sites() && site < crosstalk.n_sites() &&
               crosstalk.allowed(j, site) && crosstalk.beta(j, site) != 0.0) {
      out.push_back({&tone, crosstalk.beta(j, site), crosstalk.theta(j, site)});
    }
  }
  return out;
}

CrosstalkSpec sample_crosstalk(const LatticeSpec& lattice, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw ValidationError("crosstalk sigma must be non-negative");
  const int n = lattice.n_sites();
  CrosstalkSpec spec = CrosstalkSpec::none(n);
  spec.sparsity = lattice.edges();
  const CounterRng root(seed, 0x78746c6bULL);
  for (auto [a, b] : spec.sparsity) {
    for (auto [j, k] : {std::pair{a, b}, std::pair{b, a}}) {
      CounterRng rng = root.substream(static_cast<std::uint64_t>(j) * n + k);
      const double z = rng.normal();
      const double phase = kTwoPi * rng.uniform();
      spec.beta(j, k) = sigma == 0.0 ? 0.0 : sigma * z;
      spec.theta(j, k) = sigma == 0.0 ? 0.0 : phase;
    }
  }
  return spec;
}

}  // namespace xtalk
