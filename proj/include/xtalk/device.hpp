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
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "xtalk/linalg.hpp"

namespace xtalk {

// Units: time in ns, frequencies in GHz (cycles/ns), envelope amplitudes in
// rad/ns. Hamiltonians are returned in angular units (rad/ns, hbar = 1).

struct TransmonSpec {
  double frequency_ghz = 3.0;
  double anharmonicity_ghz = -0.33;
  int levels = 3;
  std::optional<double> t1_ns;
  std::optional<double> t2_ns;

  void validate() const;
};

/// Rectangular lattice with row-major site numbering. Sites sharing a
/// frequency value share a frequency label.
struct LatticeSpec {
  int rows = 1;
  int cols = 1;
  std::vector<double> frequencies_ghz;
  bool addressable = true;

  int n_sites() const { return rows * cols; }
  int site(int row, int col) const { return row * cols + col; }
  /// Nearest-neighbour edges (j < k), row-major order.
  std::vector<std::pair<int, int>> edges() const;
  std::vector<int> neighbors(int site) const;
  bool adjacent(int a, int b) const;
  void validate() const;

  /// Two-colour pattern (f0 on even row+col, f1 on odd).
  static std::vector<double> checkerboard(int rows, int cols, double f0 = 3.0, double f1 = 3.1);
  /// Eight frequencies 3.0 ... 3.7 GHz, colour (col + 3 row) mod 8: adjacent
  /// sites differ and no two neighbours of a site coincide.
  static std::vector<double> eight_color(int rows, int cols);
};

/// beta(j, k) is the relative amplitude of drive j seen by transmon k and
/// theta(j, k) its phase lag; beta(k, k) = 1 and theta(k, k) = 0.
struct CrosstalkSpec {
  RealMatrix beta;
  RealMatrix theta;
  std::vector<std::pair<int, int>> sparsity;

  static CrosstalkSpec none(int n_sites);
  int n_sites() const { return static_cast<int>(beta.rows()); }
  bool allowed(int j, int k) const;
  void validate() const;
};

struct CouplingEdge {
  int j = 0;
  int k = 0;
  double j_ghz = 0.0;
};

struct CouplingGraph {
  std::vector<CouplingEdge> edges;

  static CouplingGraph uniform(const LatticeSpec& lattice, double j_ghz);
  void validate(const LatticeSpec& lattice) const;
};

struct Quadratures {
  double x = 0.0;
  double y = 0.0;
};

/// Gaussian on [0, t_gate] centred at t_gate/2, shifted and rescaled so it
/// vanishes at both endpoints and peaks at 1. The in-phase quadrature is
/// x_scale * g(t); the DRAG quadrature is -y_scale * drag_coeff * g'(t) / (2 alpha)
/// with alpha the angular anharmonicity of the driven transmon.
struct GaussianDrag {
  double t_gate = 10.0;
  double sigma = 2.5;
  double x_scale = 0.0;
  double y_scale = 0.0;
  double drag_coeff = 1.0;
  double anharmonicity = 0.0;

  double shape(double t) const;
  double shape_derivative(double t) const;
  /// Integral of shape() over [0, t_gate].
  double shape_area() const;
  Quadratures evaluate(double t) const;
};

/// sum_k c_k [1 - cos(2 pi k t / t_gate)], k = 1..3, per quadrature.
struct Hanning {
  double t_gate = 100.0;
  std::array<double, 3> cx{};
  std::array<double, 3> cy{};

  Quadratures evaluate(double t) const;
};

using PulseEnvelope = std::variant<GaussianDrag, Hanning>;

Quadratures evaluate_envelope(const PulseEnvelope& envelope, double t);
double envelope_duration(const PulseEnvelope& envelope);

/// One pulse segment on the drive line of `target_site`, starting at t_start.
/// The lab-frame field is x(t) cos(w t + p) + y(t) sin(w t + p) with
/// w = 2 pi (carrier + detuning) and p = phase + virtual_z_offset.
struct DriveTone {
  int target_site = 0;
  double carrier_ghz = 0.0;
  double detuning_ghz = 0.0;
  double phase = 0.0;
  PulseEnvelope envelope = GaussianDrag{};
  double virtual_z_offset = 0.0;
  double t_start = 0.0;

  double angular_carrier() const { return angular(carrier_ghz + detuning_ghz); }
  double total_phase() const { return phase + virtual_z_offset; }
  Quadratures envelope_at(double t) const;
};

struct PulseProgram {
  std::vector<DriveTone> tones;

  double duration() const;
};

struct DeviceModel {
  LatticeSpec lattice;
  std::vector<TransmonSpec> transmons;
  CouplingGraph coupling;

  int n_sites() const { return lattice.n_sites(); }
  void validate() const;
};

struct SeenDrive {
  const DriveTone* tone = nullptr;
  double beta = 1.0;
  double theta = 0.0;
};

/// Tones on the site's own line (beta = 1) plus tones of lines that bleed in
/// through the crosstalk sparsity set.
std::vector<SeenDrive> drives_seen_by(int site, const PulseProgram& program,
                                      const CrosstalkSpec& crosstalk);

Matrix lowering_operator(int levels);
Matrix number_operator(int levels);

/// w n + (alpha/2)(n - 1) n + sum_j beta_j [x_j cos(.) + y_j sin(.)] (a + a^dagger).
Operator lab_hamiltonian(const TransmonSpec& site, std::span<const SeenDrive> drives, double t);

/// R H R^dagger + i R' R^dagger with R = exp(i t sum_k w_k n_k), no approximation.
Operator rotating_frame(const Operator& lab, const std::vector<double>& frame_ghz, double t);

/// Single-site frame change. With rwa set, terms at the sum frequency
/// w' + w_frame are dropped; difference-frequency terms (including detuned
/// neighbour tones) are kept.
Operator rotating_frame(const TransmonSpec& site, std::span<const SeenDrive> drives,
                        double frame_ghz, double t, bool rwa);

/// J sum (a_j a_k^dagger + a_j^dagger a_k); edge indices refer to positions in dims.
Operator interaction_hamiltonian(const CouplingGraph& graph, const Dims& dims,
                                 int dim_cap = 4096);

/// (x1_coeff, zx_coeff) = (omega, -omega J / delta) of the effective CR model.
std::pair<double, double> effective_cr_coefficients(double j_ghz, double delta_ghz, double omega);

CrosstalkSpec sample_crosstalk(const LatticeSpec& lattice, double sigma, std::uint64_t seed);

/// 1/T_phi = 1/T2 - 1/(2 T1), in 1/ns.
double dephasing_rate(const TransmonSpec& spec);
/// sqrt(1/T1) a and, when the dephasing rate is positive, sqrt(2/T_phi) n.
std::vector<Operator> decoherence_ops(const TransmonSpec& spec);

struct JointOptions {
  int levels_override = 0;
  /// Common rotating-frame frequency; defaults to the first site's frequency.
  std::optional<double> frame_ghz;
  int dim_cap = 256;
  bool include_coupling = true;
};

/// Rotating-frame RWA Hamiltonian of a set of sites (in the given order)
/// with drive crosstalk and capacitive coupling. All sites share
/// one frame frequency, which keeps the coupling time independent; results
/// are mapped to per-site frames with to_site_frames().
class JointHamiltonian {
 public:
  JointHamiltonian(const DeviceModel& device, std::vector<int> sites, const PulseProgram& program,
                   const CrosstalkSpec& crosstalk, const JointOptions& options = {});

  const std::vector<int>& sites() const { return sites_; }
  const Dims& dims() const { return dims_; }
  int dim() const { return dim_; }
  bool driven() const { return !terms_.empty(); }
  const Matrix& static_part() const { return static_; }
  double frame_ghz() const { return frame_ghz_; }

  void evaluate(double t, Matrix& out) const;
  Matrix operator()(double t) const;

  Matrix to_site_frames(const Matrix& op, double t) const;
  Matrix superop_to_site_frames(const Matrix& superop, double t) const;

  /// Damping and dephasing operators of every site carrying T1/T2.
  std::vector<Matrix> collapse_ops() const;

 private:
  struct Entry {
    int row;
    int col;
    double value;
  };
  struct Term {
    int position;
    const DriveTone* tone;
    double beta;
    double detuning;  // w' - w_frame, rad/ns
    double phase;
  };

  Vector frame_phases(double t) const;

  std::vector<int> sites_;
  std::vector<TransmonSpec> specs_;
  Dims dims_;
  int dim_ = 1;
  double frame_ghz_ = 0.0;
  Matrix static_;
  std::vector<std::vector<Entry>> lowering_;
  std::vector<Term> terms_;
  std::vector<Eigen::VectorXi> occupations_;
};

}  // namespace xtalk
