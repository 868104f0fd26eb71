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

#include "xtalk/pauli.hpp"

#include <bit>

#include "xtalk/errors.hpp"

namespace xtalk {

namespace {

struct PauliMasks {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  Complex y_phase{1.0, 0.0};
};

PauliMasks masks_of(PauliIndex index, int n_qubits) {
  PauliMasks m;
  int n_y = 0;
  for (int q = 0; q < n_qubits; ++q) {
    const int digit = pauli_digit(index, q, n_qubits);
    const std::uint64_t bit = std::uint64_t{1} << (n_qubits - 1 - q);
    if (digit == 1 || digit == 2) m.x |= bit;
    if (digit == 2 || digit == 3) m.z |= bit;
    if (digit == 2) ++n_y;
  }
  static const Complex kPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  m.y_phase = kPowers[n_y % 4];
  return m;
}

// P|j> = phase(j) |j ^ x>
Complex basis_phase(const PauliMasks& m, std::uint64_t j) {
  return (std::popcount(j & m.z) % 2) ? -m.y_phase : m.y_phase;
}

void require_qubits(const QuantumChannel& channel) {
  for (int d : channel.dims()) {
    if (d != 2) {
      throw ValidationError("Pauli-Liouville representation requires qubit subsystems (dim 2)");
    }
  }
}

double pauli_fidelity(const QuantumChannel& channel, const std::vector<Matrix>& ops,
                      const Matrix* superop, PauliIndex index, int n) {
  const int d = channel.dim();
  const PauliMasks m = masks_of(index, n);
  if (superop != nullptr) {
    Complex acc = 0.0;
    for (int j = 0; j < d; ++j) {
      const Complex pj = basis_phase(m, j);
      const int row = static_cast<int>(j ^ m.x) + d * j;
      for (int k = 0; k < d; ++k) {
        const Complex pk = basis_phase(m, k);
        acc += std::conj(pj) * (*superop)(row, static_cast<int>(k ^ m.x) + d * k) * pk;
      }
    }
    return acc.real() / d;
  }
  double acc = 0.0;
  for (const Matrix& k : ops) {
    const Matrix pkp = pauli_right(pauli_left(index, n, k), index, n);
    acc += pkp.cwiseProduct(k.conjugate()).sum().real();
  }
  return acc / d;
}

}  // namespace

Matrix pauli_matrix(int code) {
  Matrix p(2, 2);
  switch (code) {
    case 0: p << 1, 0, 0, 1; break;
    case 1: p << 0, 1, 1, 0; break;
    case 2: p << 0, -kImag, kImag, 0; break;
    case 3: p << 1, 0, 0, -1; break;
    default: throw ValidationError("Pauli code must be in 0..3");
  }
  return p;
}

Matrix pauli_string_matrix(PauliIndex index, int n_qubits) {
  Matrix out = Matrix::Identity(1, 1);
  for (int q = 0; q < n_qubits; ++q) out = kron(out, pauli_matrix(pauli_digit(index, q, n_qubits)));
  return out;
}

int pauli_digit(PauliIndex index, int qubit, int n_qubits) {
  return static_cast<int>((index >> (2 * (n_qubits - 1 - qubit))) & 3U);
}

int pauli_weight(PauliIndex index, int n_qubits) {
  int w = 0;
  for (int q = 0; q < n_qubits; ++q) w += pauli_digit(index, q, n_qubits) != 0;
  return w;
}

std::string pauli_label(PauliIndex index, int n_qubits) {
  static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
  std::string s(n_qubits, 'I');
  for (int q = 0; q < n_qubits; ++q) s[q] = kLetters[pauli_digit(index, q, n_qubits)];
  return s;
}

PauliIndex pauli_index_from_label(std::string_view label) {
  PauliIndex index = 0;
  for (char c : label) {
    int digit = 0;
    switch (c) {
      case 'I': digit = 0; break;
      case 'X': digit = 1; break;
      case 'Y': digit = 2; break;
      case 'Z': digit = 3; break;
      default: throw ValidationError(std::string("bad Pauli letter '") + c + "'");
    }
    index = (index << 2) | static_cast<PauliIndex>(digit);
  }
  return index;
}

PauliIndex pauli_count(int n_qubits) { return PauliIndex{1} << (2 * n_qubits); }

Matrix pauli_left(PauliIndex index, int n_qubits, const Matrix& m) {
  const PauliMasks masks = masks_of(index, n_qubits);
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.rows(); ++j) {
    out.row(static_cast<Eigen::Index>(j ^ masks.x)) = basis_phase(masks, j) * m.row(j);
  }
  return out;
}

Matrix pauli_right(const Matrix& m, PauliIndex index, int n_qubits) {
  const PauliMasks masks = masks_of(index, n_qubits);
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    out.col(c) = basis_phase(masks, c) * m.col(static_cast<Eigen::Index>(c ^ masks.x));
  }
  return out;
}

std::vector<double> pauli_liouville_diagonal(const QuantumChannel& channel) {
  require_qubits(channel);
  const int n = static_cast<int>(channel.dims().size());
  const bool use_superop = channel.form() == QuantumChannel::Form::kSuperop;
  const std::vector<Matrix> ops = use_superop ? std::vector<Matrix>{} : channel.kraus_operators();
  const Matrix s = use_superop ? channel.superoperator() : Matrix{};
  std::vector<double> f(pauli_count(n));
  for (PauliIndex a = 0; a < f.size(); ++a) {
    f[a] = pauli_fidelity(channel, ops, use_superop ? &s : nullptr, a, n);
  }
  return f;
}

std::vector<double> pauli_fidelities_on(const QuantumChannel& channel,
                                        const std::vector<int>& qubits) {
  require_qubits(channel);
  const int n = static_cast<int>(channel.dims().size());
  const int m = static_cast<int>(qubits.size());
  for (int q : qubits) {
    if (q < 0 || q >= n) throw ValidationError("pauli_fidelities_on: qubit out of range");
  }
  const bool use_superop = channel.form() == QuantumChannel::Form::kSuperop;
  const std::vector<Matrix> ops = use_superop ? std::vector<Matrix>{} : channel.kraus_operators();
  const Matrix s = use_superop ? channel.superoperator() : Matrix{};
  std::vector<double> f(pauli_count(m));
  for (PauliIndex local = 0; local < f.size(); ++local) {
    PauliIndex full = 0;
    for (int i = 0; i < m; ++i) {
      const auto digit = static_cast<PauliIndex>(pauli_digit(local, i, m));
      full |= digit << (2 * (n - 1 - qubits[i]));
    }
    f[local] = pauli_fidelity(channel, ops, use_superop ? &s : nullptr, full, n);
  }
  return f;
}

void walsh_hadamard_inplace(std::vector<double>& values, int n_qubits) {
  if (values.size() != pauli_count(n_qubits)) {
    throw ValidationError("Walsh-Hadamard transform: length must be 4^n");
  }
  // Single-qubit sign kernel: +1 when the two Paulis commute.
  static constexpr int kSign[4][4] = {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
  for (int q = 0; q < n_qubits; ++q) {
    const std::size_t stride = std::size_t{1} << (2 * (n_qubits - 1 - q));
    for (std::size_t base = 0; base < values.size(); base += 4 * stride) {
      for (std::size_t off = 0; off < stride; ++off) {
        double in[4];
        for (int a = 0; a < 4; ++a) in[a] = values[base + off + a * stride];
        for (int a = 0; a < 4; ++a) {
          double acc = 0.0;
          for (int b = 0; b < 4; ++b) acc += kSign[a][b] * in[b];
          values[base + off + a * stride] = acc;
        }
      }
    }
  }
}

std::vector<double> fidelities_from_rates(std::vector<double> rates, int n_qubits) {
  walsh_hadamard_inplace(rates, n_qubits);
  return rates;
}

std::vector<double> rates_from_fidelities(std::vector<double> fidelities, int n_qubits) {
  walsh_hadamard_inplace(fidelities, n_qubits);
  const double scale = 1.0 / static_cast<double>(pauli_count(n_qubits));
  for (double& v : fidelities) v *= scale;
  return fidelities;
}

}  // namespace xtalk
