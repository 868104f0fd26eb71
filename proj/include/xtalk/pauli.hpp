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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "xtalk/linalg.hpp"

namespace xtalk {

/// Pauli strings are indexed in (I, X, Y, Z)^n lexicographic order with
/// qubit 0 as the most significant base-4 digit. Single-qubit codes are
/// 0 = I, 1 = X, 2 = Y, 3 = Z.
using PauliIndex = std::uint64_t;

Matrix pauli_matrix(int code);
Matrix pauli_string_matrix(PauliIndex index, int n_qubits);
int pauli_digit(PauliIndex index, int qubit, int n_qubits);
int pauli_weight(PauliIndex index, int n_qubits);
std::string pauli_label(PauliIndex index, int n_qubits);
PauliIndex pauli_index_from_label(std::string_view label);
PauliIndex pauli_count(int n_qubits);

/// P * m and m * P for an n-qubit Pauli string, O(d^2).
Matrix pauli_left(PauliIndex index, int n_qubits, const Matrix& m);
Matrix pauli_right(const Matrix& m, PauliIndex index, int n_qubits);

/// f_a = tr(P_a E(P_a)) / 2^n for every Pauli string. Requires all subsystem
/// dimensions to equal 2.
std::vector<double> pauli_liouville_diagonal(const QuantumChannel& channel);

/// Pauli fidelities of the strings that act as identity outside `qubits`,
/// indexed lexicographically over `qubits` in the given order.
std::vector<double> pauli_fidelities_on(const QuantumChannel& channel,
                                        const std::vector<int>& qubits);

/// In-place product with the symplectic sign matrix W (W_ab = +1 when P_a and
/// P_b commute, -1 otherwise). W * W = 4^n * identity.
void walsh_hadamard_inplace(std::vector<double>& values, int n_qubits);
/// f = W p
std::vector<double> fidelities_from_rates(std::vector<double> rates, int n_qubits);
/// p = W f / 4^n
std::vector<double> rates_from_fidelities(std::vector<double> fidelities, int n_qubits);

}  // namespace xtalk
