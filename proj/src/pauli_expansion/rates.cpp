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

#include "xtalk/errors.hpp"
#include "xtalk/log.hpp"
#include "xtalk/pauli_expansion.hpp"

namespace xtalk {

void sanitize_rates(std::vector<double>& rates) {
  double worst = 0.0;
  for (double& p : rates) {
    if (!std::isfinite(p)) throw SimulationError("non-finite Pauli rate");
    if (p < -kNegativeErrorTol) {
      std::ostringstream msg;
      msg << "Pauli rate " << p << " is substantially negative; the channel is far from CPTP";
      throw SimulationError(msg.str());
    }
    if (p < 0.0) {
      worst = std::min(worst, p);
      p = 0.0;
    }
  }
  if (worst < -kNegativeClampTol) {
    std::ostringstream msg;
    msg << "clamped negative Pauli rates (most negative " << worst << ")";
    warn(msg.str());
  }
}

std::vector<double> pauli_rates_from_channel(const QuantumChannel& channel) {
  const int n = static_cast<int>(channel.dims().size());
  std::vector<double> p = rates_from_fidelities(pauli_liouville_diagonal(channel), n);
  sanitize_rates(p);
  return p;
}

std::vector<double> marginal_rates_from_channel(const QuantumChannel& channel,
                                                const std::vector<int>& qubits) {
  // Fidelities of strings that are identity off `qubits` are exactly the
  // transform of the marginal distribution.
  std::vector<double> p =
      rates_from_fidelities(pauli_fidelities_on(channel, qubits), static_cast<int>(qubits.size()));
  sanitize_rates(p);
  return p;
}

std::vector<double> marginalize_rates(const std::vector<double>& rates, int n_qubits,
                                      const std::vector<int>& keep) {
  if (rates.size() != pauli_count(n_qubits)) {
    throw ValidationError("marginalize_rates: length must be 4^n");
  }
  const int m = static_cast<int>(keep.size());
  for (int q : keep) {
    if (q < 0 || q >= n_qubits) throw ValidationError("marginalize_rates: qubit out of range");
  }
  std::vector<double> out(pauli_count(m), 0.0);
  for (PauliIndex a = 0; a < rates.size(); ++a) {
    PauliIndex local = 0;
    for (int i = 0; i < m; ++i) local = 4 * local + pauli_digit(a, keep[i], n_qubits);
    out[local] += rates[a];
  }
  return out;
}

double fidelity_from_rates(const std::vector<double>& rates, int n_qubits,
                           const std::vector<int>& qubits) {
  if (rates.size() != pauli_count(n_qubits)) {
    throw ValidationError("fidelity_from_rates: length must be 4^n");
  }
  double phi = 0.0;
  for (PauliIndex a = 0; a < rates.size(); ++a) {
    bool identity = true;
    for (int q : qubits) identity = identity && pauli_digit(a, q, n_qubits) == 0;
    if (identity) phi += rates[a];
  }
  return phi;
}

}  // namespace xtalk
