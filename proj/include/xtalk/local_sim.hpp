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

#include <span>
#include <vector>

#include "xtalk/device.hpp"
#include "xtalk/linalg.hpp"

namespace xtalk {

struct LocalSimOptions {
  double steps_per_ns = 20.0;
  int min_steps = 64;
  /// Use the T1/T2 of each transmon (Lindblad propagation) when present.
  bool decoherence = false;
  LindbladScheme scheme = LindbladScheme::kStrangSplit;
  int levels_override = 0;

  TimeGrid grid_for(double duration) const;
};

struct ProjectedMap {
  QuantumChannel map;
  double leakage = 0.0;
};

struct SiteResult {
  QuantumChannel full;
  ProjectedMap qubit;
};

/// Propagates one transmon under its own drive and the drives bleeding in
/// through the crosstalk sparsity set, in the transmon's rotating frame.
SiteResult simulate_site(const DeviceModel& device, int site, const PulseProgram& program,
                         const CrosstalkSpec& crosstalk, const TimeGrid& grid,
                         const LocalSimOptions& options = {});

/// Restriction to span{|0>, |1>}; leakage = 1 - tr E'(1) / 2.
ProjectedMap project_to_qubit(const QuantumChannel& full);

/// |tr(U^dagger K)|^2 / 4 for a single Kraus operator, otherwise the channel
/// inner product. Trace-decreasing maps are not renormalized.
double local_process_fidelity(const Matrix& target, const QuantumChannel& actual);

double multiplicative_fidelity(std::span<const double> per_site);

struct LocalSimResult {
  std::vector<QuantumChannel> per_site_map;
  std::vector<double> per_site_fidelity;
  std::vector<double> per_site_leakage;
  double r_avg = 0.0;
  double mean_leakage = 0.0;
};

/// Simulates every site independently and scores it against targets[k]
/// (2x2, already expressed in the frame that absorbs virtual-Z offsets).
LocalSimResult simulate_local(const DeviceModel& device, const PulseProgram& program,
                              const CrosstalkSpec& crosstalk, const std::vector<Matrix>& targets,
                              const TimeGrid& grid, const LocalSimOptions& options = {});

}  // namespace xtalk
