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
#include <numbers>

#include "xtalk/errors.hpp"
#include "xtalk/pulse_optimizer.hpp"

namespace xtalk {

ParamLayout ParamLayout::su2(int n_drives) {
  if (n_drives < 1) throw ValidationError("parameter layout needs at least one drive");
  ParamLayout layout;
  layout.scheme = LayoutScheme::kSu2_7n;
  layout.n_drives = n_drives;
  static const char* kNames[7] = {"x1", "y1", "phase1", "x2", "y2", "phase2", "vz"};
  for (int d = 0; d < n_drives; ++d) {
    for (const char* name : kNames) layout.names.push_back("d" + std::to_string(d) + "." + name);
  }
  return layout;
}

ParamLayout ParamLayout::cr(int n_drives) {
  if (n_drives < 1) throw ValidationError("parameter layout needs at least one drive");
  ParamLayout layout;
  layout.scheme = LayoutScheme::kCr_8n;
  layout.n_drives = n_drives;
  static const char* kNames[8] = {"cx1", "cx2", "cx3", "cy1", "cy2", "cy3", "detuning", "phase"};
  for (int d = 0; d < n_drives; ++d) {
    for (const char* name : kNames) layout.names.push_back("d" + std::to_string(d) + "." + name);
  }
  return layout;
}

double calibrate_pi2(const GaussianDrag& shape) {
  const double area = shape.shape_area();
  if (!(area > 0.0)) throw ValidationError("pulse shape has no area");
  return 0.5 * std::numbers::pi / area;
}

double calibrate_pi2(const Hanning& shape) {
  if (!(shape.t_gate > 0.0)) throw ValidationError("Hanning window needs a positive duration");
  // Each window term integrates to t_gate.
  return 0.5 * std::numbers::pi / shape.t_gate;
}

GaussianDrag default_pi2_pulse(double t_gate, double anharmonicity_ghz) {
  GaussianDrag g;
  g.t_gate = t_gate;
  g.sigma = 0.25 * t_gate;
  g.anharmonicity = angular(anharmonicity_ghz);
  g.x_scale = calibrate_pi2(g);
  g.y_scale = g.x_scale;
  g.drag_coeff = 1.0;
  return g;
}

}  // namespace xtalk
