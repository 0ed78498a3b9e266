// Copyright 2026 The FunnelCruise Authors
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

#ifndef FCC_INVARIANTS_H_
#define FCC_INVARIANTS_H_

#include "fcc/trace.h"

namespace fcc {

// Margins realized along a trace.  Positive margins mean the follower
// stayed strictly behind the safety distance and both errors stayed
// strictly inside their funnels at every checked state.
struct InvariantReport {
  // inf of x_l - x - x_safe: gap in excess of the safety distance [m].
  double min_safety_margin = 0.0;
  // inf of psi_v - e_v: clearance to the upper velocity boundary [m/s].
  double min_upper_margin_v = 0.0;
  // inf of psi_d - e_d: clearance to the upper distance boundary [m].
  double min_upper_margin_d = 0.0;
  // inf of max(0, psi_v + e_v) + max(0, psi_d + e_d): combined clearance
  // to the lower boundaries; at least one term is positive whenever the
  // state is in the controller domain.
  double min_combined_lower = 0.0;
  // sup of |u| [N].
  double sup_abs_u = 0.0;
  // max of |u(t+dt) - u(t)| between consecutive rows [N].
  double max_u_jump_per_sample = 0.0;
  bool pass = false;
};

// Margins at or below this floor count as a violation; it absorbs
// floating-point noise in genuinely positive margins.
inline constexpr double kMarginFloor = 1e-9;

// Scans a single trace.  Requires at least one row.
InvariantReport check_invariants(const Trace& trace);

// Report for a full run: margins and sup|u| are taken over both the
// sampled rows and all accepted integrator steps, while the per-sample
// jump is measured on the sampled (fixed-grid) rows only.
InvariantReport check_run(const Trace& sampled, const Trace& accepted);

}  // namespace fcc

#endif  // FCC_INVARIANTS_H_
