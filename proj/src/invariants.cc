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

#include "fcc/invariants.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fcc {
namespace {

bool margins_pass(const InvariantReport& r) {
  return r.min_safety_margin > kMarginFloor &&
         r.min_upper_margin_v > kMarginFloor &&
         r.min_upper_margin_d > kMarginFloor &&
         r.min_combined_lower > kMarginFloor && std::isfinite(r.sup_abs_u);
}

}  // namespace

InvariantReport check_invariants(const Trace& trace) {
  if (trace.rows.empty()) {
    throw std::invalid_argument("check_invariants: empty trace");
  }
  InvariantReport r;
  r.min_safety_margin = std::numeric_limits<double>::infinity();
  r.min_upper_margin_v = std::numeric_limits<double>::infinity();
  r.min_upper_margin_d = std::numeric_limits<double>::infinity();
  r.min_combined_lower = std::numeric_limits<double>::infinity();
  r.sup_abs_u = 0.0;
  r.max_u_jump_per_sample = 0.0;

  bool have_prev_u = false;
  double prev_u = 0.0;
  for (const TraceRow& row : trace.rows) {
    r.min_safety_margin =
        std::min(r.min_safety_margin, row.x_l - row.x - row.x_safe);
    r.min_upper_margin_v = std::min(r.min_upper_margin_v, row.psi_v - row.e_v);
    r.min_upper_margin_d = std::min(r.min_upper_margin_d, row.psi_d - row.e_d);
    const double lower = std::max(0.0, row.psi_v + row.e_v) +
                         std::max(0.0, row.psi_d + row.e_d);
    r.min_combined_lower = std::min(r.min_combined_lower, lower);
    r.sup_abs_u = std::max(r.sup_abs_u, std::abs(row.u));
    if (have_prev_u) {
      r.max_u_jump_per_sample =
          std::max(r.max_u_jump_per_sample, std::abs(row.u - prev_u));
    }
    prev_u = row.u;
    have_prev_u = true;
  }
  r.pass = margins_pass(r);
  return r;
}

InvariantReport check_run(const Trace& sampled, const Trace& accepted) {
  const InvariantReport rs = check_invariants(sampled);
  const InvariantReport ra = check_invariants(accepted);
  InvariantReport r;
  r.min_safety_margin = std::min(rs.min_safety_margin, ra.min_safety_margin);
  r.min_upper_margin_v =
      std::min(rs.min_upper_margin_v, ra.min_upper_margin_v);
  r.min_upper_margin_d =
      std::min(rs.min_upper_margin_d, ra.min_upper_margin_d);
  r.min_combined_lower =
      std::min(rs.min_combined_lower, ra.min_combined_lower);
  r.sup_abs_u = std::max(rs.sup_abs_u, ra.sup_abs_u);
  r.max_u_jump_per_sample = rs.max_u_jump_per_sample;
  r.pass = margins_pass(r);
  return r;
}

}  // namespace fcc
