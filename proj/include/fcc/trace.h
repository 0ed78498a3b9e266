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

#ifndef FCC_TRACE_H_
#define FCC_TRACE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fcc/controller.h"

namespace fcc {

// One recorded closed-loop state.  Gains are present only for the
// branch(es) active at that state.
struct TraceRow {
  double t = 0.0;
  double x = 0.0;
  double v = 0.0;
  double x_l = 0.0;
  double v_l = 0.0;
  double x_safe = 0.0;
  double e_v = 0.0;
  double e_d = 0.0;
  double psi_v = 0.0;
  double psi_d = 0.0;
  std::optional<double> k_v;
  std::optional<double> k_d;
  double u = 0.0;
  double u_sat = 0.0;
  Region region = Region::kOutsideDomain;
};

struct Trace {
  std::vector<TraceRow> rows;
};

// Column order of the CSV serialization.
inline constexpr std::string_view kTraceHeader =
    "t,x,v,x_l,v_l,x_safe,e_v,e_d,psi_v,psi_d,k_v,k_d,u,u_sat,region";

// Evaluates the controller at (t, x, v) against the given leader state
// and assembles a row.  Throws OutsideDomainError if the control law is
// undefined there.
TraceRow make_trace_row(const ControllerConfig& cfg, const LeaderState& leader,
                        double t, double x, double v);

// Formats a double with 17 significant digits (exact round-trip),
// independent of locale.
std::string format_double(double value);

// Writes header plus one line per row.  Absent gains serialize as empty
// fields; the region column holds V, D or VD.  A non-empty footer_comment
// is appended as a final "# ..." line (used to mark truncated traces).
void write_trace_csv(const Trace& trace, const std::filesystem::path& path,
                     std::string_view footer_comment = {});

// Inverse of write_trace_csv; "#"-prefixed lines are ignored.  Throws
// std::runtime_error on malformed input.
Trace read_trace_csv(const std::filesystem::path& path);

}  // namespace fcc

#endif  // FCC_TRACE_H_
