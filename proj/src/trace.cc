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

#include "fcc/trace.h"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace fcc {
namespace {

double parse_double(std::string_view field, const char* what) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw std::runtime_error(std::string("trace: bad number in column ") +
                             what);
  }
  return value;
}

std::optional<double> parse_optional(std::string_view field,
                                     const char* what) {
  if (field.empty()) {
    return std::nullopt;
  }
  return parse_double(field, what);
}

Region parse_region(std::string_view field) {
  if (field == "V") return Region::kVelocityOnly;
  if (field == "D") return Region::kDistanceOnly;
  if (field == "VD") return Region::kOverlap;
  throw std::runtime_error("trace: bad region code");
}

}  // namespace

TraceRow make_trace_row(const ControllerConfig& cfg, const LeaderState& leader,
                        double t, double x, double v) {
  const ControlOutput out = control(cfg, t, x, v, leader);
  const ErrorSignals s = error_signals(cfg, t, x, v, leader);
  TraceRow row;
  row.t = t;
  row.x = x;
  row.v = v;
  row.x_l = leader.x_l;
  row.v_l = leader.v_l;
  row.x_safe = safety_distance(cfg, v);
  row.e_v = s.e_v;
  row.e_d = s.e_d;
  row.psi_v = s.psi_v;
  row.psi_d = s.psi_d;
  row.k_v = out.k_v;
  row.k_d = out.k_d;
  row.u = out.u;
  row.u_sat = out.u_saturated;
  row.region = out.region;
  return row;
}

std::string format_double(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                 std::chars_format::general, 17);
  if (ec != std::errc()) {
    throw std::runtime_error("format_double: to_chars failed");
  }
  return std::string(buffer, ptr);
}

void write_trace_csv(const Trace& trace, const std::filesystem::path& path,
                     std::string_view footer_comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open trace file for writing: " +
                             path.string());
  }
  out << kTraceHeader << '\n';
  for (const TraceRow& row : trace.rows) {
    out << format_double(row.t) << ',' << format_double(row.x) << ','
        << format_double(row.v) << ',' << format_double(row.x_l) << ','
        << format_double(row.v_l) << ',' << format_double(row.x_safe) << ','
        << format_double(row.e_v) << ',' << format_double(row.e_d) << ','
        << format_double(row.psi_v) << ',' << format_double(row.psi_d) << ',';
    if (row.k_v) {
      out << format_double(*row.k_v);
    }
    out << ',';
    if (row.k_d) {
      out << format_double(*row.k_d);
    }
    out << ',' << format_double(row.u) << ',' << format_double(row.u_sat)
        << ',' << region_name(row.region) << '\n';
  }
  if (!footer_comment.empty()) {
    out << "# " << footer_comment << '\n';
  }
  if (!out) {
    throw std::runtime_error("failed writing trace file: " + path.string());
  }
}

Trace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open trace file: " + path.string());
  }
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw std::runtime_error("trace: missing or unexpected header in " +
                             path.string());
  }
  Trace trace;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') {
      continue;
    }
    std::vector<std::string_view> fields;
    std::string_view rest = line;
    while (true) {
      const size_t comma = rest.find(',');
      if (comma == std::string_view::npos) {
        fields.push_back(rest);
        break;
      }
      fields.push_back(rest.substr(0, comma));
      rest = rest.substr(comma + 1);
    }
    if (fields.size() != 15) {
      throw std::runtime_error("trace: wrong field count in " +
                               path.string());
    }
    TraceRow row;
    row.t = parse_double(fields[0], "t");
    row.x = parse_double(fields[1], "x");
    row.v = parse_double(fields[2], "v");
    row.x_l = parse_double(fields[3], "x_l");
    row.v_l = parse_double(fields[4], "v_l");
    row.x_safe = parse_double(fields[5], "x_safe");
    row.e_v = parse_double(fields[6], "e_v");
    row.e_d = parse_double(fields[7], "e_d");
    row.psi_v = parse_double(fields[8], "psi_v");
    row.psi_d = parse_double(fields[9], "psi_d");
    row.k_v = parse_optional(fields[10], "k_v");
    row.k_d = parse_optional(fields[11], "k_d");
    row.u = parse_double(fields[12], "u");
    row.u_sat = parse_double(fields[13], "u_sat");
    row.region = parse_region(fields[14]);
    trace.rows.push_back(row);
  }
  return trace;
}

}  // namespace fcc
