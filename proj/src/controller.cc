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

#include "fcc/controller.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fcc {

const char* region_name(Region region) {
  switch (region) {
    case Region::kVelocityOnly:
      return "V";
    case Region::kDistanceOnly:
      return "D";
    case Region::kOverlap:
      return "VD";
    case Region::kOutsideDomain:
      return "outside";
  }
  return "?";
}

double safety_distance(const ControllerConfig& cfg, double v) {
  return cfg.lambda1 * v + cfg.lambda2;
}

double velocity_error(const ControllerConfig& cfg, double t, double v) {
  return v - cfg.v_ref(t);
}

double distance_error(const ControllerConfig& cfg, double t, double x,
                      double v, const LeaderState& leader) {
  return x - leader.x_l + safety_distance(cfg, v) + cfg.phi_d.boundary(t);
}

ErrorSignals error_signals(const ControllerConfig& cfg, double t, double x,
                           double v, const LeaderState& leader) {
  ErrorSignals s;
  s.e_v = velocity_error(cfg, t, v);
  s.psi_d = cfg.phi_d.boundary(t);  // phi_d(0) > 0 is a config requirement
  s.e_d = x - leader.x_l + safety_distance(cfg, v) + s.psi_d;

  const double phi_v = cfg.phi_v.phi(t);
  const double phi_d = cfg.phi_d.phi(t);
  s.psi_v = phi_v > 0.0 ? cfg.phi_v.boundary(t)
                        : std::numeric_limits<double>::infinity();
  s.tightness_v = phi_v * std::abs(s.e_v);
  s.tightness_d = phi_d * std::abs(s.e_d);

  const bool in_v = s.tightness_v < 1.0;
  const bool in_d = s.tightness_d < 1.0;
  // Branch preconditions are checked in a fixed order; they are mutually
  // exclusive, so the order only decides which one is reported first.
  if (s.e_d <= -s.psi_d && in_v) {
    s.region = Region::kVelocityOnly;
  } else if (s.e_v <= -s.psi_v && in_d) {
    s.region = Region::kDistanceOnly;
  } else if (in_v && in_d) {
    s.region = Region::kOverlap;
  } else {
    s.region = Region::kOutsideDomain;
  }
  return s;
}

std::string describe_region(const ErrorSignals& s) {
  std::ostringstream os;
  if (s.region != Region::kOutsideDomain) {
    os << "region " << region_name(s.region);
    return os.str();
  }
  os << "outside domain: ";
  if (s.tightness_v >= 1.0 && s.tightness_d >= 1.0) {
    os << "both errors outside their funnels";
  } else if (s.tightness_v >= 1.0) {
    os << "velocity error outside its funnel and e_d > -psi_d";
  } else if (s.tightness_d >= 1.0) {
    os << "distance error outside its funnel and e_v > -psi_v";
  } else {
    os << "no branch precondition holds";
  }
  os << " (e_v=" << s.e_v << ", psi_v=" << s.psi_v << ", e_d=" << s.e_d
     << ", psi_d=" << s.psi_d << ")";
  return os.str();
}

Region classify_region(const ControllerConfig& cfg, double t, double x,
                       double v, const LeaderState& leader) {
  return error_signals(cfg, t, x, v, leader).region;
}

std::optional<ControlOutput> try_control(const ControllerConfig& cfg, double t,
                                         double x, double v,
                                         const LeaderState& leader) {
  const ErrorSignals s = error_signals(cfg, t, x, v, leader);
  if (s.region == Region::kOutsideDomain) {
    return std::nullopt;
  }
  ControlOutput out;
  out.e_v = s.e_v;
  out.e_d = s.e_d;
  out.region = s.region;
  // Gains are evaluated lazily per branch: in the velocity-only region the
  // distance gain may be singular (and vice versa), so only the active
  // branch(es) touch their gain.
  switch (s.region) {
    case Region::kVelocityOnly:
      out.k_v = cfg.phi_v.gain(t, s.e_v);
      out.u = -*out.k_v * s.e_v;
      break;
    case Region::kDistanceOnly:
      out.k_d = cfg.phi_d.gain(t, s.e_d);
      out.u = -*out.k_d * s.e_d;
      break;
    case Region::kOverlap:
      out.k_v = cfg.phi_v.gain(t, s.e_v);
      out.k_d = cfg.phi_d.gain(t, s.e_d);
      out.u = std::min(-*out.k_v * s.e_v, -*out.k_d * s.e_d);
      break;
    case Region::kOutsideDomain:
      break;  // unreachable
  }
  out.u_saturated = cfg.saturation
                        ? saturate(out.u, cfg.saturation->u_min,
                                   cfg.saturation->u_max)
                        : out.u;
  return out;
}

ControlOutput control(const ControllerConfig& cfg, double t, double x,
                      double v, const LeaderState& leader) {
  std::optional<ControlOutput> out = try_control(cfg, t, x, v, leader);
  if (!out) {
    throw OutsideDomainError(
        describe_region(error_signals(cfg, t, x, v, leader)));
  }
  return *out;
}

double saturate(double u, double u_min, double u_max) {
  return std::clamp(u, u_min, u_max);
}

}  // namespace fcc
