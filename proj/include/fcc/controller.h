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

#ifndef FCC_CONTROLLER_H_
#define FCC_CONTROLLER_H_

#include <optional>
#include <stdexcept>
#include <string>

#include "fcc/dynamics.h"
#include "fcc/funnel.h"

namespace fcc {

// Position [m] and velocity [m/s] of the leader vehicle.
struct LeaderState {
  double x_l = 0.0;
  double v_l = 0.0;
};

// Symmetric-ish clamp bounds for the commanded force, u_min < 0 < u_max.
struct Saturation {
  double u_min = 0.0;
  double u_max = 0.0;
};

// Which feedback branch is active at a given state.
//
//   kVelocityOnly:  the gap exceeds the safety distance by at least two
//                   funnel widths, so only the velocity error is fed back.
//   kDistanceOnly:  the velocity is at least one funnel width below the
//                   reference, so only the distance error is fed back.
//   kOverlap:       both errors are inside their funnels; the smaller
//                   (most cautious) of the two branch commands is used.
//   kOutsideDomain: none of the above; the control law is undefined.
enum class Region { kVelocityOnly, kDistanceOnly, kOverlap, kOutsideDomain };

// Returns "V", "D", "VD" or "outside".
const char* region_name(Region region);

// The control law was evaluated at a state where it is undefined.
struct OutsideDomainError : std::domain_error {
  explicit OutsideDomainError(const std::string& what)
      : std::domain_error(what) {}
};

// Cruise-controller parameters.  The safety distance is the velocity-
// dependent lambda1*v + lambda2; the distance error additionally books the
// distance-funnel boundary so that gap > safety distance is implied
// whenever the distance error is inside its funnel.  phi_d must satisfy
// phi_d(0) > 0; phi_v may vanish at t = 0 (unconstrained initial velocity
// error).
struct ControllerConfig {
  double lambda1 = 0.5;  // time-headway coefficient [s]
  double lambda2 = 2.0;  // standstill clearance [m]
  TimeFn v_ref = constant_signal(36.0);  // desired cruise velocity [m/s]
  FunnelSpec phi_v;  // velocity-error funnel
  FunnelSpec phi_d;  // distance-error funnel
  std::optional<Saturation> saturation;  // off by default
};

// Velocity-dependent safety distance lambda1*v + lambda2 [m].
double safety_distance(const ControllerConfig& cfg, double v);

// e_v = v - v_ref(t) [m/s].
double velocity_error(const ControllerConfig& cfg, double t, double v);

// e_d = x - x_l + lambda1*v + lambda2 + psi_d(t) [m].  Negative whenever
// the gap exceeds the safety distance by more than the funnel boundary.
double distance_error(const ControllerConfig& cfg, double t, double x,
                      double v, const LeaderState& leader);

// Both errors with their funnel boundaries, membership tightness and the
// resulting region.  psi_v is +infinity where phi_v vanishes (every
// velocity error is inside the funnel there, and the distance-only branch
// is unreachable).
struct ErrorSignals {
  double e_v = 0.0;
  double e_d = 0.0;
  double psi_v = 0.0;
  double psi_d = 0.0;
  double tightness_v = 0.0;  // phi_v(t)*|e_v|, < 1 inside the funnel
  double tightness_d = 0.0;  // phi_d(t)*|e_d|
  Region region = Region::kOutsideDomain;
};

ErrorSignals error_signals(const ControllerConfig& cfg, double t, double x,
                           double v, const LeaderState& leader);

// One-line description of why a state is outside the domain (or which
// region it is in), for diagnostics.
std::string describe_region(const ErrorSignals& signals);

Region classify_region(const ControllerConfig& cfg, double t, double x,
                       double v, const LeaderState& leader);

// Commanded force and the signals it was derived from.  Gains are present
// only for the branch(es) whose funnel is active at this state.
struct ControlOutput {
  double u = 0.0;            // raw command [N]
  double u_saturated = 0.0;  // clamped command; equals u without saturation
  double e_v = 0.0;
  double e_d = 0.0;
  std::optional<double> k_v;
  std::optional<double> k_d;
  Region region = Region::kOutsideDomain;
};

// Evaluates the combined control law:
//   velocity only:  u = -k_v * e_v
//   distance only:  u = -k_d * e_d
//   overlap:        u = min(-k_v * e_v, -k_d * e_d)
// Returns nullopt when the state is outside the domain.  Near every
// region seam the inactive branch command diverges to +infinity, so the
// min hands over continuously between branches.
std::optional<ControlOutput> try_control(const ControllerConfig& cfg, double t,
                                         double x, double v,
                                         const LeaderState& leader);

// As try_control, but throws OutsideDomainError instead of returning
// nullopt.
ControlOutput control(const ControllerConfig& cfg, double t, double x,
                      double v, const LeaderState& leader);

// clamp(u, u_min, u_max).
double saturate(double u, double u_min, double u_max);

}  // namespace fcc

#endif  // FCC_CONTROLLER_H_
