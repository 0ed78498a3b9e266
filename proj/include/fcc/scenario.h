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

#ifndef FCC_SCENARIO_H_
#define FCC_SCENARIO_H_

#include <optional>
#include <string>
#include <vector>

#include "fcc/controller.h"
#include "fcc/dynamics.h"
#include "fcc/funnel.h"
#include "fcc/integrator.h"
#include "fcc/leader.h"

namespace fcc {

// Serializable vehicle description; environment signals are constants
// here (scenario files cannot express time-varying slope or density; the
// library-level VehicleParams can).
struct PlantSpec {
  double m = 1300.0;
  double g = 9.81;
  double theta = 0.0;
  double rho = 1.3;
  double c_d = 0.32;
  double c_r = 0.01;
  double area = 2.4;
  double alpha = 100.0;
  double delta = 0.0;

  VehicleParams build() const;
};

// Serializable funnel description.
struct FunnelDesc {
  enum class Shape { kConstant, kExponentialBoundary };
  Shape shape = Shape::kConstant;
  double phi = 0.25;  // kConstant only
  double a = 0.0;     // kExponentialBoundary only
  double rate = 0.0;
  double floor = 0.0;

  static FunnelDesc constant(double phi);
  static FunnelDesc exponential_boundary(double a, double rate, double floor);
  FunnelSpec build() const;
};

// Serializable controller description with a constant reference velocity.
struct ControllerSpec {
  double lambda1 = 0.5;
  double lambda2 = 2.0;
  double v_ref = 36.0;
  FunnelDesc phi_v;
  FunnelDesc phi_d;
  std::optional<Saturation> saturation;

  ControllerConfig build() const;
};

// A complete simulation setup.
struct ScenarioConfig {
  std::string name;
  PlantSpec plant;
  ControllerSpec controller;
  LeaderProfile leader;
  SimState init;  // init.t is the start time, normally 0
  double t_end = 50.0;
  IntegratorConfig integ;
};

// Bundled scenarios (1, 2 or 3):
//   1: the leader slows from 30 to 25 m/s, speeds back up to a cruise a
//      few m/s below the follower's 36 m/s reference, is caught up and
//      followed, and finally accelerates to 40 m/s and pulls away.
//   2: the leader cruises at 25 m/s, is caught up and followed, then
//      brakes at -8 m/s^2 to a full stop.
//   3: the leader strongly alternates acceleration and braking
//      (+3, -4, +4, -5, +3 m/s^2) while the follower tries to keep up.
// Throws std::invalid_argument for other ids.
ScenarioConfig scenario_preset(int id);

// Returns an empty list iff the scenario is well-formed: positive
// physical parameters, consistent integrator settings, a valid leader
// profile, and an initial state inside the controller domain.  Each entry
// names the offending field.
std::vector<std::string> validate_scenario(const ScenarioConfig& config);

}  // namespace fcc

#endif  // FCC_SCENARIO_H_
