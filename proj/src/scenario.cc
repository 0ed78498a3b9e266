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

#include "fcc/scenario.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fcc {

VehicleParams PlantSpec::build() const {
  VehicleParams p;
  p.m = m;
  p.g = g;
  p.theta = constant_signal(theta);
  p.rho = constant_signal(rho);
  p.c_d = c_d;
  p.c_r = c_r;
  p.area = area;
  p.alpha = alpha;
  p.delta = constant_signal(delta);
  return p;
}

FunnelDesc FunnelDesc::constant(double phi) {
  FunnelDesc d;
  d.shape = Shape::kConstant;
  d.phi = phi;
  return d;
}

FunnelDesc FunnelDesc::exponential_boundary(double a, double rate,
                                            double floor) {
  FunnelDesc d;
  d.shape = Shape::kExponentialBoundary;
  d.phi = 0.0;
  d.a = a;
  d.rate = rate;
  d.floor = floor;
  return d;
}

FunnelSpec FunnelDesc::build() const {
  switch (shape) {
    case Shape::kConstant:
      return FunnelSpec::constant(phi);
    case Shape::kExponentialBoundary:
      return FunnelSpec::exponential_boundary(a, rate, floor);
  }
  throw std::logic_error("FunnelDesc: bad shape");
}

ControllerConfig ControllerSpec::build() const {
  ControllerConfig cfg;
  cfg.lambda1 = lambda1;
  cfg.lambda2 = lambda2;
  cfg.v_ref = constant_signal(v_ref);
  cfg.phi_v = phi_v.build();
  cfg.phi_d = phi_d.build();
  cfg.saturation = saturation;
  return cfg;
}

namespace {

ScenarioConfig preset_base() {
  ScenarioConfig c;
  c.plant = PlantSpec{};  // defaults are the bundled vehicle
  c.controller.lambda1 = 0.5;
  c.controller.lambda2 = 2.0;
  c.controller.v_ref = 36.0;
  // Velocity funnel: wide open at the start (boundary 22.7 m/s) and
  // tightening to 0.2 m/s; distance funnel: constant 4 m boundary.
  c.controller.phi_v = FunnelDesc::exponential_boundary(22.5, 0.2, 0.2);
  c.controller.phi_d = FunnelDesc::constant(0.25);
  c.init = SimState{0.0, 0.0, 15.0};
  c.t_end = 50.0;
  c.integ = IntegratorConfig{};
  return c;
}

}  // namespace

ScenarioConfig scenario_preset(int id) {
  ScenarioConfig c = preset_base();
  switch (id) {
    case 1:
      // Catch-up and follow.  The leader dips to 25 m/s, then settles at
      // 33 m/s so the follower closes in slowly (under 3 m/s of closing
      // speed at contact, which keeps the braking transient within a
      // +-1e4 N actuator), and finally accelerates beyond the follower's
      // 36 m/s reference.
      c.name = "scenario1";
      c.leader = LeaderProfile(100.0, 30.0,
                               {{5.0, -1.0},
                                {7.0, 0.0},
                                {4.0, 2.0},
                                {24.0, 0.0},
                                {4.0, 1.75}});
      break;
    case 2:
      // Emergency stop.  The leader cruises at 25 m/s until the follower
      // has settled behind it, then brakes at -8 m/s^2 to a standstill
      // (reached 3.125 s into the braking segment; the rest of the
      // segment holds position).
      c.name = "scenario2";
      c.leader = LeaderProfile(100.0, 25.0, {{28.0, 0.0}, {4.0, -8.0}});
      break;
    case 3:
      // Strongly varying leader: acceleration alternates through
      // +3, -4, +4, -5, +3 m/s^2 after an initial cruise, exercising
      // repeated hand-overs between the feedback branches.
      c.name = "scenario3";
      c.leader = LeaderProfile(60.0, 20.0,
                               {{5.0, 0.0},
                                {5.0, 3.0},
                                {5.0, -4.0},
                                {5.0, 4.0},
                                {5.0, -5.0},
                                {5.0, 3.0}});
      break;
    default:
      throw std::invalid_argument("scenario_preset: id must be 1, 2 or 3");
  }
  return c;
}

namespace {

void require(std::vector<std::string>* out, bool ok, const char* message) {
  if (!ok) {
    out->push_back(message);
  }
}

void validate_funnel(std::vector<std::string>* out, const FunnelDesc& d,
                     const char* field) {
  switch (d.shape) {
    case FunnelDesc::Shape::kConstant:
      if (!(d.phi > 0.0) || !std::isfinite(d.phi)) {
        out->push_back(std::string(field) + ".phi must be positive");
      }
      break;
    case FunnelDesc::Shape::kExponentialBoundary:
      if (!(d.a > 0.0) || !std::isfinite(d.a)) {
        out->push_back(std::string(field) + ".a must be positive");
      }
      if (!(d.rate >= 0.0) || !std::isfinite(d.rate)) {
        out->push_back(std::string(field) + ".rate must be non-negative");
      }
      if (!(d.floor > 0.0) || !std::isfinite(d.floor)) {
        out->push_back(std::string(field) + ".floor must be positive");
      }
      break;
  }
}

}  // namespace

std::vector<std::string> validate_scenario(const ScenarioConfig& config) {
  std::vector<std::string> v;
  require(&v, !config.name.empty(), "name must be non-empty");

  const PlantSpec& p = config.plant;
  require(&v, p.m > 0.0 && std::isfinite(p.m), "plant.m must be positive");
  require(&v, p.g > 0.0 && std::isfinite(p.g), "plant.g must be positive");
  require(&v, p.area > 0.0 && std::isfinite(p.area),
          "plant.area must be positive");
  require(&v, p.alpha > 0.0 && std::isfinite(p.alpha),
          "plant.alpha must be positive");
  require(&v, p.c_d >= 0.0 && std::isfinite(p.c_d),
          "plant.c_d must be non-negative");
  require(&v, p.c_r >= 0.0 && std::isfinite(p.c_r),
          "plant.c_r must be non-negative");
  require(&v, p.rho >= 0.0 && std::isfinite(p.rho),
          "plant.rho must be non-negative");
  require(&v,
          std::abs(p.theta) <= std::numbers::pi / 2.0 &&
              std::isfinite(p.theta),
          "plant.theta must be within [-pi/2, pi/2]");
  require(&v, std::isfinite(p.delta), "plant.delta must be finite");

  const ControllerSpec& c = config.controller;
  require(&v, c.lambda1 > 0.0 && std::isfinite(c.lambda1),
          "controller.lambda1 must be positive");
  require(&v, c.lambda2 > 0.0 && std::isfinite(c.lambda2),
          "controller.lambda2 must be positive");
  require(&v, c.v_ref >= 0.0 && std::isfinite(c.v_ref),
          "controller.v_ref must be non-negative");
  validate_funnel(&v, c.phi_v, "controller.phi_v");
  validate_funnel(&v, c.phi_d, "controller.phi_d");
  if (c.saturation) {
    require(&v,
            c.saturation->u_min < 0.0 && std::isfinite(c.saturation->u_min),
            "controller.saturation.u_min must be negative");
    require(&v,
            c.saturation->u_max > 0.0 && std::isfinite(c.saturation->u_max),
            "controller.saturation.u_max must be positive");
  }

  const IntegratorConfig& i = config.integ;
  require(&v, i.rel_tol > 0.0 && std::isfinite(i.rel_tol),
          "integ.rel_tol must be positive");
  require(&v, i.abs_tol > 0.0 && std::isfinite(i.abs_tol),
          "integ.abs_tol must be positive");
  require(&v, i.h_min > 0.0 && std::isfinite(i.h_min),
          "integ.h_min must be positive");
  require(&v, i.h_init >= i.h_min && std::isfinite(i.h_init),
          "integ.h_init must be >= h_min");
  require(&v, i.h_max >= i.h_init && std::isfinite(i.h_max),
          "integ.h_max must be >= h_init");
  require(&v, i.output_dt > 0.0 && std::isfinite(i.output_dt),
          "integ.output_dt must be positive");

  require(&v, config.t_end > config.init.t && std::isfinite(config.t_end),
          "t_end must be greater than init.t");
  require(&v, std::isfinite(config.init.x) && std::isfinite(config.init.v),
          "init must be finite");

  // The initial state must be inside the controller domain; otherwise the
  // simulation cannot even start.
  if (v.empty()) {
    const ControllerConfig cfg = c.build();
    const ErrorSignals s =
        error_signals(cfg, config.init.t, config.init.x, config.init.v,
                      config.leader.state_at(config.init.t));
    if (s.region == Region::kOutsideDomain) {
      v.push_back("init: " + describe_region(s));
    }
  }
  return v;
}

}  // namespace fcc
