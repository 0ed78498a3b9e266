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

#ifndef FCC_DYNAMICS_H_
#define FCC_DYNAMICS_H_

#include <functional>

namespace fcc {

// Scalar signal of time, e.g. road slope or air density.
using TimeFn = std::function<double(double)>;

// Wraps a fixed value as a time signal.
TimeFn constant_signal(double value);

// Physical constants and environment signals of the follower vehicle.
// The defaults describe a typical passenger car on a flat road in still air.
struct VehicleParams {
  double m = 1300.0;  // mass [kg]
  double g = 9.81;    // gravitational acceleration [m/s^2]
  TimeFn theta = constant_signal(0.0);  // road slope [rad]
  TimeFn rho = constant_signal(1.3);    // air density [kg/m^3]
  double c_d = 0.32;    // aerodynamic drag coefficient [-]
  double c_r = 0.01;    // rolling resistance coefficient [-]
  double area = 2.4;    // frontal area [m^2]
  double alpha = 100.0;  // rolling-resistance smoothing slope [s/m]
  TimeFn delta = constant_signal(0.0);  // external disturbance force [N]
};

// Gauss error function, odd in z by construction, with absolute error
// below 1e-12 over the whole real line.
double erf_eval(double z);

// Downhill-positive gravity component m*g*sin(theta(t)) [N].
double gravity_force(const VehicleParams& p, double t);

// Aerodynamic drag 0.5*rho(t)*c_d*area*v^2 [N].  The quadratic form is
// even in v, so the force opposes forward motion only for v >= 0.
double aero_drag(const VehicleParams& p, double t, double v);

// Rolling resistance m*g*c_r*erf(alpha*v) [N].  The erf profile is a
// smooth, odd replacement for sign(v) that avoids a discontinuity at
// standstill; alpha controls how quickly it saturates.
double rolling_friction(const VehicleParams& p, double v);

// Acceleration dv/dt of the follower under commanded drive force u [N]:
// (u - gravity - drag - rolling resistance + disturbance) / m.
double accel_rhs(const VehicleParams& p, double t, double v, double u);

}  // namespace fcc

#endif  // FCC_DYNAMICS_H_
