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

#ifndef FCC_INTEGRATOR_H_
#define FCC_INTEGRATOR_H_

#include <functional>
#include <optional>
#include <string>

#include "fcc/controller.h"
#include "fcc/dynamics.h"
#include "fcc/trace.h"

namespace fcc {

// Follower state at a point in time.
struct SimState {
  double t = 0.0;
  double x = 0.0;  // position [m]
  double v = 0.0;  // velocity [m/s]
};

// Right-hand side value of the closed loop.
struct Deriv {
  double dx_dt = 0.0;
  double dv_dt = 0.0;
};

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double h_init = 1e-3;   // first attempted step [s]
  double h_min = 1e-10;   // below this, persistent rejection is fatal
  double h_max = 1.0;     // never step further than this [s]
  double output_dt = 0.01;  // sampling grid of the output trace [s]
};

enum class SimStatus {
  kOk,
  kInitialStateOutsideDomain,
  kStepCollapse,
};

const char* sim_status_name(SimStatus status);

struct SimResult {
  SimStatus status = SimStatus::kOk;
  // States on the output grid (first row at the initial time, last row at
  // the final time).  Every sampled row is an accepted integrator state:
  // steps are shortened to land exactly on grid points, so no
  // interpolation is involved.
  Trace sampled;
  // Every accepted step, including the grid landings.
  Trace accepted;
  // On failure: what went wrong, and the last valid state.
  std::string failure;
  SimState last_state;
  long accepted_steps = 0;
  long rejected_steps = 0;
  long rhs_evals = 0;

  bool ok() const { return status == SimStatus::kOk; }
};

// Leader state as a function of time.
using LeaderFn = std::function<LeaderState(double)>;

// Closed-loop right-hand side: dx/dt = v and dv/dt from the vehicle
// dynamics under the (saturated, if configured) funnel control command.
// Returns nullopt when the state is outside the controller domain or
// within kFunnelGuard of a funnel boundary; integrators treat that as a
// step rejection rather than an error.
std::optional<Deriv> closed_loop_rhs(const VehicleParams& plant,
                                     const ControllerConfig& cfg, double t,
                                     double x, double v,
                                     const LeaderFn& leader);

// Stage states whose funnel tightness phi*|e| reaches 1 - kFunnelGuard are
// rejected, well before the gain singularity at 1.
inline constexpr double kFunnelGuard = 1e-12;

// Integrates the closed loop from init.t to t_end with an embedded
// adaptive Runge-Kutta 5(4) pair.  Steps whose stages leave the
// controller domain are rejected and retried smaller; the run aborts with
// kStepCollapse only if the step size is driven below h_min.  Identical
// inputs produce bit-identical results.
SimResult simulate(const VehicleParams& plant, const ControllerConfig& cfg,
                   const IntegratorConfig& integ, const SimState& init,
                   const LeaderFn& leader, double t_end);

// Independent fixed-step classical Runge-Kutta oracle (dt <= 1e-3).  When
// a stage leaves the controller domain the offending interval is retried
// as two half steps, recursively up to kReferenceMaxHalvings deep; if
// that is not enough the run aborts with kStepCollapse.  Rows are sampled
// every output_dt and at every full step (accepted trace).
SimResult reference_simulate(const VehicleParams& plant,
                             const ControllerConfig& cfg,
                             const SimState& init, const LeaderFn& leader,
                             double t_end, double dt,
                             double output_dt = 0.01);

inline constexpr int kReferenceMaxHalvings = 10;

}  // namespace fcc

#endif  // FCC_INTEGRATOR_H_
