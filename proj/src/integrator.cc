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

#include "fcc/integrator.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fcc {
namespace {

// Dormand-Prince 5(4) coefficients.  The b row is the fifth-order
// solution; e = b - bhat weights the embedded fourth-order error
// estimate.  The pair is first-same-as-last: stage 7 sits at the step
// endpoint with the b weights, so its evaluation doubles as the first
// stage of the next step.
constexpr double kC2 = 1.0 / 5.0;
constexpr double kC3 = 3.0 / 10.0;
constexpr double kC4 = 4.0 / 5.0;
constexpr double kC5 = 8.0 / 9.0;

constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0,
                 kA63 = 46732.0 / 5247.0, kA64 = 49.0 / 176.0,
                 kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0,
                 kB4 = 125.0 / 192.0, kB5 = -2187.0 / 6784.0,
                 kB6 = 11.0 / 84.0;
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0,
                 kE4 = 71.0 / 1920.0, kE5 = -17253.0 / 339200.0,
                 kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

// Step-size controller settings: conservative safety factor with a
// proportional-integral exponent pair for the fifth-order error, growth
// clamped to x5 and shrinkage to x0.1 per step.
constexpr double kSafety = 0.9;
constexpr double kGrowthLimit = 5.0;
constexpr double kShrinkLimit = 0.1;
constexpr double kAlpha = 0.7 / 5.0;
constexpr double kBeta = 0.4 / 5.0;

// Guarded closed-loop right-hand side.  Failure (outside the controller
// domain, or too close to a funnel boundary for the gain to be reliable)
// stores a description in *reason and returns nullopt.
class GuardedRhs {
 public:
  GuardedRhs(const VehicleParams& plant, const ControllerConfig& cfg,
             const LeaderFn& leader, long* evals, std::string* reason)
      : plant_(plant), cfg_(cfg), leader_(leader), evals_(evals),
        reason_(reason) {}

  std::optional<Deriv> operator()(double t, double x, double v) const {
    ++*evals_;
    const ErrorSignals s = error_signals(cfg_, t, x, v, leader_(t));
    if (s.region == Region::kOutsideDomain) {
      *reason_ = describe_region(s);
      return std::nullopt;
    }
    const double limit = 1.0 - kFunnelGuard;
    double u = 0.0;
    switch (s.region) {
      case Region::kVelocityOnly: {
        if (s.tightness_v >= limit) return guard_hit(s);
        const double k_v = 1.0 / (1.0 - s.tightness_v * s.tightness_v);
        u = -k_v * s.e_v;
        break;
      }
      case Region::kDistanceOnly: {
        if (s.tightness_d >= limit) return guard_hit(s);
        const double k_d = 1.0 / (1.0 - s.tightness_d * s.tightness_d);
        u = -k_d * s.e_d;
        break;
      }
      case Region::kOverlap: {
        if (s.tightness_v >= limit || s.tightness_d >= limit) {
          return guard_hit(s);
        }
        const double k_v = 1.0 / (1.0 - s.tightness_v * s.tightness_v);
        const double k_d = 1.0 / (1.0 - s.tightness_d * s.tightness_d);
        u = std::min(-k_v * s.e_v, -k_d * s.e_d);
        break;
      }
      case Region::kOutsideDomain:
        break;  // unreachable
    }
    if (cfg_.saturation) {
      u = saturate(u, cfg_.saturation->u_min, cfg_.saturation->u_max);
    }
    return Deriv{v, accel_rhs(plant_, t, v, u)};
  }

 private:
  std::optional<Deriv> guard_hit(const ErrorSignals& s) const {
    *reason_ = "funnel guard: " + std::string(region_name(s.region)) +
               " tightness within " + std::to_string(kFunnelGuard) +
               " of the boundary (phi_v|e_v|=" + std::to_string(s.tightness_v) +
               ", phi_d|e_d|=" + std::to_string(s.tightness_d) + ")";
    return std::nullopt;
  }

  const VehicleParams& plant_;
  const ControllerConfig& cfg_;
  const LeaderFn& leader_;
  long* evals_;
  std::string* reason_;
};

SimResult fail_result(SimResult res, SimStatus status, std::string reason,
                      const SimState& last) {
  res.status = status;
  res.failure = std::move(reason);
  res.last_state = last;
  return res;
}

// The control input is continuous but has a slope break wherever the
// active feedback branch (velocity vs distance) changes hands.  A large
// step across that kink defeats the embedded error estimate, which
// compares two polynomial solutions that are both blind to it; the
// resulting silent error is then carried unattenuated through
// neutrally-stable coasting phases.  Steps that change branch are
// therefore rejected until they are no longer longer than this cap.
constexpr double kBranchSwitchStepCap = 1e-3;

// Near a funnel boundary the gain grows hyperbolically, so truncation
// errors along a boundary approach or release all carry the same sign
// and add up instead of averaging out.  While the active branch runs
// this tight, the step size is capped well below the error-limited step
// so each step's contribution is negligible; boundary-hugging phases
// are stability-limited to comparable steps anyway, so the cap is cheap
// where the closed loop spends most of its time.
constexpr double kTightPhaseTightness = 0.98;
constexpr double kTightPhaseStepCap = 1e-4;

// Which branch's command is in effect at an in-domain state: 0 for the
// velocity branch, 1 for the distance branch (the min decides in the
// overlap region; ties go to velocity).
int active_branch(const ErrorSignals& s) {
  switch (s.region) {
    case Region::kVelocityOnly:
      return 0;
    case Region::kDistanceOnly:
      return 1;
    case Region::kOverlap: {
      const double k_v = 1.0 / (1.0 - s.tightness_v * s.tightness_v);
      const double k_d = 1.0 / (1.0 - s.tightness_d * s.tightness_d);
      return -k_v * s.e_v <= -k_d * s.e_d ? 0 : 1;
    }
    case Region::kOutsideDomain:
      break;
  }
  return -1;
}

}  // namespace

const char* sim_status_name(SimStatus status) {
  switch (status) {
    case SimStatus::kOk:
      return "ok";
    case SimStatus::kInitialStateOutsideDomain:
      return "initial_state_outside_domain";
    case SimStatus::kStepCollapse:
      return "step_collapse";
  }
  return "?";
}

std::optional<Deriv> closed_loop_rhs(const VehicleParams& plant,
                                     const ControllerConfig& cfg, double t,
                                     double x, double v,
                                     const LeaderFn& leader) {
  long evals = 0;
  std::string reason;
  return GuardedRhs(plant, cfg, leader, &evals, &reason)(t, x, v);
}

SimResult simulate(const VehicleParams& plant, const ControllerConfig& cfg,
                   const IntegratorConfig& integ, const SimState& init,
                   const LeaderFn& leader, double t_end) {
  if (!(t_end >= init.t)) {
    throw std::invalid_argument("simulate: t_end must be >= init.t");
  }
  if (!(integ.output_dt > 0.0) || !(integ.h_min > 0.0) ||
      !(integ.h_max >= integ.h_min) || !(integ.rel_tol > 0.0) ||
      !(integ.abs_tol > 0.0)) {
    throw std::invalid_argument("simulate: invalid integrator configuration");
  }

  SimResult res;
  double t = init.t;
  double x = init.x;
  double v = init.v;
  res.last_state = {t, x, v};

  const ErrorSignals s0 = error_signals(cfg, t, x, v, leader(t));
  if (s0.region == Region::kOutsideDomain) {
    return fail_result(std::move(res), SimStatus::kInitialStateOutsideDomain,
                       describe_region(s0), {t, x, v});
  }

  {
    const TraceRow row0 = make_trace_row(cfg, leader(t), t, x, v);
    res.sampled.rows.push_back(row0);
    res.accepted.rows.push_back(row0);
  }
  if (t_end == init.t) {
    return res;
  }

  std::string reason;
  const GuardedRhs rhs(plant, cfg, leader, &res.rhs_evals, &reason);

  std::optional<Deriv> k1 = rhs(t, x, v);
  if (!k1) {
    return fail_result(std::move(res), SimStatus::kStepCollapse, reason,
                       {t, x, v});
  }

  const double snap = 1e-9 * std::max(1.0, std::abs(t_end));
  double h = std::clamp(integ.h_init, integ.h_min, integ.h_max);
  double err_prev = 1e-4;
  long out_index = 0;
  int branch = active_branch(s0);

  while (t < t_end) {
    double target = init.t + static_cast<double>(out_index + 1) *
                                 integ.output_dt;
    if (target >= t_end - snap) {
      target = t_end;
    }
    const double h_remaining = target - t;
    // Stretch slightly oversized remainders onto the grid point so no
    // microscopic leftover step is created.
    const bool lands_on_target = h * 1.01 >= h_remaining;
    const double h_eff = lands_on_target ? h_remaining : h;

    const double k1x = k1->dx_dt, k1v = k1->dv_dt;

    const auto reject_domain = [&]() -> bool {
      ++res.rejected_steps;
      h = std::min(h, h_eff) * 0.5;
      return h < integ.h_min;
    };

    std::optional<Deriv> k2 = rhs(t + kC2 * h_eff, x + h_eff * (kA21 * k1x),
                                  v + h_eff * (kA21 * k1v));
    if (!k2) {
      if (reject_domain()) break;
      continue;
    }
    std::optional<Deriv> k3 =
        rhs(t + kC3 * h_eff, x + h_eff * (kA31 * k1x + kA32 * k2->dx_dt),
            v + h_eff * (kA31 * k1v + kA32 * k2->dv_dt));
    if (!k3) {
      if (reject_domain()) break;
      continue;
    }
    std::optional<Deriv> k4 = rhs(
        t + kC4 * h_eff,
        x + h_eff * (kA41 * k1x + kA42 * k2->dx_dt + kA43 * k3->dx_dt),
        v + h_eff * (kA41 * k1v + kA42 * k2->dv_dt + kA43 * k3->dv_dt));
    if (!k4) {
      if (reject_domain()) break;
      continue;
    }
    std::optional<Deriv> k5 =
        rhs(t + kC5 * h_eff,
            x + h_eff * (kA51 * k1x + kA52 * k2->dx_dt + kA53 * k3->dx_dt +
                         kA54 * k4->dx_dt),
            v + h_eff * (kA51 * k1v + kA52 * k2->dv_dt + kA53 * k3->dv_dt +
                         kA54 * k4->dv_dt));
    if (!k5) {
      if (reject_domain()) break;
      continue;
    }
    std::optional<Deriv> k6 =
        rhs(t + h_eff,
            x + h_eff * (kA61 * k1x + kA62 * k2->dx_dt + kA63 * k3->dx_dt +
                         kA64 * k4->dx_dt + kA65 * k5->dx_dt),
            v + h_eff * (kA61 * k1v + kA62 * k2->dv_dt + kA63 * k3->dv_dt +
                         kA64 * k4->dv_dt + kA65 * k5->dv_dt));
    if (!k6) {
      if (reject_domain()) break;
      continue;
    }

    const double x_new =
        x + h_eff * (kB1 * k1x + kB3 * k3->dx_dt + kB4 * k4->dx_dt +
                     kB5 * k5->dx_dt + kB6 * k6->dx_dt);
    const double v_new =
        v + h_eff * (kB1 * k1v + kB3 * k3->dv_dt + kB4 * k4->dv_dt +
                     kB5 * k5->dv_dt + kB6 * k6->dv_dt);
    const double t_new = lands_on_target ? target : t + h_eff;

    std::optional<Deriv> k7 = rhs(t_new, x_new, v_new);
    if (!k7) {
      if (reject_domain()) break;
      continue;
    }

    const double err_x =
        h_eff * (kE1 * k1x + kE3 * k3->dx_dt + kE4 * k4->dx_dt +
                 kE5 * k5->dx_dt + kE6 * k6->dx_dt + kE7 * k7->dx_dt);
    const double err_v =
        h_eff * (kE1 * k1v + kE3 * k3->dv_dt + kE4 * k4->dv_dt +
                 kE5 * k5->dv_dt + kE6 * k6->dv_dt + kE7 * k7->dv_dt);
    const double sc_x =
        integ.abs_tol + integ.rel_tol * std::max(std::abs(x), std::abs(x_new));
    const double sc_v =
        integ.abs_tol + integ.rel_tol * std::max(std::abs(v), std::abs(v_new));
    const double rx = err_x / sc_x;
    const double rv = err_v / sc_v;
    const double err = std::sqrt(0.5 * (rx * rx + rv * rv));

    if (err > 1.0) {
      ++res.rejected_steps;
      reason = "error tolerance not met";
      h = h_eff * std::clamp(kSafety * std::pow(err, -0.2), kShrinkLimit, 1.0);
      if (h < integ.h_min) break;
      continue;
    }

    const ErrorSignals s_new =
        error_signals(cfg, t_new, x_new, v_new, leader(t_new));
    const int branch_new = active_branch(s_new);
    if (branch_new != branch && h_eff > kBranchSwitchStepCap) {
      ++res.rejected_steps;
      reason = "feedback branch handover";
      h = std::min(h, h_eff) * 0.5;
      if (h < integ.h_min) break;
      continue;
    }
    branch = branch_new;

    // Accept.
    t = t_new;
    x = x_new;
    v = v_new;
    k1 = k7;
    ++res.accepted_steps;
    res.last_state = {t, x, v};

    const TraceRow row = make_trace_row(cfg, leader(t), t, x, v);
    res.accepted.rows.push_back(row);
    if (lands_on_target) {
      res.sampled.rows.push_back(row);
      ++out_index;
    }

    double fac;
    if (err <= 1e-14) {
      fac = kGrowthLimit;
    } else {
      fac = kSafety * std::pow(err, -kAlpha) * std::pow(err_prev, kBeta);
      fac = std::clamp(fac, kShrinkLimit, kGrowthLimit);
    }
    h = std::min(h_eff * fac, integ.h_max);
    const double active_tightness =
        branch == 0 ? s_new.tightness_v : s_new.tightness_d;
    if (active_tightness > kTightPhaseTightness) {
      h = std::min(h, kTightPhaseStepCap);
    }
    err_prev = std::max(err, 1e-4);
  }

  if (t < t_end) {
    return fail_result(std::move(res), SimStatus::kStepCollapse,
                       "step size collapsed below h_min: " + reason,
                       {t, x, v});
  }
  return res;
}

namespace {

// One classical Runge-Kutta interval [t, t+h] with in-domain checks on
// every stage and on the endpoint.  On failure the interval is retried as
// two half intervals, up to kReferenceMaxHalvings deep.  *k1 holds the
// derivative at (t, x, v) on entry and at (t+h, x', v') on success.
bool rk4_interval(const GuardedRhs& rhs, double t, double h, int depth,
                  double* x, double* v, Deriv* k1, double* fail_t) {
  const auto step = [&]() -> bool {
    const std::optional<Deriv> k2 =
        rhs(t + 0.5 * h, *x + 0.5 * h * k1->dx_dt, *v + 0.5 * h * k1->dv_dt);
    if (!k2) return false;
    const std::optional<Deriv> k3 =
        rhs(t + 0.5 * h, *x + 0.5 * h * k2->dx_dt, *v + 0.5 * h * k2->dv_dt);
    if (!k3) return false;
    const std::optional<Deriv> k4 =
        rhs(t + h, *x + h * k3->dx_dt, *v + h * k3->dv_dt);
    if (!k4) return false;
    const double x_new =
        *x + h / 6.0 *
                 (k1->dx_dt + 2.0 * k2->dx_dt + 2.0 * k3->dx_dt + k4->dx_dt);
    const double v_new =
        *v + h / 6.0 *
                 (k1->dv_dt + 2.0 * k2->dv_dt + 2.0 * k3->dv_dt + k4->dv_dt);
    const std::optional<Deriv> k1_next = rhs(t + h, x_new, v_new);
    if (!k1_next) return false;
    *x = x_new;
    *v = v_new;
    *k1 = *k1_next;
    return true;
  };

  if (step()) {
    return true;
  }
  if (depth >= kReferenceMaxHalvings) {
    *fail_t = t;
    return false;
  }
  return rk4_interval(rhs, t, 0.5 * h, depth + 1, x, v, k1, fail_t) &&
         rk4_interval(rhs, t + 0.5 * h, 0.5 * h, depth + 1, x, v, k1, fail_t);
}

}  // namespace

SimResult reference_simulate(const VehicleParams& plant,
                             const ControllerConfig& cfg,
                             const SimState& init, const LeaderFn& leader,
                             double t_end, double dt, double output_dt) {
  if (!(dt > 0.0) || dt > 1e-3) {
    throw std::invalid_argument(
        "reference_simulate: dt must be in (0, 1e-3]");
  }
  if (!(t_end >= init.t) || !(output_dt > 0.0)) {
    throw std::invalid_argument("reference_simulate: bad horizon");
  }

  SimResult res;
  double x = init.x;
  double v = init.v;
  res.last_state = init;

  const ErrorSignals s0 =
      error_signals(cfg, init.t, x, v, leader(init.t));
  if (s0.region == Region::kOutsideDomain) {
    return fail_result(std::move(res), SimStatus::kInitialStateOutsideDomain,
                       describe_region(s0), init);
  }
  {
    const TraceRow row0 = make_trace_row(cfg, leader(init.t), init.t, x, v);
    res.sampled.rows.push_back(row0);
    res.accepted.rows.push_back(row0);
  }
  if (t_end == init.t) {
    return res;
  }

  std::string reason;
  const GuardedRhs rhs(plant, cfg, leader, &res.rhs_evals, &reason);
  Deriv k1;
  {
    const std::optional<Deriv> k1_0 = rhs(init.t, x, v);
    if (!k1_0) {
      return fail_result(std::move(res), SimStatus::kStepCollapse, reason,
                         init);
    }
    k1 = *k1_0;
  }

  const long n = std::max<long>(1, std::llround((t_end - init.t) / dt));
  const long steps_per_out = std::max<long>(1, std::llround(output_dt / dt));

  for (long k = 0; k < n; ++k) {
    const double t_k = init.t + static_cast<double>(k) * dt;
    double fail_t = t_k;
    if (!rk4_interval(rhs, t_k, dt, 0, &x, &v, &k1, &fail_t)) {
      return fail_result(
          std::move(res), SimStatus::kStepCollapse,
          "halving limit reached at t=" + std::to_string(fail_t) + ": " +
              reason,
          res.last_state);
    }
    const double t_next =
        (k + 1 == n) ? t_end : init.t + static_cast<double>(k + 1) * dt;
    ++res.accepted_steps;
    res.last_state = {t_next, x, v};
    const TraceRow row = make_trace_row(cfg, leader(t_next), t_next, x, v);
    res.accepted.rows.push_back(row);
    if ((k + 1) % steps_per_out == 0 || k + 1 == n) {
      res.sampled.rows.push_back(row);
    }
  }
  return res;
}

}  // namespace fcc
