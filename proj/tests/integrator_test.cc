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

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fcc/invariants.h"
#include "fcc/scenario.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace fcc {
namespace {

using ::testing::HasSubstr;

struct Loop {
  VehicleParams plant;
  ControllerConfig cfg;
  LeaderFn leader;
  SimState init;
  IntegratorConfig integ;
  double t_end = 0.0;
};

Loop preset_loop(int id) {
  const ScenarioConfig sc = scenario_preset(id);
  const LeaderProfile profile = sc.leader;
  return Loop{sc.plant.build(), sc.controller.build(),
              [profile](double t) { return profile.state_at(t); }, sc.init,
              sc.integ, sc.t_end};
}

// Plant with aero drag, rolling friction and road slope all switched
// off: with v = v_ref the closed loop is frozen at u = 0.
Loop frozen_loop() {
  ScenarioConfig sc = scenario_preset(1);
  sc.plant.rho = 0.0;
  sc.plant.c_r = 0.0;
  sc.plant.theta = 0.0;
  return Loop{sc.plant.build(), sc.controller.build(),
              [](double) { return LeaderState{1.0e6, 0.0}; },
              SimState{0.0, 0.0, 36.0}, sc.integ, 10.0};
}

TEST(ClosedLoopRhsTest, PositionDerivativeIsVelocity) {
  const Loop loop = preset_loop(1);
  std::mt19937_64 rng(509);
  // Stay strictly inside the velocity funnel: |v - 36| <= 16 while the
  // boundary is above 18.6 for t in [0, 1].
  std::uniform_real_distribution<double> v_dist(20.0, 35.0);
  std::uniform_real_distribution<double> t_dist(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double t = t_dist(rng);
    const double v = v_dist(rng);
    const auto d = closed_loop_rhs(loop.plant, loop.cfg, t, 0.0, v,
                                   loop.leader);
    ASSERT_TRUE(d.has_value());
    ASSERT_EQ(d->dx_dt, v);
  }
}

TEST(ClosedLoopRhsTest, ForceFreeEquilibrium) {
  const Loop loop = frozen_loop();
  const auto d =
      closed_loop_rhs(loop.plant, loop.cfg, 0.0, 0.0, 36.0, loop.leader);
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(d->dx_dt, 36.0);
  EXPECT_EQ(d->dv_dt, 0.0);
}

TEST(ClosedLoopRhsTest, InitialStateExample) {
  // At the preset starting state the command (~145.7 N) loses to drag
  // plus rolling friction, so the vehicle momentarily decelerates.
  const Loop loop = preset_loop(1);
  const auto d =
      closed_loop_rhs(loop.plant, loop.cfg, 0.0, 0.0, 15.0, loop.leader);
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(d->dx_dt, 15.0);
  EXPECT_NEAR(d->dv_dt, -0.0724, 5e-4);
}

TEST(ClosedLoopRhsTest, EmptyOutsideDomain) {
  const Loop loop = preset_loop(1);
  EXPECT_FALSE(
      closed_loop_rhs(loop.plant, loop.cfg, 0.0, 0.0, 59.0, loop.leader)
          .has_value());
}

TEST(SimulateTest, FrozenPlantHoldsEquilibrium) {
  const Loop loop = frozen_loop();
  const SimResult r = simulate(loop.plant, loop.cfg, loop.integ, loop.init,
                               loop.leader, loop.t_end);
  ASSERT_TRUE(r.ok()) << r.failure;
  ASSERT_EQ(r.sampled.rows.size(), 1001u);
  for (size_t i = 0; i < r.sampled.rows.size(); ++i) {
    const TraceRow& row = r.sampled.rows[i];
    ASSERT_EQ(row.t, 0.01 * static_cast<double>(i));  // exact grid landing
    ASSERT_LE(std::abs(row.v - 36.0), 1e-9);
    ASSERT_LE(std::abs(row.x - 36.0 * row.t), 1e-6);
  }
  const InvariantReport rep = check_run(r.sampled, r.accepted);
  EXPECT_TRUE(rep.pass);
  // The tightest upper velocity margin is the funnel boundary at the
  // final time, since the velocity error stays pinned at zero.
  EXPECT_NEAR(rep.min_upper_margin_v, 22.5 * std::exp(-2.0) + 0.2, 1e-9);
}

TEST(SimulateTest, ReportsInitialStateOutsideDomain) {
  Loop loop = preset_loop(1);
  loop.init.v = 60.0;  // velocity error +24 above the 22.7 boundary
  const SimResult r = simulate(loop.plant, loop.cfg, loop.integ, loop.init,
                               loop.leader, loop.t_end);
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.status, SimStatus::kInitialStateOutsideDomain);
  EXPECT_FALSE(r.failure.empty());
}

TEST(SimulateTest, ZeroHorizonProducesSingleRow) {
  const Loop loop = frozen_loop();
  const SimResult r = simulate(loop.plant, loop.cfg, loop.integ, loop.init,
                               loop.leader, loop.init.t);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.sampled.rows.size(), 1u);
  EXPECT_EQ(r.accepted.rows.size(), 1u);
  EXPECT_EQ(r.sampled.rows[0].t, 0.0);
}

TEST(SimulateTest, CollapsesWhenLeaderTeleportsAway) {
  // A leader that jumps 200 m backwards at t = 1 makes every state
  // beyond that time infeasible; the step size must collapse there
  // with a diagnostic instead of hanging or crashing.
  const Loop loop = preset_loop(1);
  const LeaderFn teleporting = [](double t) {
    double x = 100.0 + 30.0 * t;
    if (t >= 1.0) x -= 200.0;
    return LeaderState{x, 30.0};
  };
  const SimResult r = simulate(loop.plant, loop.cfg, loop.integ, loop.init,
                               teleporting, 5.0);
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.status, SimStatus::kStepCollapse);
  EXPECT_THAT(r.failure, HasSubstr("collapsed"));
  EXPECT_NEAR(r.last_state.t, 1.0, 1e-3);
  EXPECT_FALSE(r.sampled.rows.empty());  // the valid prefix is kept
}

std::string row_signature(const TraceRow& row) {
  std::string s;
  for (double value : {row.t, row.x, row.v, row.x_l, row.v_l, row.x_safe,
                       row.e_v, row.e_d, row.psi_v, row.psi_d,
                       row.k_v.value_or(-1.0), row.k_d.value_or(-1.0), row.u,
                       row.u_sat}) {
    s += format_double(value);
    s += ',';
  }
  s += region_name(row.region);
  return s;
}

TEST(SimulateTest, RepeatRunsAreBitIdentical) {
  Loop loop = preset_loop(1);
  const double horizon = 10.0;
  const SimResult a = simulate(loop.plant, loop.cfg, loop.integ, loop.init,
                               loop.leader, horizon);
  const SimResult b = simulate(loop.plant, loop.cfg, loop.integ, loop.init,
                               loop.leader, horizon);
  ASSERT_TRUE(a.ok() && b.ok());
  ASSERT_EQ(a.sampled.rows.size(), b.sampled.rows.size());
  ASSERT_EQ(a.accepted.rows.size(), b.accepted.rows.size());
  for (size_t i = 0; i < a.accepted.rows.size(); ++i) {
    ASSERT_EQ(row_signature(a.accepted.rows[i]),
              row_signature(b.accepted.rows[i]))
        << "accepted row " << i;
  }
  EXPECT_EQ(a.accepted_steps, b.accepted_steps);
  EXPECT_EQ(a.rejected_steps, b.rejected_steps);
  EXPECT_EQ(a.rhs_evals, b.rhs_evals);
}

TEST(SimulateTest, AcceptedStatesStayInDomain) {
  const Loop loop = preset_loop(1);
  const SimResult r = simulate(loop.plant, loop.cfg, loop.integ, loop.init,
                               loop.leader, loop.t_end);
  ASSERT_TRUE(r.ok()) << r.failure;
  for (const TraceRow& row : r.accepted.rows) {
    ASSERT_NE(row.region, Region::kOutsideDomain) << "t = " << row.t;
    // Re-classify from the raw state: must agree with the recorded
    // region and therefore be inside the domain.
    const Region again = classify_region(loop.cfg, row.t, row.x, row.v,
                                         LeaderState{row.x_l, row.v_l});
    ASSERT_EQ(again, row.region) << "t = " << row.t;
  }
  // Sampled rows land exactly on the output grid.
  ASSERT_EQ(r.sampled.rows.size(), 5001u);
  for (size_t i = 0; i < r.sampled.rows.size(); ++i) {
    ASSERT_EQ(r.sampled.rows[i].t, 0.01 * static_cast<double>(i));
  }
}

TEST(SimulateTest, TighterTolerancesTrackTheOracleBetter) {
  const Loop loop = preset_loop(1);
  const SimResult oracle =
      reference_simulate(loop.plant, loop.cfg, loop.init, loop.leader,
                         loop.t_end, 1e-4);
  ASSERT_TRUE(oracle.ok()) << oracle.failure;
  std::vector<double> deviations;
  for (const double tol : {1e-6, 1e-8, 1e-10}) {
    IntegratorConfig integ = loop.integ;
    integ.rel_tol = tol;
    integ.abs_tol = tol;
    const SimResult run = simulate(loop.plant, loop.cfg, integ, loop.init,
                                   loop.leader, loop.t_end);
    ASSERT_TRUE(run.ok()) << run.failure;
    ASSERT_EQ(run.sampled.rows.size(), oracle.sampled.rows.size());
    double dev = 0.0;
    for (size_t i = 0; i < run.sampled.rows.size(); ++i) {
      dev = std::max(dev, std::abs(run.sampled.rows[i].x -
                                   oracle.sampled.rows[i].x));
      dev = std::max(dev, std::abs(run.sampled.rows[i].v -
                                   oracle.sampled.rows[i].v));
    }
    deviations.push_back(dev);
  }
  // Tightening by 100x must not worsen the deviation beyond factor-2
  // noise, and the loosest run must be distinguishably worse than the
  // tightest.
  EXPECT_LE(deviations[1], deviations[0] * 2.0);
  EXPECT_LE(deviations[2], deviations[1] * 2.0);
  EXPECT_LT(deviations[2], deviations[0]);
}

TEST(ReferenceSimulateTest, MatchesClosedFormOnFrozenPlant) {
  const Loop loop = frozen_loop();
  const SimResult r = reference_simulate(loop.plant, loop.cfg, loop.init,
                                         loop.leader, loop.t_end, 1e-3);
  ASSERT_TRUE(r.ok()) << r.failure;
  for (const TraceRow& row : r.sampled.rows) {
    ASSERT_LE(std::abs(row.v - 36.0), 1e-12);
    ASSERT_LE(std::abs(row.x - 36.0 * row.t), 1e-9);
  }
}

TEST(ReferenceSimulateTest, SelfConvergesOnEarlyWindow) {
  // Fourth-order self-convergence, checked on [0, 18] where the coarse
  // 1e-3 step is comfortably stable (later boundary-hugging phases
  // need the finer step).
  const Loop loop = preset_loop(1);
  const SimResult coarse = reference_simulate(loop.plant, loop.cfg, loop.init,
                                              loop.leader, 18.0, 1e-3);
  const SimResult fine = reference_simulate(loop.plant, loop.cfg, loop.init,
                                            loop.leader, 18.0, 1e-4);
  ASSERT_TRUE(coarse.ok() && fine.ok());
  ASSERT_EQ(coarse.sampled.rows.size(), fine.sampled.rows.size());
  for (size_t i = 0; i < coarse.sampled.rows.size(); ++i) {
    ASSERT_LE(std::abs(coarse.sampled.rows[i].x - fine.sampled.rows[i].x),
              1e-5);
    ASSERT_LE(std::abs(coarse.sampled.rows[i].v - fine.sampled.rows[i].v),
              1e-5);
  }
}

TEST(ReferenceSimulateTest, FullBrakeKeepsSafetyMarginEverywhere) {
  const Loop loop = preset_loop(2);
  const SimResult r = reference_simulate(loop.plant, loop.cfg, loop.init,
                                         loop.leader, loop.t_end, 1e-4);
  ASSERT_TRUE(r.ok()) << r.failure;
  const InvariantReport rep = check_run(r.sampled, r.accepted);
  EXPECT_GT(rep.min_safety_margin, 0.0);
  EXPECT_GT(rep.min_upper_margin_d, 0.0);
  EXPECT_TRUE(rep.pass);
}

TEST(ReferenceSimulateTest, RejectsTooCoarseStep) {
  const Loop loop = preset_loop(1);
  EXPECT_THROW(reference_simulate(loop.plant, loop.cfg, loop.init, loop.leader,
                                  loop.t_end, 2e-3),
               std::invalid_argument);
}

}  // namespace
}  // namespace fcc
