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

#ifndef FCC_LEADER_H_
#define FCC_LEADER_H_

#include <vector>

#include "fcc/controller.h"

namespace fcc {

// One stretch of constant leader acceleration.
struct LeaderSegment {
  double duration = 0.0;  // [s], > 0
  double accel = 0.0;     // [m/s^2]
};

// Piecewise-constant-acceleration leader kinematics.  The leader's
// velocity is clamped at zero: a braking segment that reaches standstill
// holds position for its remainder instead of reversing.  After the last
// segment the leader cruises at its final velocity.  Consequently v_l is
// continuous and non-negative and x_l is continuous and non-decreasing.
class LeaderProfile {
 public:
  LeaderProfile() : LeaderProfile(0.0, 0.0, {}) {}

  // Requires v0 >= 0 and every segment duration > 0.
  LeaderProfile(double x0, double v0, std::vector<LeaderSegment> segments);

  // Position and velocity at time t >= 0.
  LeaderState state_at(double t) const;

  double x0() const { return x0_; }
  double v0() const { return v0_; }
  const std::vector<LeaderSegment>& segments() const { return segments_; }

 private:
  // Closed-form piece starting at (t0, x0) with velocity v0 and constant
  // acceleration a, valid until the next piece starts.
  struct Piece {
    double t0;
    double x0;
    double v0;
    double a;
  };

  double x0_;
  double v0_;
  std::vector<LeaderSegment> segments_;
  std::vector<Piece> pieces_;  // sorted by t0; the last one is unbounded
};

}  // namespace fcc

#endif  // FCC_LEADER_H_
