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

#include "fcc/leader.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace fcc {

LeaderProfile::LeaderProfile(double x0, double v0,
                             std::vector<LeaderSegment> segments)
    : x0_(x0), v0_(v0), segments_(std::move(segments)) {
  if (!(v0 >= 0.0) || !std::isfinite(v0) || !std::isfinite(x0)) {
    throw std::invalid_argument("leader requires finite x0 and v0 >= 0");
  }
  double t = 0.0;
  double x = x0;
  double v = v0;
  for (const LeaderSegment& seg : segments_) {
    if (!(seg.duration > 0.0) || !std::isfinite(seg.duration) ||
        !std::isfinite(seg.accel)) {
      throw std::invalid_argument("leader segment requires duration > 0");
    }
    if (seg.accel < 0.0 && v > 0.0) {
      const double t_stop = v / -seg.accel;
      if (t_stop < seg.duration) {
        // Braking reaches standstill inside the segment: split it into a
        // quadratic piece followed by a hold at v = 0.
        pieces_.push_back({t, x, v, seg.accel});
        x += v * t_stop + 0.5 * seg.accel * t_stop * t_stop;
        t += t_stop;
        v = 0.0;
        pieces_.push_back({t, x, 0.0, 0.0});
        t += seg.duration - t_stop;
        continue;
      }
    }
    if (seg.accel < 0.0 && v == 0.0) {
      // Braking at standstill holds position.
      pieces_.push_back({t, x, 0.0, 0.0});
      t += seg.duration;
      continue;
    }
    pieces_.push_back({t, x, v, seg.accel});
    x += v * seg.duration + 0.5 * seg.accel * seg.duration * seg.duration;
    v = std::max(v + seg.accel * seg.duration, 0.0);
    t += seg.duration;
  }
  // Cruise at the final velocity forever after.
  pieces_.push_back({t, x, v, 0.0});
}

LeaderState LeaderProfile::state_at(double t) const {
  // Last piece whose start time is <= t (the first piece starts at 0, so
  // negative t extrapolates backwards along it).
  auto it = std::upper_bound(
      pieces_.begin(), pieces_.end(), t,
      [](double value, const Piece& piece) { return value < piece.t0; });
  if (it != pieces_.begin()) {
    --it;
  }
  const Piece& piece = *it;
  const double tau = t - piece.t0;
  LeaderState s;
  s.x_l = piece.x0 + piece.v0 * tau + 0.5 * piece.a * tau * tau;
  s.v_l = std::max(piece.v0 + piece.a * tau, 0.0);
  return s;
}

}  // namespace fcc
