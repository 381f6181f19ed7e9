// Copyright 2026 The safin Authors
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

#include "safin/core.hpp"

#include <cmath>
#include <stdexcept>

namespace safin {

Advance advance_clamped(double v, double a, double duration) {
  const double v_end = v + a * duration;
  if (v_end >= 0.0 || a >= 0.0) {
    return {v * duration + 0.5 * a * duration * duration, v_end};
  }
  // Stops inside the interval: the remaining time is spent at rest.
  return {v * v / (-2.0 * a), 0.0};
}

KinematicState step_kinematics(const KinematicState& s, const Action& a,
                               double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("step_kinematics: dt must be positive");
  }
  if (!is_finite(s) || !std::isfinite(a.ax) || !std::isfinite(a.ay)) {
    throw std::invalid_argument("step_kinematics: non-finite input");
  }
  KinematicState out;
  const Advance lon = advance_clamped(s.vx, a.ax, dt);
  out.px = s.px + lon.distance;
  out.vx = lon.speed;
  out.py = s.py + s.vy * dt + 0.5 * a.ay * dt * dt;
  out.vy = s.vy + a.ay * dt;
  return out;
}

bool collision(const KinematicState& a, const KinematicState& b,
               const Geometry& g) {
  return std::abs(a.px - b.px) < g.vehicle_length &&
         std::abs(a.py - b.py) < g.vehicle_width;
}

bool is_finite(const KinematicState& s) {
  return std::isfinite(s.px) && std::isfinite(s.py) && std::isfinite(s.vx) &&
         std::isfinite(s.vy);
}

bool is_finite(const WorldState& w) {
  return is_finite(w.ego) && is_finite(w.leader) && is_finite(w.follower) &&
         std::isfinite(w.t);
}

}  // namespace safin
