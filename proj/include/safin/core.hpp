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

#ifndef SAFIN_CORE_HPP_
#define SAFIN_CORE_HPP_

namespace safin {

// Planar point-mass state. x is longitudinal, y is lateral; y = 0 is the
// center of the original lane and y = lane_width the center of the target
// lane. Positions are vehicle centers.
struct KinematicState {
  double px = 0.0;
  double py = 0.0;
  double vx = 0.0;
  double vy = 0.0;
};

struct Action {
  double ax = 0.0;
  double ay = 0.0;
};

struct Geometry {
  double lane_width = 3.5;
  double vehicle_width = 2.0;
  double vehicle_length = 5.0;

  // Largest lateral position at which the ego is entirely inside the
  // original lane.
  double in_lane_bound() const { return 0.5 * (lane_width - vehicle_width); }
  // Smallest lateral position at which the ego is entirely inside the
  // target lane.
  double crossed_bound() const { return 0.5 * (lane_width + vehicle_width); }
};

// Acceleration bounds are shared by all three vehicles.
struct Limits {
  double max_accel = 4.0;
  double max_decel = 6.0;
  double max_lateral_accel = 2.5;
  double min_gap = 6.0;
  double dt = 0.1;
};

struct WorldState {
  KinematicState ego;
  KinematicState leader;
  KinematicState follower;
  double t = 0.0;
};

// Longitudinal displacement and final speed after applying a constant
// acceleration for `duration`, with the speed clamped at zero (no reversing).
struct Advance {
  double distance = 0.0;
  double speed = 0.0;
};
Advance advance_clamped(double v, double a, double duration);

// One discrete step of the double integrator. Throws std::invalid_argument
// on non-finite input or dt <= 0.
KinematicState step_kinematics(const KinematicState& s, const Action& a,
                               double dt);

// Axis-aligned overlap of two identical vehicle rectangles. Touching edges
// do not count.
bool collision(const KinematicState& a, const KinematicState& b,
               const Geometry& g);

bool is_finite(const KinematicState& s);
bool is_finite(const WorldState& w);

}  // namespace safin

#endif  // SAFIN_CORE_HPP_
