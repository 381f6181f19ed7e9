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

#ifndef SAFIN_PLANNERS_HPP_
#define SAFIN_PLANNERS_HPP_

#include <Eigen/Dense>
#include <cstdint>

#include "safin/core.hpp"
#include "safin/mlp.hpp"

namespace safin {

using Model = Mlp<double>;

// Ego-relative planner features. Absolute longitudinal positions are folded
// into gaps so the features are translation invariant.
struct PlannerInput {
  double py = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double gap_lead = 0.0;    // leader.px - ego.px
  double v_xl = 0.0;
  double gap_follow = 0.0;  // ego.px - follower.px
  double v_xf = 0.0;

  static constexpr int kSize = 7;
  Eigen::VectorXd to_vector() const;
};

PlannerInput encode_input(const WorldState& w);

// Hidden layers of the planner networks.
inline constexpr int kHiddenWidth = 64;
Model make_planner_model(std::uint64_t seed);

// Forward pass of both planner networks, clamped to the acceleration box.
Action plan_nn(const WorldState& w, const Model& m_long, const Model& m_lat,
               const Limits& lim);

struct MpcConfig {
  int horizon = 30;
  // Lateral candidates: full lateral acceleration toward the target lane
  // until the switch time, then damping of vy.
  double switch_time_max = 3.0;
  double switch_time_step = 0.1;
  // Longitudinal candidates: constant acceleration over the horizon.
  double ax_min = -6.0;
  double ax_max = 4.0;
  double ax_step = 0.5;
  double effort_x = 1.0;
  double effort_y = 1.0;
  double progress = 2.0;
  // Charged per step spent before the ego is fully in the target lane.
  double time = 0.5;
  // Largest change of lateral acceleration between consecutive steps.
  double max_lateral_accel_change = 5.0;
  double speed_cap = 40.0;
};

// Exhaustive search over (switch time, longitudinal acceleration) pairs,
// rolled out against constant-velocity predictions of the leader and
// follower. Returns the first action of the cheapest feasible candidate, or
// full braking with lateral damping when none is feasible.
Action plan_mpc(const WorldState& w, const MpcConfig& cfg, const Limits& lim,
                const Geometry& g);

}  // namespace safin

#endif  // SAFIN_PLANNERS_HPP_
