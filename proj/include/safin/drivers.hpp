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

#ifndef SAFIN_DRIVERS_HPP_
#define SAFIN_DRIVERS_HPP_

#include "safin/core.hpp"
#include "safin/safety.hpp"

namespace safin {

struct IdmParams {
  double a_max = 4.0;
  double a_dec = 6.0;
  double v_des = 30.0;
  double jam_spacing = 6.0;  // h_s, sampled in [5, 8] m
  double time_gap = 1.5;     // t_g, sampled in [1, 2] s
  // Desired speed above the predecessor's, sampled in [0, 5] m/s.
  // follower_accel derives v_des from it.
  double speed_surplus = 2.5;
};

// Intelligent Driver Model. `gap` is center to center, `closing_speed` is
// own speed minus predecessor speed. Output clamped to [-a_dec, a_max];
// a non-positive gap yields -a_dec.
double idm_accel(double v, double gap, double closing_speed,
                 const IdmParams& p);

// Cautious followers track the ego, aggressive ones the leader. When the ego
// is not ahead of the follower the leader is tracked in either mode.
double follower_accel(const WorldState& w, FollowerMode mode,
                      const IdmParams& p);

struct LeaderProfile {
  double a_xl = 0.0;
  double v_cap = 40.0;
};

// Scripted leader acceleration for one step of `dt`, held so that the speed
// stays within [0, v_cap].
double leader_step(const KinematicState& leader, const LeaderProfile& prof,
                   double dt);

}  // namespace safin

#endif  // SAFIN_DRIVERS_HPP_
