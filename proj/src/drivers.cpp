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

#include "safin/drivers.hpp"

#include <algorithm>
#include <cmath>

namespace safin {

namespace {

constexpr double kMinDesiredSpeed = 1e-3;

}  // namespace

double idm_accel(double v, double gap, double closing_speed,
                 const IdmParams& p) {
  if (!(gap > 0.0)) return -p.a_dec;
  const double dynamic =
      v * p.time_gap + v * closing_speed / (2.0 * std::sqrt(p.a_max * p.a_dec));
  const double s_star = p.jam_spacing + std::max(0.0, dynamic);
  const double ratio = v / p.v_des;
  const double free_term = ratio * ratio * ratio * ratio;
  const double interaction = (s_star / gap) * (s_star / gap);
  const double a = p.a_max * (1.0 - free_term - interaction);
  return std::clamp(a, -p.a_dec, p.a_max);
}

double follower_accel(const WorldState& w, FollowerMode mode,
                      const IdmParams& p) {
  const bool ego_ahead = w.ego.px > w.follower.px;
  const KinematicState& pred =
      mode == FollowerMode::kCautious && ego_ahead ? w.ego : w.leader;
  IdmParams q = p;
  q.v_des = std::max(pred.vx + p.speed_surplus, kMinDesiredSpeed);
  return idm_accel(w.follower.vx, pred.px - w.follower.px,
                   w.follower.vx - pred.vx, q);
}

double leader_step(const KinematicState& leader, const LeaderProfile& prof,
                   double dt) {
  const double a = prof.a_xl;
  if (a < 0.0 && leader.vx <= 0.0) return 0.0;
  if (a > 0.0) {
    if (leader.vx >= prof.v_cap) return 0.0;
    return std::min(a, (prof.v_cap - leader.vx) / dt);
  }
  return a;
}

}  // namespace safin
