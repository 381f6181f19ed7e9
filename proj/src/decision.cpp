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

#include "safin/decision.hpp"

#include <algorithm>
#include <cmath>

namespace safin {

namespace {

constexpr double kLatchLateralSpeed = 0.05;

}  // namespace

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::kProceed:
      return "proceed";
    case Strategy::kHesitate:
      return "hesitate";
    case Strategy::kAbort:
      return "abort";
  }
  return "?";
}

double hesitate_lateral(double vy, double dt, double a_ym) {
  return std::min(std::max(-vy / dt, -a_ym), a_ym);
}

DecisionState initial_decision_state(double t0) {
  DecisionState ds;
  ds.last_profile.created_at = t0;
  return ds;
}

WorldState worst_case_lookahead(const WorldState& w, const Action& ego_action,
                                FollowerMode mode, const Limits& lim) {
  WorldState next = w;
  next.ego = step_kinematics(w.ego, ego_action, lim.dt);
  next.leader = step_kinematics(w.leader, {-lim.max_decel, 0.0}, lim.dt);
  const double follower_ax = mode == FollowerMode::kAggressive
                                 ? lim.max_accel
                                 : -lim.max_decel;
  next.follower = step_kinematics(w.follower, {follower_ax, 0.0}, lim.dt);
  next.t = w.t + lim.dt;
  return next;
}

Decision decide(const WorldState& w, const DecisionState& ds,
                const Action& nn_action, FollowerMode mode, const Limits& lim,
                const Geometry& g) {
  return decide(w, ds, nn_action, mode, lim, g, &safe_evasion_exists);
}

Decision decide(const WorldState& w, const DecisionState& ds,
                const Action& nn_action, FollowerMode mode, const Limits& lim,
                const Geometry& g, const EvasionCheck& check) {
  auto abort = [&](DecisionState state) {
    if (!state.abort_started_at) state.abort_started_at = w.t;
    const double elapsed = w.t - state.last_profile.created_at;
    Action act = evasion_action_mean(state.last_profile, elapsed, lim.dt,
                                     w.ego, lim, g);
    return Decision{Strategy::kAbort, act, state};
  };

  DecisionState state = ds;
  if (state.abort_started_at) {
    const bool settled = w.ego.py <= g.in_lane_bound() &&
                         std::abs(w.ego.vy) <= kLatchLateralSpeed;
    if (!settled) return abort(state);
    state.abort_started_at.reset();
  }

  const Action candidates[] = {
      nn_action,
      {nn_action.ax, hesitate_lateral(w.ego.vy, lim.dt, lim.max_lateral_accel)},
  };
  const Strategy strategies[] = {Strategy::kProceed, Strategy::kHesitate};
  for (int i = 0; i < 2; ++i) {
    const WorldState next = worst_case_lookahead(w, candidates[i], mode, lim);
    if (auto profile = check(next, mode, lim, g)) {
      DecisionState out;
      out.last_profile = *profile;
      return Decision{strategies[i], candidates[i], out};
    }
  }
  return abort(state);
}

}  // namespace safin
