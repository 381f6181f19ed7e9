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

#include "safin/planners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "safin/decision.hpp"

namespace safin {

Eigen::VectorXd PlannerInput::to_vector() const {
  Eigen::VectorXd x(kSize);
  x << py, vx, vy, gap_lead, v_xl, gap_follow, v_xf;
  return x;
}

PlannerInput encode_input(const WorldState& w) {
  PlannerInput in;
  in.py = w.ego.py;
  in.vx = w.ego.vx;
  in.vy = w.ego.vy;
  in.gap_lead = w.leader.px - w.ego.px;
  in.v_xl = w.leader.vx;
  in.gap_follow = w.ego.px - w.follower.px;
  in.v_xf = w.follower.vx;
  return in;
}

Model make_planner_model(std::uint64_t seed) {
  return Model::glorot({PlannerInput::kSize, kHiddenWidth, kHiddenWidth, 1},
                       seed);
}

Action plan_nn(const WorldState& w, const Model& m_long, const Model& m_lat,
               const Limits& lim) {
  const Eigen::VectorXd x = encode_input(w).to_vector();
  const double ax = m_long.predict(x)[0];
  const double ay = m_lat.predict(x)[0];
  return {std::clamp(ax, -lim.max_decel, lim.max_accel),
          std::clamp(ay, -lim.max_lateral_accel, lim.max_lateral_accel)};
}

namespace {

struct LateralCandidate {
  double first_ay = 0.0;
  double cost = 0.0;
  std::uint64_t overlap = 0;  // bit i: lateral overlap after step i
  bool feasible = true;
};

struct LongitudinalCandidate {
  double ax = 0.0;
  double cost = 0.0;
  std::uint64_t too_close = 0;  // bit i: a gap below min_gap after step i
  bool feasible = true;
};

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> out;
  const int n = int(std::floor((hi - lo) / step + 1e-9));
  for (int i = 0; i <= n; ++i) out.push_back(lo + i * step);
  return out;
}

LateralCandidate rollout_lateral(const KinematicState& ego, double switch_time,
                                 const MpcConfig& cfg, const Limits& lim,
                                 const Geometry& g) {
  LateralCandidate c;
  double py = ego.py;
  double vy = ego.vy;
  double prev_ay = 0.0;
  const double a = lim.max_lateral_accel;
  const double overlap_bound = g.lane_width - g.vehicle_width;
  for (int i = 0; i < cfg.horizon; ++i) {
    const double tau = i * lim.dt;
    const double ay =
        tau < switch_time - 1e-9 ? a : hesitate_lateral(vy, lim.dt, a);
    if (i == 0) {
      c.first_ay = ay;
    } else if (std::abs(ay - prev_ay) > cfg.max_lateral_accel_change + 1e-9) {
      c.feasible = false;
    }
    prev_ay = ay;
    py += vy * lim.dt + 0.5 * ay * lim.dt * lim.dt;
    vy += ay * lim.dt;
    if (py > overlap_bound) c.overlap |= std::uint64_t{1} << i;
    const double off = py - g.lane_width;
    c.cost += cfg.effort_y * ay * ay + cfg.progress * off * off;
    if (py < g.crossed_bound()) c.cost += cfg.time;
  }
  return c;
}

LongitudinalCandidate rollout_longitudinal(const WorldState& w, double ax,
                                           const MpcConfig& cfg,
                                           const Limits& lim) {
  LongitudinalCandidate c;
  c.ax = ax;
  KinematicState ego = w.ego;
  for (int i = 0; i < cfg.horizon; ++i) {
    ego = step_kinematics(ego, {ax, 0.0}, lim.dt);
    if (ego.vx > cfg.speed_cap) c.feasible = false;
    const double tau = (i + 1) * lim.dt;
    const double leader_px = w.leader.px + w.leader.vx * tau;
    const double follower_px = w.follower.px + w.follower.vx * tau;
    if (std::abs(leader_px - ego.px) < lim.min_gap ||
        std::abs(ego.px - follower_px) < lim.min_gap) {
      c.too_close |= std::uint64_t{1} << i;
    }
    c.cost += cfg.effort_x * ax * ax;
  }
  return c;
}

}  // namespace

Action plan_mpc(const WorldState& w, const MpcConfig& cfg, const Limits& lim,
                const Geometry& g) {
  const int horizon = std::clamp(cfg.horizon, 1, 64);
  MpcConfig c = cfg;
  c.horizon = horizon;

  std::vector<LateralCandidate> lateral;
  for (double ts : grid(0.0, c.switch_time_max, c.switch_time_step)) {
    lateral.push_back(rollout_lateral(w.ego, ts, c, lim, g));
  }
  std::vector<LongitudinalCandidate> longitudinal;
  for (double ax : grid(c.ax_min, c.ax_max, c.ax_step)) {
    ax = std::clamp(ax, -lim.max_decel, lim.max_accel);
    longitudinal.push_back(rollout_longitudinal(w, ax, c, lim));
  }

  double best_cost = std::numeric_limits<double>::infinity();
  Action best{-lim.max_decel,
              hesitate_lateral(w.ego.vy, lim.dt, lim.max_lateral_accel)};
  for (const auto& lat : lateral) {
    if (!lat.feasible) continue;
    for (const auto& lon : longitudinal) {
      if (!lon.feasible || (lat.overlap & lon.too_close) != 0) continue;
      const double cost = lat.cost + lon.cost;
      if (cost < best_cost) {
        best_cost = cost;
        best = {lon.ax, lat.first_ay};
      }
    }
  }
  return best;
}

}  // namespace safin
