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

#include "safin/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "safin/assessor.hpp"
#include "safin/random.hpp"

namespace safin {

const char* to_string(PlannerKind k) {
  switch (k) {
    case PlannerKind::kMpc:
      return "mpc";
    case PlannerKind::kNnOnly:
      return "nn";
    case PlannerKind::kSafIn:
      return "safin";
  }
  return "?";
}

const char* to_string(AssessMode m) {
  switch (m) {
    case AssessMode::kLearned:
      return "learned";
    case AssessMode::kOracle:
      return "oracle";
    case AssessMode::kAlwaysAggressive:
      return "always-aggressive";
  }
  return "?";
}

std::optional<PlannerKind> parse_planner(const std::string& s) {
  if (s == "mpc") return PlannerKind::kMpc;
  if (s == "nn") return PlannerKind::kNnOnly;
  if (s == "safin") return PlannerKind::kSafIn;
  return std::nullopt;
}

std::optional<AssessMode> parse_assess(const std::string& s) {
  if (s == "learned") return AssessMode::kLearned;
  if (s == "oracle") return AssessMode::kOracle;
  if (s == "always-aggressive") return AssessMode::kAlwaysAggressive;
  return std::nullopt;
}

ExperimentClass preset_class(int index) {
  switch (index) {
    case 1:
      return {"1", -6.0, 4.0, 7.0, 37.0};
    case 2:
      return {"2", -6.0, 0.0, 7.0, 37.0};
    case 3:
      return {"3", -6.0, 4.0, 7.0, 17.0};
    case 4:
      return {"4", -6.0, 0.0, 7.0, 17.0};
    default:
      throw std::invalid_argument("preset_class: index must be 1..4");
  }
}

Scenario sample_scenario(const ExperimentClass& cls, std::uint64_t seed) {
  Rng rng(seed);
  const Geometry g;
  Scenario sc;
  sc.seed = seed;
  WorldState& w = sc.initial;
  w.ego = {0.0, 0.0, uniform(rng, 20.0, 30.0), 0.0};
  w.leader = {uniform(rng, cls.dp_min, cls.dp_max), g.lane_width,
              uniform(rng, 20.0, 30.0), 0.0};
  w.follower = {-uniform(rng, 3.0, 23.0), g.lane_width,
                uniform(rng, 20.0, 30.0), 0.0};
  sc.leader.a_xl = uniform(rng, cls.axl_min, cls.axl_max);
  sc.idm.jam_spacing = uniform(rng, 5.0, 8.0);
  sc.idm.time_gap = uniform(rng, 1.0, 2.0);
  sc.idm.speed_surplus = uniform(rng, 0.0, 5.0);
  sc.follower_mode =
      coin(rng) ? FollowerMode::kAggressive : FollowerMode::kCautious;
  return sc;
}

TrafficStep scenario_traffic(const Scenario& sc, const Limits& lim) {
  return [sc, lim](const WorldState& w, int) {
    const double a_f = follower_accel(w, sc.follower_mode, sc.idm);
    const double a_l = leader_step(w.leader, sc.leader, lim.dt);
    return std::make_pair(step_kinematics(w.leader, {a_l, 0.0}, lim.dt),
                          step_kinematics(w.follower, {a_f, 0.0}, lim.dt));
  };
}

namespace {

void require(const Model* m, const char* what) {
  if (m == nullptr) {
    throw std::invalid_argument(std::string("run_episode: missing ") + what +
                                " model");
  }
}

}  // namespace

EpisodeResult run_episode(const WorldState& initial, FollowerMode true_mode,
                          const TrafficStep& traffic, PlannerKind planner,
                          AssessMode assess_mode, const PlannerModels& models,
                          const SimConfig& cfg) {
  const Limits& lim = cfg.limits;
  const Geometry& g = cfg.geometry;
  if (planner != PlannerKind::kMpc) {
    require(models.longitudinal, "longitudinal");
    require(models.lateral, "lateral");
  }
  if (planner == PlannerKind::kSafIn && assess_mode == AssessMode::kLearned) {
    require(models.assessor, "assessor");
  }

  EpisodeResult result;
  const int steps = int(std::lround(cfg.horizon / lim.dt));
  WorldState w = initial;
  DecisionState ds = initial_decision_state(initial.t);
  double prev_follower_vx = w.follower.vx;

  for (int k = 0; k < steps; ++k) {
    Action act;
    std::optional<Strategy> strategy;
    std::optional<FollowerMode> assessed;
    switch (planner) {
      case PlannerKind::kMpc:
        act = plan_mpc(w, cfg.mpc, lim, g);
        break;
      case PlannerKind::kNnOnly:
        act = plan_nn(w, *models.longitudinal, *models.lateral, lim);
        break;
      case PlannerKind::kSafIn: {
        const Action nn = plan_nn(w, *models.longitudinal, *models.lateral, lim);
        FollowerMode mode = FollowerMode::kAggressive;
        if (assess_mode == AssessMode::kOracle) {
          mode = true_mode;
        } else if (assess_mode == AssessMode::kLearned && k > 0) {
          const double a_obs = (w.follower.vx - prev_follower_vx) / lim.dt;
          mode = assess(w, a_obs, *models.assessor, cfg.a_th);
        }
        assessed = mode;
        const Decision d = decide(w, ds, nn, mode, lim, g);
        ds = d.state;
        act = d.action;
        strategy = d.strategy;
        break;
      }
    }

    const auto [leader, follower] = traffic(w, k);
    WorldState next;
    next.ego = step_kinematics(w.ego, act, lim.dt);
    next.leader = leader;
    next.follower = follower;
    next.t = initial.t + (k + 1) * lim.dt;
    if (!is_finite(next)) {
      throw std::runtime_error("run_episode: non-finite state at t=" +
                               std::to_string(next.t));
    }
    prev_follower_vx = w.follower.vx;
    w = next;
    result.steps = k + 1;

    if (cfg.record_trajectory) {
      result.trajectory.push_back(
          {w.t, w.ego, w.leader, w.follower, act, strategy, assessed, true_mode});
    }
    if (collision(w.ego, w.leader, g) || collision(w.ego, w.follower, g)) {
      result.collided = true;
      result.collision_time = w.t;
      break;
    }
    if (!result.crossing_time && w.ego.py >= g.crossed_bound()) {
      result.crossing_time = w.t - initial.t;
    }
  }
  result.final_py = w.ego.py;
  result.success = !result.collided && w.ego.py >= g.crossed_bound();
  return result;
}

EpisodeResult run_episode(const Scenario& sc, PlannerKind planner,
                          AssessMode assess_mode, const PlannerModels& models,
                          const SimConfig& cfg) {
  return run_episode(sc.initial, sc.follower_mode,
                     scenario_traffic(sc, cfg.limits), planner, assess_mode,
                     models, cfg);
}

bool worst_case_rollout_safe(const WorldState& w, const EvasionProfile& profile,
                             FollowerMode mode, double dt_fine,
                             const Limits& lim, const Geometry& g) {
  if (!(dt_fine > 0.0)) {
    throw std::invalid_argument("worst_case_rollout_safe: dt_fine <= 0");
  }
  constexpr double kLateralTol = 1e-6;
  KinematicState ego = w.ego;
  KinematicState leader = w.leader;
  KinematicState follower = w.follower;
  if (collision(ego, leader, g) || collision(ego, follower, g)) return false;
  if (profile.t_yf <= 0.0 && ego.py > g.in_lane_bound() + kLateralTol) {
    return false;
  }

  const double follower_ax =
      mode == FollowerMode::kAggressive ? lim.max_accel : -lim.max_decel;
  const double t_end = profile.t_yf + dt_fine;
  const double breaks[] = {profile.t1, profile.t2, profile.t_yf};
  double t = 0.0;
  while (t < t_end - 1e-12) {
    double t_next = std::min(t + dt_fine, t_end);
    for (double b : breaks) {
      if (b > t + 1e-12 && b < t_next) t_next = b;
    }
    const double h = t_next - t;
    const Action act = evasion_action(profile, t, ego, lim, g);
    ego = step_kinematics(ego, act, h);
    leader = step_kinematics(leader, {-lim.max_decel, 0.0}, h);
    follower = step_kinematics(follower, {follower_ax, 0.0}, h);
    t = t_next;
    if (collision(ego, leader, g) || collision(ego, follower, g)) return false;
    if (std::abs(t - profile.t_yf) < 1e-9 &&
        ego.py > g.in_lane_bound() + kLateralTol) {
      return false;
    }
  }
  return true;
}

void MetricsAccumulator::Sum::add(double x) {
  // Neumaier's variant of Kahan summation.
  const double s = value + x;
  if (std::abs(value) >= std::abs(x)) {
    carry += (value - s) + x;
  } else {
    carry += (x - s) + value;
  }
  value = s;
}

void MetricsAccumulator::add(const EpisodeResult& r) {
  ++count_;
  if (r.collided) {
    ++collisions_;
    return;
  }
  final_py_.add(r.final_py);
  if (r.success) {
    ++successes_;
    crossing_.add(r.crossing_time.value_or(0.0));
  }
}

void MetricsAccumulator::merge(const MetricsAccumulator& other) {
  count_ += other.count_;
  successes_ += other.successes_;
  collisions_ += other.collisions_;
  crossing_.add(other.crossing_.value);
  crossing_.add(other.crossing_.carry);
  final_py_.add(other.final_py_.value);
  final_py_.add(other.final_py_.carry);
}

Metrics MetricsAccumulator::result() const {
  Metrics m;
  m.count = count_;
  if (count_ == 0) return m;
  const double n = double(count_);
  m.success_rate = double(successes_) / n;
  m.collision_rate = double(collisions_) / n;
  m.timeout_rate = double(count_ - successes_ - collisions_) / n;
  if (successes_ > 0) m.mean_crossing_time = crossing_.total() / successes_;
  if (count_ > collisions_) {
    m.mean_final_py = final_py_.total() / double(count_ - collisions_);
  }
  return m;
}

Metrics aggregate(std::span<const EpisodeResult> results) {
  MetricsAccumulator acc;
  for (const EpisodeResult& r : results) acc.add(r);
  return acc.result();
}

Metrics run_experiment(const ExperimentClass& cls, PlannerKind planner,
                       AssessMode assess_mode, const PlannerModels& models,
                       int n, std::uint64_t seed, int workers,
                       const SimConfig& cfg) {
  if (n < 0) throw std::invalid_argument("run_experiment: n < 0");
  SimConfig local = cfg;
  local.record_trajectory = false;

  std::vector<EpisodeResult> results(n);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < n; i = next++) {
      const Scenario sc = sample_scenario(cls, derive_seed(seed, i));
      results[i] = run_episode(sc, planner, assess_mode, models, local);
    }
  };
  const int threads = std::clamp(workers, 1, std::max(1, n));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(work);
  }
  return aggregate(results);
}

ScriptedScenario closing_follower_scenario(const Limits& lim) {
  const Geometry g;
  ScriptedScenario s;
  s.initial.follower = {0.0, g.lane_width, 30.0, 0.0};
  s.initial.leader = {20.0, g.lane_width, 30.0, 0.0};
  s.initial.ego = {10.0, 0.0, 30.0, 0.0};
  s.true_mode = FollowerMode::kAggressive;
  s.traffic = [lim](const WorldState& w, int) {
    constexpr double kStart = 2.0;
    constexpr double kTargetGap = 17.0;
    constexpr double kCloseAccel = 4.0;
    constexpr double kEaseDecel = 1.5;
    double a = 0.0;
    const double gap = w.leader.px - w.follower.px;
    const double dv = w.leader.vx - w.follower.vx;
    if (w.t >= kStart - 1e-9) {
      if (gap > kTargetGap) {
        a = kCloseAccel;
      } else {
        a = std::max(-kEaseDecel, std::min(dv / lim.dt, kCloseAccel));
      }
    }
    return std::make_pair(step_kinematics(w.leader, {0.0, 0.0}, lim.dt),
                          step_kinematics(w.follower, {a, 0.0}, lim.dt));
  };
  return s;
}

}  // namespace safin
