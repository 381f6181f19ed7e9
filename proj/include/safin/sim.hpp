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

#ifndef SAFIN_SIM_HPP_
#define SAFIN_SIM_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "safin/core.hpp"
#include "safin/decision.hpp"
#include "safin/drivers.hpp"
#include "safin/planners.hpp"
#include "safin/safety.hpp"

namespace safin {

enum class PlannerKind { kMpc, kNnOnly, kSafIn };
enum class AssessMode { kLearned, kOracle, kAlwaysAggressive };

const char* to_string(PlannerKind k);
const char* to_string(AssessMode m);
std::optional<PlannerKind> parse_planner(const std::string& s);
std::optional<AssessMode> parse_assess(const std::string& s);

struct SimConfig {
  Limits limits;
  Geometry geometry;
  MpcConfig mpc;
  double horizon = 10.0;
  double a_th = 0.5;
  bool record_trajectory = false;
};

// Models needed by the NN-based planners. Pointers are non-owning; the
// assessor is only consulted for AssessMode::kLearned.
struct PlannerModels {
  const Model* longitudinal = nullptr;
  const Model* lateral = nullptr;
  const Model* assessor = nullptr;
};

struct Scenario {
  WorldState initial;
  FollowerMode follower_mode = FollowerMode::kAggressive;
  IdmParams idm;
  LeaderProfile leader;
  std::uint64_t seed = 0;
};

// Ranges that scenario parameters are drawn from.
struct ExperimentClass {
  std::string name;
  double axl_min = -6.0;
  double axl_max = 4.0;
  double dp_min = 7.0;
  double dp_max = 37.0;
};

// Presets 1..4, from the easiest to the most congested setting.
ExperimentClass preset_class(int index);

// Ego at the original lane center at rest laterally, leader `dp` ahead in
// the target lane, follower 3 to 23 m behind the ego. Speeds 20 to 30 m/s.
Scenario sample_scenario(const ExperimentClass& cls, std::uint64_t seed);

struct StepRecord {
  double t = 0.0;
  KinematicState ego;
  KinematicState leader;
  KinematicState follower;
  Action action;
  std::optional<Strategy> strategy;
  std::optional<FollowerMode> assessed;
  FollowerMode true_mode = FollowerMode::kAggressive;
};

struct EpisodeResult {
  bool collided = false;
  double collision_time = 0.0;
  bool success = false;
  std::optional<double> crossing_time;
  double final_py = 0.0;
  int steps = 0;
  std::vector<StepRecord> trajectory;
};

// Produces the next (leader, follower) states given the current world.
using TrafficStep = std::function<std::pair<KinematicState, KinematicState>(
    const WorldState& w, int step)>;

// Traffic of a sampled scenario: IDM follower in its true mode and a
// constant-acceleration leader.
TrafficStep scenario_traffic(const Scenario& sc, const Limits& lim);

// Closed-loop episode: 0.1 s steps until collision or the horizon. Throws
// std::runtime_error on a non-finite state.
EpisodeResult run_episode(const WorldState& initial, FollowerMode true_mode,
                          const TrafficStep& traffic, PlannerKind planner,
                          AssessMode assess_mode, const PlannerModels& models,
                          const SimConfig& cfg);

EpisodeResult run_episode(const Scenario& sc, PlannerKind planner,
                          AssessMode assess_mode, const PlannerModels& models,
                          const SimConfig& cfg);

// Fine-step execution of `profile` from `w` against the worst case: leader
// braking at max_decel, follower at +max_accel (aggressive) or -max_decel
// (cautious). True iff no collision and the ego is back in its lane at t_yf.
bool worst_case_rollout_safe(const WorldState& w, const EvasionProfile& profile,
                             FollowerMode mode, double dt_fine,
                             const Limits& lim, const Geometry& g);

struct Metrics {
  std::int64_t count = 0;
  double success_rate = 0.0;
  double collision_rate = 0.0;
  double timeout_rate = 0.0;
  std::optional<double> mean_crossing_time;  // over successful episodes
  std::optional<double> mean_final_py;       // over collision-free episodes
};

// Order-sensitive but deterministic accumulator with compensated sums.
class MetricsAccumulator {
 public:
  void add(const EpisodeResult& r);
  void merge(const MetricsAccumulator& other);
  Metrics result() const;

 private:
  struct Sum {
    double value = 0.0;
    double carry = 0.0;
    void add(double x);
    double total() const { return value + carry; }
  };
  std::int64_t count_ = 0;
  std::int64_t successes_ = 0;
  std::int64_t collisions_ = 0;
  Sum crossing_;
  Sum final_py_;
};

Metrics aggregate(std::span<const EpisodeResult> results);

// Runs `n` sampled episodes of `cls` on up to `workers` threads. Results are
// aggregated in episode order, so the output does not depend on `workers`.
Metrics run_experiment(const ExperimentClass& cls, PlannerKind planner,
                       AssessMode assess_mode, const PlannerModels& models,
                       int n, std::uint64_t seed, int workers,
                       const SimConfig& cfg);

// Fixed scripted situation: all vehicles at 30 m/s, leader 20 m ahead of the
// follower, ego alongside the middle of the gap. From t = 2 s the follower
// accelerates at 4 m/s^2 until it is within 17 m of the leader, then eases
// off at 1.5 m/s^2 down to the leader's speed.
struct ScriptedScenario {
  WorldState initial;
  TrafficStep traffic;
  FollowerMode true_mode;
};
ScriptedScenario closing_follower_scenario(const Limits& lim);

}  // namespace safin

#endif  // SAFIN_SIM_HPP_
