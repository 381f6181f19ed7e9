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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "safin/dataset.hpp"
#include "safin/decision.hpp"

namespace safin {
namespace {

const Limits kLim;
const Geometry kGeo;
const MpcConfig kMpc;

WorldState world(KinematicState ego, double gap_lead, double v_lead,
                 double gap_follow, double v_follow) {
  WorldState w;
  w.ego = ego;
  w.leader = {ego.px + gap_lead, kGeo.lane_width, v_lead, 0};
  w.follower = {ego.px - gap_follow, kGeo.lane_width, v_follow, 0};
  return w;
}

TEST(EncodeInputTest, RelativeFeatures) {
  const WorldState w = world({100, 1, 25, 0.5}, 20, 24, 15, 26);
  const PlannerInput in = encode_input(w);
  EXPECT_EQ(in.gap_lead, 20);
  EXPECT_EQ(in.gap_follow, 15);
  Eigen::VectorXd expected(7);
  expected << 1, 25, 0.5, 20, 24, 15, 26;
  EXPECT_EQ(in.to_vector(), expected);

  WorldState shifted = w;
  shifted.ego.px += 1000;
  shifted.leader.px += 1000;
  shifted.follower.px += 1000;
  EXPECT_EQ(encode_input(shifted).to_vector(), in.to_vector());
}

TEST(PlanMpcTest, OpenRoadCompletesLaneChange) {
  WorldState w = world({0, 0, 25, 0}, 1e6, 25, 1e6, 25);
  for (int k = 0; k < kMpc.horizon; ++k) {
    const Action a = plan_mpc(w, kMpc, kLim, kGeo);
    w.ego = step_kinematics(w.ego, a, kLim.dt);
  }
  EXPECT_GE(w.ego.py, kGeo.crossed_bound());
}

TEST(PlanMpcTest, LeaderAtMinimumGapForbidsAcceleration) {
  const WorldState w = world({0, 2.0, 25, 0}, kLim.min_gap, 25, 30, 25);
  EXPECT_LE(plan_mpc(w, kMpc, kLim, kGeo).ax, 0.0);
}

TEST(PlanMpcTest, SettledInTargetLaneHoldsLateral) {
  const WorldState w = world({0, 3.5, 25, 0}, 40, 25, 40, 25);
  EXPECT_EQ(plan_mpc(w, kMpc, kLim, kGeo).ay, 0.0);
}

TEST(PlanMpcTest, TrappedFallsBackToBraking) {
  // Overlapping the target lane with both neighbours within the minimum gap.
  const WorldState w = world({0, 2.5, 25, 0}, 4, 25, 4, 25);
  const Action a = plan_mpc(w, kMpc, kLim, kGeo);
  EXPECT_EQ(a.ax, -kLim.max_decel);
  EXPECT_EQ(a.ay, hesitate_lateral(0.0, kLim.dt, kLim.max_lateral_accel));
}

// Re-simulates one candidate (switch time, constant ax) and reports whether
// it keeps the minimum gap whenever the ego overlaps the target lane.
bool candidate_feasible(const WorldState& w, double switch_time, double ax) {
  double py = w.ego.py, vy = w.ego.vy;
  KinematicState ego = w.ego;
  double prev_ay = 0;
  for (int i = 0; i < kMpc.horizon; ++i) {
    const double tau = i * kLim.dt;
    const double ay = tau < switch_time - 1e-9
                          ? kLim.max_lateral_accel
                          : std::clamp(-vy / kLim.dt, -2.5, 2.5);
    if (i > 0 && std::abs(ay - prev_ay) > kMpc.max_lateral_accel_change + 1e-9) {
      return false;
    }
    prev_ay = ay;
    py += vy * kLim.dt + 0.5 * ay * kLim.dt * kLim.dt;
    vy += ay * kLim.dt;
    ego = step_kinematics(ego, {ax, 0}, kLim.dt);
    if (ego.vx > kMpc.speed_cap) return false;
    const double t = (i + 1) * kLim.dt;
    const double lead = w.leader.px + w.leader.vx * t;
    const double fol = w.follower.px + w.follower.vx * t;
    const bool close = std::abs(lead - ego.px) < kLim.min_gap ||
                       std::abs(ego.px - fol) < kLim.min_gap;
    if (py > kGeo.lane_width - kGeo.vehicle_width && close) return false;
  }
  return true;
}

TEST(PlanMpcTest, ChosenCandidateKeepsGap) {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 300; ++i) {
    const WorldState w = world({0, 3 * u(rng), 15 + 15 * u(rng), 2 * u(rng) - 1},
                               3 + 30 * u(rng), 15 + 15 * u(rng),
                               3 + 30 * u(rng), 15 + 15 * u(rng));
    const Action a = plan_mpc(w, kMpc, kLim, kGeo);
    ASSERT_GE(a.ax, -kLim.max_decel);
    ASSERT_LE(a.ax, kLim.max_accel);
    ASSERT_LE(std::abs(a.ay), kLim.max_lateral_accel);
    bool any_feasible = false;
    bool chosen_feasible = false;
    for (int s = 0; s <= 30; ++s) {
      for (int k = 0; k <= 20; ++k) {
        const double ax = -6 + 0.5 * k;
        if (!candidate_feasible(w, 0.1 * s, ax)) continue;
        any_feasible = true;
        const double ay = 0.1 * s > 1e-9
                              ? kLim.max_lateral_accel
                              : std::clamp(-w.ego.vy / kLim.dt, -2.5, 2.5);
        if (ax == a.ax && ay == a.ay) chosen_feasible = true;
      }
    }
    EXPECT_EQ(any_feasible, chosen_feasible) << "state " << i;
  }
}

TEST(PlanMpcTest, TranslationInvariant) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 100; ++i) {
    const WorldState w = world({0, 3 * u(rng), 15 + 15 * u(rng), 0},
                               3 + 30 * u(rng), 15 + 15 * u(rng),
                               3 + 30 * u(rng), 15 + 15 * u(rng));
    WorldState s = w;
    s.ego.px += 1024;
    s.leader.px += 1024;
    s.follower.px += 1024;
    const Action a = plan_mpc(w, kMpc, kLim, kGeo);
    const Action b = plan_mpc(s, kMpc, kLim, kGeo);
    EXPECT_EQ(a.ax, b.ax);
    EXPECT_EQ(a.ay, b.ay);
  }
}

TEST(PlanNnTest, ZeroModelsGiveClampedOffset) {
  Model lon({7, 64, 64, 1});
  Model lat({7, 64, 64, 1});
  lon.output_mean()[0] = 9.0;
  lat.output_mean()[0] = -0.5;
  const Action a = plan_nn(world({0, 1, 25, 0}, 20, 25, 20, 25), lon, lat, kLim);
  EXPECT_EQ(a.ax, kLim.max_accel);
  EXPECT_EQ(a.ay, -0.5);
}

TEST(PlanNnTest, BoundedAndContinuous) {
  Model lon = make_planner_model(1);
  Model lat = make_planner_model(2);
  lon.output_scale()[0] = 10;
  lat.output_scale()[0] = 10;
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 500; ++i) {
    const WorldState w = world({0, 3 * u(rng), 30 * u(rng), u(rng) - 0.5},
                               40 * u(rng), 30 * u(rng), 40 * u(rng),
                               30 * u(rng));
    const Action a = plan_nn(w, lon, lat, kLim);
    ASSERT_GE(a.ax, -6.0);
    ASSERT_LE(a.ax, 4.0);
    ASSERT_LE(std::abs(a.ay), 2.5);
    WorldState p = w;
    p.ego.vx += 1e-6;
    p.ego.py += 1e-6;
    const Action b = plan_nn(p, lon, lat, kLim);
    EXPECT_LT(std::abs(a.ax - b.ax), 1e-3);
    EXPECT_LT(std::abs(a.ay - b.ay), 1e-3);
  }
}

TEST(SynthDatasetTest, ReproducibleAndBounded) {
  const SimConfig cfg;
  const PlannerDataset a = synth_dataset(1, 5, cfg);
  const PlannerDataset b = synth_dataset(1, 5, cfg, 3);
  ASSERT_GT(a.x.cols(), 0);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.y, b.y);
  const PlannerDataset many = synth_dataset(20, 7, cfg, 2);
  EXPECT_EQ(many.x, synth_dataset(20, 7, cfg, 1).x);
  EXPECT_GE(many.y.row(0).minCoeff(), -6.0);
  EXPECT_LE(many.y.row(0).maxCoeff(), 4.0);
  EXPECT_LE(many.y.row(1).cwiseAbs().maxCoeff(), 2.5);
}

TEST(SplitTest, EveryStrideGoesToHeldOut) {
  Eigen::MatrixXd x(1, 10);
  Eigen::MatrixXd y(1, 10);
  for (int i = 0; i < 10; ++i) x(0, i) = y(0, i) = i;
  const Split s = split_every(x, y, 4);
  ASSERT_EQ(s.test_x.cols(), 3);
  EXPECT_EQ(s.test_x(0, 1), 4);
  EXPECT_EQ(s.train_x.cols(), 7);
  EXPECT_EQ(s.train_y(0, 0), 1);
}

}  // namespace
}  // namespace safin
