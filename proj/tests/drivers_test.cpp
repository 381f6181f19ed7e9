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

#include <gtest/gtest.h>

#include <random>

namespace safin {
namespace {

IdmParams params(double v_des, double h_s, double t_g) {
  IdmParams p;
  p.v_des = v_des;
  p.jam_spacing = h_s;
  p.time_gap = t_g;
  return p;
}

TEST(IdmTest, FreeFlowEquilibrium) {
  EXPECT_NEAR(idm_accel(30, 1e6, 0, params(30, 6, 1.5)), 0.0, 1e-6);
}

TEST(IdmTest, StandstillEquilibrium) {
  EXPECT_NEAR(idm_accel(0, 6, 0, params(30, 6, 1.5)), 0.0, 1e-12);
}

TEST(IdmTest, DesiredGapAtDesiredSpeed) {
  EXPECT_NEAR(idm_accel(30, 51, 0, params(30, 6, 1.5)), -4.0, 1e-12);
}

TEST(IdmTest, NonPositiveGapBrakesFully) {
  EXPECT_EQ(idm_accel(10, 0, 0, params(30, 6, 1.5)), -6.0);
  EXPECT_EQ(idm_accel(10, -3, 0, params(30, 6, 1.5)), -6.0);
}

TEST(IdmTest, BoundedAndMonotone) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 2000; ++i) {
    const IdmParams p = params(10 + 30 * u(rng), 5 + 3 * u(rng), 1 + u(rng));
    const double v = 40 * u(rng);
    const double gap = 0.5 + 80 * u(rng);
    const double dv = 20 * u(rng) - 10;
    const double a = idm_accel(v, gap, dv, p);
    ASSERT_GE(a, -p.a_dec);
    ASSERT_LE(a, p.a_max);
    EXPECT_GE(idm_accel(v, gap + 1, dv, p), a);
    EXPECT_LE(idm_accel(v + 1, gap, dv, p), a);
    EXPECT_LE(idm_accel(v, gap, dv + 1, p), a);
  }
}

TEST(IdmTest, ConvergesBehindConstantSpeedPredecessor) {
  // A desired speed far above the predecessor's makes the free-road term
  // negligible, so the equilibrium gap is the desired gap.
  for (double t_g : {1.0, 1.5, 2.0}) {
    const IdmParams p = params(1e3, 6, t_g);
    const double v_pred = 25;
    double pf = 0, vf = 15, pp = 60;
    for (int k = 0; k < 600; ++k) {
      const double a = idm_accel(vf, pp - pf, vf - v_pred, p);
      const double v1 = std::max(0.0, vf + a * 0.1);
      pf += 0.5 * (vf + v1) * 0.1;
      vf = v1;
      pp += v_pred * 0.1;
    }
    EXPECT_NEAR(pp - pf, 6 + vf * t_g, 0.5) << "t_g=" << t_g;
  }
}

WorldState three_vehicles(double ego_px, double ego_vx) {
  WorldState w;
  w.follower = {0, 3.5, 30, 0};
  w.leader = {60, 3.5, 30, 0};
  w.ego = {ego_px, 0, ego_vx, 0};
  return w;
}

TEST(FollowerAccelTest, CautiousBrakesForCloseEgo) {
  IdmParams p = params(30, 6, 1.0);
  p.speed_surplus = 0;
  EXPECT_LT(follower_accel(three_vehicles(8, 30), FollowerMode::kCautious, p),
            0.0);
}

TEST(FollowerAccelTest, AggressiveIgnoresEgo) {
  const IdmParams p = params(30, 6, 1.0);
  const double far = follower_accel(three_vehicles(40, 30),
                                    FollowerMode::kAggressive, p);
  const double near = follower_accel(three_vehicles(8, 30),
                                     FollowerMode::kAggressive, p);
  EXPECT_EQ(far, near);
}

TEST(FollowerAccelTest, CautiousFreeFlowWithDistantEgo) {
  IdmParams p = params(30, 6, 1.0);
  p.speed_surplus = 5;
  WorldState w = three_vehicles(1e6, 30);
  const double a = follower_accel(w, FollowerMode::kCautious, p);
  EXPECT_GT(a, 0.0);
  // Only the free-road term is left: v_des = 35.
  EXPECT_NEAR(a, 4.0 * (1.0 - std::pow(30.0 / 35.0, 4)), 1e-6);
}

TEST(FollowerAccelTest, EgoBehindFollowerIsIgnored) {
  const IdmParams p = params(30, 6, 1.0);
  EXPECT_EQ(follower_accel(three_vehicles(-20, 30), FollowerMode::kCautious, p),
            follower_accel(three_vehicles(-20, 30), FollowerMode::kAggressive, p));
}

TEST(LeaderStepTest, Examples) {
  const LeaderProfile brake{-6.0, 40.0};
  KinematicState l{0, 3.5, 30, 0};
  EXPECT_NEAR(l.vx + leader_step(l, brake, 0.1) * 0.1, 29.4, 1e-12);
  l.vx = 0;
  EXPECT_EQ(leader_step(l, brake, 0.1), 0.0);
  l.vx = 40;
  EXPECT_EQ(leader_step(l, {4.0, 40.0}, 0.1), 0.0);
  l.vx = 39.9;
  EXPECT_NEAR(leader_step(l, {4.0, 40.0}, 0.1), 1.0, 1e-9);
}

}  // namespace
}  // namespace safin
