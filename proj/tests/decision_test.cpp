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

#include <gtest/gtest.h>

#include <random>

namespace safin {
namespace {

const Limits kLim;
const Geometry kGeo;

TEST(HesitateTest, DampsLateralVelocity) {
  EXPECT_DOUBLE_EQ(hesitate_lateral(0.1, 0.1, 2.5), -1.0);
  EXPECT_DOUBLE_EQ(hesitate_lateral(-0.5, 0.1, 2.5), 2.5);
  EXPECT_DOUBLE_EQ(hesitate_lateral(0.0, 0.1, 2.5), 0.0);
}

WorldState mid_change() {
  WorldState w;
  w.ego = {0, 1.5, 25, 0.8};
  w.leader = {30, 3.5, 25, 0};
  w.follower = {-30, 3.5, 25, 0};
  w.t = 4.0;
  return w;
}

EvasionCheck stub(bool proceed_ok, bool hesitate_ok, int* calls) {
  return [=](const WorldState&, FollowerMode, const Limits&,
             const Geometry&) -> std::optional<EvasionProfile> {
    const int call = (*calls)++;
    const bool ok = call == 0 ? proceed_ok : hesitate_ok;
    if (!ok) return std::nullopt;
    return EvasionProfile{0.1 * (call + 1), 1.0, 0.0, 4.1};
  };
}

TEST(DecideTest, ProceedKeepsPlannerAction) {
  int calls = 0;
  const Action nn{1.5, 2.0};
  const Decision d = decide(mid_change(), initial_decision_state(0), nn,
                            FollowerMode::kAggressive, kLim, kGeo,
                            stub(true, true, &calls));
  EXPECT_EQ(d.strategy, Strategy::kProceed);
  EXPECT_EQ(d.action.ax, 1.5);
  EXPECT_EQ(d.action.ay, 2.0);
  EXPECT_DOUBLE_EQ(d.state.last_profile.t1, 0.1);
  EXPECT_FALSE(d.state.abort_started_at.has_value());
}

TEST(DecideTest, HesitateDampsLateral) {
  int calls = 0;
  const Decision d = decide(mid_change(), initial_decision_state(0), {1.5, 2.0},
                            FollowerMode::kAggressive, kLim, kGeo,
                            stub(false, true, &calls));
  EXPECT_EQ(d.strategy, Strategy::kHesitate);
  EXPECT_EQ(d.action.ax, 1.5);
  EXPECT_DOUBLE_EQ(d.action.ay, hesitate_lateral(0.8, 0.1, 2.5));
  EXPECT_DOUBLE_EQ(d.state.last_profile.t1, 0.2);
}

TEST(DecideTest, AbortFollowsLastProfile) {
  int calls = 0;
  DecisionState ds;
  ds.last_profile = {0.5, 1.0, 0.0, 4.0};
  const Decision d = decide(mid_change(), ds, {1.5, 2.0},
                            FollowerMode::kAggressive, kLim, kGeo,
                            stub(false, false, &calls));
  EXPECT_EQ(d.strategy, Strategy::kAbort);
  EXPECT_DOUBLE_EQ(d.action.ay, -2.5);
  EXPECT_DOUBLE_EQ(d.action.ax, -6.0);
  ASSERT_TRUE(d.state.abort_started_at.has_value());
  EXPECT_DOUBLE_EQ(*d.state.abort_started_at, 4.0);
}

TEST(DecideTest, AbortStaysLatchedUntilSettled) {
  int calls = 0;
  DecisionState ds;
  ds.last_profile = {0.5, 1.0, 0.0, 4.0};
  ds.abort_started_at = 4.0;
  const Decision d = decide(mid_change(), ds, {1.5, 2.0},
                            FollowerMode::kAggressive, kLim, kGeo,
                            stub(true, true, &calls));
  EXPECT_EQ(d.strategy, Strategy::kAbort);
  EXPECT_EQ(calls, 0);

  WorldState settled = mid_change();
  settled.ego.py = 0.5;
  settled.ego.vy = 0.01;
  const Decision after = decide(settled, ds, {1.5, 2.0},
                                FollowerMode::kAggressive, kLim, kGeo,
                                stub(true, true, &calls));
  EXPECT_EQ(after.strategy, Strategy::kProceed);
  EXPECT_FALSE(after.state.abort_started_at.has_value());
}

TEST(DecideTest, LookaheadUsesWorstCase) {
  const WorldState w = mid_change();
  const WorldState a = worst_case_lookahead(w, {0, 0}, FollowerMode::kAggressive,
                                            kLim);
  EXPECT_NEAR(a.leader.vx, 24.4, 1e-12);
  EXPECT_NEAR(a.follower.vx, 25.4, 1e-12);
  EXPECT_NEAR(a.t, 4.1, 1e-12);
  const WorldState c = worst_case_lookahead(w, {0, 0}, FollowerMode::kCautious,
                                            kLim);
  EXPECT_NEAR(c.follower.vx, 24.4, 1e-12);
}

TEST(DecideTest, ReturnedProfileIsVerifiedFromNextState) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 500; ++i) {
    WorldState w;
    w.ego = {0, 3 * u(rng), 20 + 10 * u(rng), 2 * u(rng) - 1};
    w.leader = {5 + 40 * u(rng), 3.5, 20 + 10 * u(rng), 0};
    w.follower = {-5 - 40 * u(rng), 3.5, 20 + 10 * u(rng), 0};
    const Action nn{8 * u(rng) - 5, 5 * u(rng) - 2.5};
    const FollowerMode mode =
        u(rng) < 0.5 ? FollowerMode::kAggressive : FollowerMode::kCautious;
    const Decision d = decide(w, initial_decision_state(0), nn, mode, kLim, kGeo);
    const Decision again =
        decide(w, initial_decision_state(0), nn, mode, kLim, kGeo);
    EXPECT_EQ(d.strategy, again.strategy);
    EXPECT_EQ(d.action.ax, again.action.ax);
    EXPECT_EQ(d.action.ay, again.action.ay);
    if (d.strategy == Strategy::kAbort) continue;
    const auto p = safe_evasion_exists(
        worst_case_lookahead(w, d.action, mode, kLim), mode, kLim, kGeo);
    ASSERT_TRUE(p.has_value());
    EXPECT_EQ(p->t1, d.state.last_profile.t1);
    EXPECT_EQ(p->t_yf, d.state.last_profile.t_yf);
    EXPECT_EQ(p->t2, d.state.last_profile.t2);
  }
}

}  // namespace
}  // namespace safin
