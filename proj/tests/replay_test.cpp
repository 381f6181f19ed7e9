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


#include "safin/replay.hpp"

#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "safin/io.hpp"

namespace safin {
namespace {

std::string error_of(const std::string& text) {
  std::istringstream in(text);
  try {
    read_trace(in);
  } catch (const FormatError& e) {
    return e.what();
  }
  return "";
}

TEST(ReadTraceTest, ParsesGeometryAndActors) {
  std::istringstream in(
      "# geometry lane_width=3.6 vehicle_width=1.9 vehicle_length=4.5\n"
      "# follower_mode=cautious\n"
      "t,actor,px,vx\n"
      "0,ego,0,25\n"
      "0,leader,20,24\n"
      "0,follower,-15,26\n"
      "0.5,leader,32,24\n");
  const ReplayTrace tr = read_trace(in);
  EXPECT_EQ(tr.geometry.lane_width, 3.6);
  EXPECT_EQ(tr.geometry.vehicle_length, 4.5);
  EXPECT_EQ(tr.follower_mode, FollowerMode::kCautious);
  ASSERT_TRUE(tr.ego.has_value());
  EXPECT_EQ(tr.ego->vx, 25);
  EXPECT_EQ(tr.leader.size(), 2u);
  EXPECT_EQ(tr.follower.size(), 1u);
}

TEST(ReadTraceTest, Diagnostics) {
  const std::string h = "t,actor,px,vx\n";
  EXPECT_NE(error_of("t,px\n").find("line 1"), std::string::npos);
  const std::string order =
      error_of(h + "0,leader,0,1\n0,follower,0,1\n0,leader,1,1\n");
  EXPECT_NE(order.find("line 4"), std::string::npos);
  EXPECT_NE(order.find("'t'"), std::string::npos);
  const std::string actor = error_of(h + "0,truck,0,1\n");
  EXPECT_NE(actor.find("line 2"), std::string::npos);
  EXPECT_NE(actor.find("actor"), std::string::npos);
  const std::string num = error_of(h + "0,leader,x,1\n");
  EXPECT_NE(num.find("'px'"), std::string::npos);
  EXPECT_NE(error_of(h + "0,leader,0,1\n").find("follower"), std::string::npos);
  EXPECT_NE(error_of("# geometry lane_width=1 vehicle_width=2\n" + h +
                     "0,leader,0,1\n0,follower,0,1\n")
                .find("geometry"),
            std::string::npos);
}

TEST(SampleAtTest, InterpolatesAndExtrapolates) {
  const std::vector<TraceSample> s{{0, 0, 10}, {1, 12, 14}};
  const TraceSample mid = sample_at(s, 0.25);
  EXPECT_DOUBLE_EQ(mid.px, 3.0);
  EXPECT_DOUBLE_EQ(mid.vx, 11.0);
  const TraceSample after = sample_at(s, 2.0);
  EXPECT_DOUBLE_EQ(after.px, 26.0);
  EXPECT_DOUBLE_EQ(after.vx, 14.0);
  EXPECT_DOUBLE_EQ(sample_at(s, 1.0).px, 12.0);
}

TEST(ReplayTest, RecordedEpisodeReplaysIdentically) {
  Model lon({7, 1});
  Model lat({7, 1});
  lat.weight(0)(0, 0) = -4.0;
  lat.weight(0)(0, 2) = -4.0;
  lat.bias(0)[0] = 14.0;
  const PlannerModels models{&lon, &lat, nullptr};
  SimConfig cfg;
  cfg.record_trajectory = true;
  int collided = 0;
  for (int i = 0; i < 40; ++i) {
    const Scenario sc = sample_scenario(preset_class(4), 500 + i);
    for (PlannerKind p : {PlannerKind::kNnOnly, PlannerKind::kSafIn}) {
      const EpisodeResult original =
          run_episode(sc, p, AssessMode::kOracle, models, cfg);
      std::stringstream file;
      write_trace(file, trace_from_episode(sc.initial, original,
                                           sc.follower_mode, cfg.geometry));
      const ReplayTrace trace = read_trace(file);
      const EpisodeResult replayed =
          run_replay(trace, p, AssessMode::kOracle, models, cfg);
      EXPECT_EQ(replayed.collided, original.collided);
      EXPECT_EQ(replayed.success, original.success);
      EXPECT_EQ(replayed.steps, original.steps);
      EXPECT_EQ(replayed.final_py, original.final_py);
      EXPECT_EQ(replayed.crossing_time, original.crossing_time);
      collided += original.collided;
    }
  }
  EXPECT_GT(collided, 0);
}

}  // namespace
}  // namespace safin
