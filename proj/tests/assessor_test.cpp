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


#include "safin/assessor.hpp"

#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "safin/drivers.hpp"

namespace safin {
namespace {

TEST(ClassifyTest, Examples) {
  EXPECT_EQ(classify(-0.9, -1.0, 2.0, 0.5), BehaviorLabel::kCautious);
  EXPECT_EQ(classify(0.5, 0.0, 1.0, 0.5), BehaviorLabel::kUncertain);
  EXPECT_EQ(classify(1.9, -1.0, 2.0, 0.5), BehaviorLabel::kAggressive);
}

TEST(ClassifyTest, ZeroThresholdOnlyMidpointIsUncertain) {
  EXPECT_EQ(classify(0.5, 0.0, 1.0, 0.0), BehaviorLabel::kUncertain);
  EXPECT_EQ(classify(0.5000001, 0.0, 1.0, 0.0), BehaviorLabel::kAggressive);
  EXPECT_EQ(classify(0.4999999, 0.0, 1.0, 0.0), BehaviorLabel::kCautious);
}

TEST(ClassifyTest, NegativeThresholdThrows) {
  EXPECT_THROW(classify(0, 0, 1, -0.1), std::invalid_argument);
}

TEST(ClassifyTest, TranslationInvariantAndMonotone) {
  std::mt19937_64 rng(79);
  std::uniform_real_distribution<double> a(-6, 4);
  std::uniform_real_distribution<double> th(0, 1);
  for (int i = 0; i < 5000; ++i) {
    const double obs = a(rng), a1 = a(rng), a0 = a(rng), t = th(rng);
    const BehaviorLabel label = classify(obs, a1, a0, t);
    EXPECT_EQ(classify(obs + 0.5, a1 + 0.5, a0 + 0.5, t), label);
    if (label == BehaviorLabel::kUncertain) {
      EXPECT_EQ(classify(obs, a1, a0, t + th(rng)), BehaviorLabel::kUncertain);
    }
  }
}

TEST(ToModeTest, UncertainIsAggressive) {
  EXPECT_EQ(to_mode(BehaviorLabel::kUncertain), FollowerMode::kAggressive);
  EXPECT_EQ(to_mode(BehaviorLabel::kCautious), FollowerMode::kCautious);
  EXPECT_EQ(to_mode(BehaviorLabel::kAggressive), FollowerMode::kAggressive);
}

TEST(PredictAccelsTest, ClampedOutputs) {
  Model m({5, 2});
  m.output_mean() << 10.0, -10.0;
  WorldState w;
  const FollowerPrediction p = predict_accels(w, m);
  EXPECT_EQ(p.a_cautious, 4.0);
  EXPECT_EQ(p.a_aggressive, -6.0);
}

TEST(AssessTest, ResolvesTiesCreatedByTheClamp) {
  Model m({5, 2});
  m.output_mean() << -8.0, -10.0;
  WorldState w;
  const FollowerPrediction p = predict_accels(w, m);
  ASSERT_EQ(p.a_cautious, p.a_aggressive);
  EXPECT_EQ(assess(w, -6.0, m, 0.0), FollowerMode::kCautious);
  EXPECT_EQ(assess(w, -6.0, m, 2.0), FollowerMode::kAggressive);
}

TEST(AssessorDatasetTest, HypothesesAlwaysDiffer) {
  const AssessorDataset a = synth_assessor_dataset(2000, 4);
  for (Eigen::Index i = 0; i < a.y.cols(); ++i) {
    ASSERT_NE(a.y(0, i), a.y(1, i)) << i;
  }
}

TEST(AssessorDatasetTest, ReproducibleBoundedAndLabelledByIdm) {
  const AssessorDataset a = synth_assessor_dataset(500, 3);
  EXPECT_EQ(a.x, synth_assessor_dataset(500, 3).x);
  EXPECT_EQ(a.y, synth_assessor_dataset(500, 3).y);
  EXPECT_GE(a.y.minCoeff(), -6.0);
  EXPECT_LE(a.y.maxCoeff(), 4.0);

  // Labels come from the IDM evaluated on the recorded features.
  WorldState w;
  w.leader = {51, 3.5, 30, 0};
  w.follower = {0, 3.5, 30, 0};
  w.ego = {-2, 0, 30, 0};
  IdmParams p;
  p.jam_spacing = 6;
  p.time_gap = 1.5;
  p.speed_surplus = 0;
  EXPECT_NEAR(follower_accel(w, FollowerMode::kAggressive, p), -4.0, 1e-12);
}

TEST(DifficultyTest, Partitions) {
  EXPECT_EQ(difficulty_of(0.0, 0.6), Difficulty::kEasy);
  EXPECT_EQ(difficulty_of(0.0, 0.5), Difficulty::kMedium);
  EXPECT_EQ(difficulty_of(0.0, 0.26), Difficulty::kMedium);
  EXPECT_EQ(difficulty_of(0.0, 0.25), Difficulty::kHard);
  EXPECT_EQ(difficulty_of(1.0, 1.0), Difficulty::kHard);
}

TEST(AssessorSweepTest, TrendsHoldForAnyModel) {
  const AssessorDataset eval = synth_assessor_dataset(3000, 5);
  TrainOptions opt;
  opt.epochs = 3;
  const Model m = train_mlp(eval.x, eval.y, make_assessor_model(1), opt);
  const std::vector<double> th{0.0, 0.15, 0.25, 0.5, 1.0};
  const auto rows = assessor_sweep(eval, m, th, 9);
  ASSERT_EQ(rows.size(), 15u);
  std::int64_t total = 0;
  for (std::size_t d = 0; d < 3; ++d) {
    total += rows[d * th.size()].count;
    for (std::size_t k = 1; k < th.size(); ++k) {
      const SweepRow& prev = rows[d * th.size() + k - 1];
      const SweepRow& row = rows[d * th.size() + k];
      EXPECT_EQ(row.difficulty, prev.difficulty);
      EXPECT_GE(row.uncertain_rate, prev.uncertain_rate);
      EXPECT_LE(row.error_rate, prev.error_rate);
    }
  }
  EXPECT_EQ(total, 3000);
}

}  // namespace
}  // namespace safin
