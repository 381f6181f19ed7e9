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

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "safin/drivers.hpp"
#include "safin/random.hpp"

namespace safin {

namespace {

constexpr double kMinAccel = -6.0;
constexpr double kMaxAccel = 4.0;

}  // namespace

Eigen::VectorXd AssessorInput::to_vector() const {
  Eigen::VectorXd x(kSize);
  x << vx, gap_lead, v_xl, gap_follow, v_xf;
  return x;
}

AssessorInput encode_assessor_input(const WorldState& w) {
  return {w.ego.vx, w.leader.px - w.ego.px, w.leader.vx,
          w.ego.px - w.follower.px, w.follower.vx};
}

Model make_assessor_model(std::uint64_t seed) {
  return Model::glorot({AssessorInput::kSize, kHiddenWidth, kHiddenWidth, 2},
                       seed);
}

FollowerPrediction predict_accels(const WorldState& w, const Model& m) {
  const Eigen::VectorXd out = m.predict(encode_assessor_input(w).to_vector());
  return {std::clamp(out[0], kMinAccel, kMaxAccel),
          std::clamp(out[1], kMinAccel, kMaxAccel)};
}

const char* to_string(BehaviorLabel label) {
  switch (label) {
    case BehaviorLabel::kCautious:
      return "cautious";
    case BehaviorLabel::kAggressive:
      return "aggressive";
    case BehaviorLabel::kUncertain:
      return "uncertain";
  }
  return "?";
}

BehaviorLabel classify(double a_obs, double a1, double a0, double a_th) {
  if (a_th < 0.0) throw std::invalid_argument("classify: a_th must be >= 0");
  const double d1 = std::abs(a_obs - a1);
  const double d0 = std::abs(a_obs - a0);
  if (d1 < d0 - a_th) return BehaviorLabel::kCautious;
  if (d0 < d1 - a_th) return BehaviorLabel::kAggressive;
  return BehaviorLabel::kUncertain;
}

FollowerMode to_mode(BehaviorLabel label) {
  return label == BehaviorLabel::kCautious ? FollowerMode::kCautious
                                           : FollowerMode::kAggressive;
}

FollowerMode assess(const WorldState& w, double a_obs, const Model& m,
                    double a_th) {
  const Eigen::VectorXd out = m.predict(encode_assessor_input(w).to_vector());
  return to_mode(classify(a_obs, out[0], out[1], a_th));
}

AssessorDataset synth_assessor_dataset(int n, std::uint64_t seed) {
  if (n <= 0) throw std::invalid_argument("synth_assessor_dataset: n <= 0");
  AssessorDataset d;
  d.x.resize(AssessorInput::kSize, n);
  d.y.resize(2, n);
  std::uint64_t draw = 0;
  for (int i = 0; i < n; ++draw) {
    Rng rng(derive_seed(seed, draw));
    WorldState w;
    w.ego.vx = uniform(rng, 0.0, 40.0);
    w.leader.vx = uniform(rng, 0.0, 40.0);
    w.follower.vx = uniform(rng, 0.0, 40.0);
    w.follower.px = 0.0;
    w.ego.px = uniform(rng, -5.0, 60.0);
    w.leader.px = w.ego.px + uniform(rng, 0.0, 60.0);
    if (w.leader.px <= w.follower.px) w.leader.px = w.follower.px + 1.0;
    IdmParams p;
    p.jam_spacing = uniform(rng, 5.0, 8.0);
    p.time_gap = uniform(rng, 1.0, 2.0);
    p.speed_surplus = uniform(rng, 0.0, 5.0);

    const double a1 = follower_accel(w, FollowerMode::kCautious, p);
    const double a0 = follower_accel(w, FollowerMode::kAggressive, p);
    if (a1 == a0) continue;
    d.x.col(i) = encode_assessor_input(w).to_vector();
    d.y(0, i) = a1;
    d.y(1, i) = a0;
    ++i;
  }
  return d;
}

const char* to_string(Difficulty d) {
  switch (d) {
    case Difficulty::kEasy:
      return "easy";
    case Difficulty::kMedium:
      return "medium";
    case Difficulty::kHard:
      return "hard";
  }
  return "?";
}

Difficulty difficulty_of(double a1_true, double a0_true) {
  const double delta = std::abs(a1_true - a0_true);
  if (delta > 0.5) return Difficulty::kEasy;
  if (delta > 0.25) return Difficulty::kMedium;
  return Difficulty::kHard;
}

std::vector<SweepRow> assessor_sweep(const AssessorDataset& eval,
                                     const Model& m,
                                     const std::vector<double>& thresholds,
                                     std::uint64_t seed) {
  const Eigen::MatrixXd pred = m.predict(eval.x);
  const Eigen::Index n = eval.x.cols();

  std::vector<bool> aggressive(n);
  Rng rng(seed);
  for (Eigen::Index i = 0; i < n; ++i) aggressive[i] = coin(rng);

  std::vector<SweepRow> rows;
  for (Difficulty diff :
       {Difficulty::kEasy, Difficulty::kMedium, Difficulty::kHard}) {
    for (double a_th : thresholds) {
      SweepRow row{diff, a_th};
      std::int64_t uncertain = 0;
      std::int64_t wrong = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (difficulty_of(eval.y(0, i), eval.y(1, i)) != diff) continue;
        ++row.count;
        const double a_obs = aggressive[i] ? eval.y(1, i) : eval.y(0, i);
        const BehaviorLabel label = classify(a_obs, pred(0, i), pred(1, i), a_th);
        if (label == BehaviorLabel::kUncertain) {
          ++uncertain;
        } else if ((label == BehaviorLabel::kAggressive) != aggressive[i]) {
          ++wrong;
        }
      }
      if (row.count > 0) {
        row.uncertain_rate = double(uncertain) / double(row.count);
        row.error_rate = double(wrong) / double(row.count);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace safin
