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

#ifndef SAFIN_ASSESSOR_HPP_
#define SAFIN_ASSESSOR_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "safin/core.hpp"
#include "safin/planners.hpp"
#include "safin/safety.hpp"

namespace safin {

// Features for follower-acceleration prediction. Lateral ego motion does not
// influence the follower and is left out.
struct AssessorInput {
  double vx = 0.0;
  double gap_lead = 0.0;
  double v_xl = 0.0;
  double gap_follow = 0.0;
  double v_xf = 0.0;

  static constexpr int kSize = 5;
  Eigen::VectorXd to_vector() const;
};

AssessorInput encode_assessor_input(const WorldState& w);

// One network, two heads: acceleration when following the ego (cautious)
// and when following the leader (aggressive).
Model make_assessor_model(std::uint64_t seed);

struct FollowerPrediction {
  double a_cautious = 0.0;    // a1
  double a_aggressive = 0.0;  // a0
};

FollowerPrediction predict_accels(const WorldState& w, const Model& m);

enum class BehaviorLabel { kCautious, kAggressive, kUncertain };

const char* to_string(BehaviorLabel label);

BehaviorLabel classify(double a_obs, double a1, double a0, double a_th);

// Uncertain is treated as aggressive.
FollowerMode to_mode(BehaviorLabel label);

// Classifies on the unclamped network outputs. Clamping is monotone, so
// this only differs from classifying predict_accels() when both outputs
// leave the same bound, where the clamp would manufacture a tie.
FollowerMode assess(const WorldState& w, double a_obs, const Model& m,
                    double a_th);

// IDM-labeled samples: features in columns of `x` (5 x N), labels in `y`
// (2 x N) ordered (a1*, a0*). States where both hypotheses give the same
// acceleration carry no information about the mode and are resampled.
struct AssessorDataset {
  Eigen::MatrixXd x;
  Eigen::MatrixXd y;
};

// Random three-vehicle states with IDM parameters sampled uniformly:
// jam spacing [5, 8] m, time gap [1, 2] s, desired-speed surplus [0, 5] m/s.
AssessorDataset synth_assessor_dataset(int n, std::uint64_t seed);

enum class Difficulty { kEasy, kMedium, kHard };

const char* to_string(Difficulty d);

// Partition by the gap between the two hypotheses' labels:
// easy > 0.5, medium (0.25, 0.5], hard <= 0.25.
Difficulty difficulty_of(double a1_true, double a0_true);

struct SweepRow {
  Difficulty difficulty;
  double a_th = 0.0;
  std::int64_t count = 0;
  double uncertain_rate = 0.0;
  // Wrong definite labels over all samples in the partition.
  double error_rate = 0.0;
};

// Sensitivity of the classifier to a_th. Each sample's true mode is drawn
// with probability 1/2 and its observed acceleration is the label of that
// mode.
std::vector<SweepRow> assessor_sweep(const AssessorDataset& eval,
                                     const Model& m,
                                     const std::vector<double>& thresholds,
                                     std::uint64_t seed);

}  // namespace safin

#endif  // SAFIN_ASSESSOR_HPP_
