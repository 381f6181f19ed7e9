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

#ifndef SAFIN_DATASET_HPP_
#define SAFIN_DATASET_HPP_

#include <Eigen/Dense>
#include <cstdint>

#include "safin/sim.hpp"

namespace safin {

// Planner training data: features (7 x N) and MPC labels (2 x N) ordered
// (ax, ay).
struct PlannerDataset {
  Eigen::MatrixXd x;
  Eigen::MatrixXd y;
};

// Rolls the ego under plan_mpc through `n_scenarios` scenarios drawn from
// preset class 1 and records (state, action) at every step.
PlannerDataset synth_dataset(int n_scenarios, std::uint64_t seed,
                             const SimConfig& cfg, int workers = 1);

// Column subset helpers for train/held-out splits.
struct Split {
  Eigen::MatrixXd train_x, train_y, test_x, test_y;
};
// Every `stride`-th sample goes to the held-out part.
Split split_every(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                  int stride);

}  // namespace safin

#endif  // SAFIN_DATASET_HPP_
