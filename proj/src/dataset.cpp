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

#include "safin/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>
#include <vector>

#include "safin/random.hpp"

namespace safin {

PlannerDataset synth_dataset(int n_scenarios, std::uint64_t seed,
                             const SimConfig& cfg, int workers) {
  if (n_scenarios <= 0) {
    throw std::invalid_argument("synth_dataset: n_scenarios must be > 0");
  }
  SimConfig local = cfg;
  local.record_trajectory = true;
  const ExperimentClass cls = preset_class(1);

  struct Episode {
    WorldState initial;
    EpisodeResult result;
  };
  std::vector<Episode> episodes(n_scenarios);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < n_scenarios; i = next++) {
      const Scenario sc = sample_scenario(cls, derive_seed(seed, i));
      episodes[i] = {sc.initial, run_episode(sc, PlannerKind::kMpc,
                                             AssessMode::kOracle, {}, local)};
    }
  };
  const int threads = std::clamp(workers, 1, n_scenarios);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(work);
  }

  Eigen::Index total = 0;
  for (const auto& e : episodes) total += Eigen::Index(e.result.trajectory.size());
  PlannerDataset d;
  d.x.resize(PlannerInput::kSize, total);
  d.y.resize(2, total);
  Eigen::Index col = 0;
  for (const auto& e : episodes) {
    WorldState w = e.initial;
    for (const StepRecord& rec : e.result.trajectory) {
      d.x.col(col) = encode_input(w).to_vector();
      d.y(0, col) = rec.action.ax;
      d.y(1, col) = rec.action.ay;
      ++col;
      w = {rec.ego, rec.leader, rec.follower, rec.t};
    }
  }
  return d;
}

Split split_every(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                  int stride) {
  if (stride < 2) throw std::invalid_argument("split_every: stride < 2");
  const Eigen::Index n = x.cols();
  const Eigen::Index n_test = (n + stride - 1) / stride;
  Split s;
  s.train_x.resize(x.rows(), n - n_test);
  s.train_y.resize(y.rows(), n - n_test);
  s.test_x.resize(x.rows(), n_test);
  s.test_y.resize(y.rows(), n_test);
  Eigen::Index a = 0;
  Eigen::Index b = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i % stride == 0) {
      s.test_x.col(b) = x.col(i);
      s.test_y.col(b++) = y.col(i);
    } else {
      s.train_x.col(a) = x.col(i);
      s.train_y.col(a++) = y.col(i);
    }
  }
  return s;
}

}  // namespace safin
