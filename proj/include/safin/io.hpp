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

// File formats.
//
// Numeric tables (datasets): one header line of comma-separated column
// names, then one record per line. Planner datasets use the columns
//   py,vx,vy,gap_lead,v_xl,gap_follow,v_xf,ax,ay
// and assessor datasets
//   vx,gap_lead,v_xl,gap_follow,v_xf,a1,a0
// Values are written in shortest round-trip form.
//
// Model files are line-oriented text:
//   safin-mlp 1
//   sizes 7 64 64 1
//   activation tanh linear
//   input_mean ... / input_scale ... / output_mean ... / output_scale ...
//   weight <l> <rows> <cols>   followed by <rows> lines, row-major
//   bias <l> <rows>            followed by one line
//   checksum <16 hex digits>   FNV-1a 64 of all preceding bytes

#ifndef SAFIN_IO_HPP_
#define SAFIN_IO_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "safin/assessor.hpp"
#include "safin/dataset.hpp"
#include "safin/planners.hpp"
#include "safin/sim.hpp"

namespace safin {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string> kPlannerColumns = {
    "py", "vx", "vy", "gap_lead", "v_xl", "gap_follow", "v_xf", "ax", "ay"};
inline const std::vector<std::string> kAssessorColumns = {
    "vx", "gap_lead", "v_xl", "gap_follow", "v_xf", "a1", "a0"};

std::uint64_t fnv1a64(std::string_view bytes);

// `data` holds one record per column.
void write_table(std::ostream& os, const std::vector<std::string>& columns,
                 const Eigen::MatrixXd& data);
// Throws FormatError naming the line and field on malformed input.
Eigen::MatrixXd read_table(std::istream& is,
                           const std::vector<std::string>& columns);

void write_planner_dataset(std::ostream& os, const PlannerDataset& d);
PlannerDataset read_planner_dataset(std::istream& is);
void write_assessor_dataset(std::ostream& os, const AssessorDataset& d);
AssessorDataset read_assessor_dataset(std::istream& is);

void save_model(std::ostream& os, const Model& m);
// Throws FormatError on a malformed file or checksum mismatch.
Model load_model(std::istream& is);

Model load_model_file(const std::string& path);
void save_model_file(const std::string& path, const Model& m);

// One line per step:
//   t,ego_px,ego_py,ego_vx,ego_vy,leader_px,leader_py,leader_vx,leader_vy,
//   follower_px,follower_py,follower_vx,follower_vy,ax,ay,strategy,
//   assessed_mode,true_mode
void write_trajectory(std::ostream& os, const std::vector<StepRecord>& log);

struct MetricsRow {
  std::string cls;
  PlannerKind planner;
  AssessMode assess;
  Metrics metrics;
};
void write_metrics_csv(std::ostream& os, const std::vector<MetricsRow>& rows);
void write_metrics_table(std::ostream& os, const std::vector<MetricsRow>& rows);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);
void write_sweep_table(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace safin

#endif  // SAFIN_IO_HPP_
