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


// Replay of externally recorded surrounding traffic.
//
// Trace format: CSV with the header `t,actor,px,vx`, where actor is one of
// leader, follower or ego. Leader and follower drive in the target lane and
// follow the recorded longitudinal states. Only the first ego row is used,
// as the initial ego state; without one the ego starts at px = 0 with the
// follower's initial speed. Lines starting with '#' are comments, except an
// optional
//   # geometry lane_width=3.5 vehicle_width=2 vehicle_length=5
// line, and an optional
//   # follower_mode=aggressive
// line that sets the mode used by oracle assessment.

#ifndef SAFIN_REPLAY_HPP_
#define SAFIN_REPLAY_HPP_

#include <iosfwd>
#include <optional>
#include <vector>

#include "safin/core.hpp"
#include "safin/safety.hpp"
#include "safin/sim.hpp"

namespace safin {

struct TraceSample {
  double t = 0.0;
  double px = 0.0;
  double vx = 0.0;
};

struct ReplayTrace {
  std::vector<TraceSample> leader;
  std::vector<TraceSample> follower;
  std::optional<TraceSample> ego;
  Geometry geometry;
  FollowerMode follower_mode = FollowerMode::kAggressive;
};

// Throws FormatError naming the line and field on malformed input, unknown
// actors, missing leader/follower rows or non-increasing timestamps.
ReplayTrace read_trace(std::istream& is);
void write_trace(std::ostream& os, const ReplayTrace& trace);

// Linear interpolation at time t; constant velocity outside the samples.
TraceSample sample_at(const std::vector<TraceSample>& samples, double t);

// Builds a trace from a recorded episode (cfg.record_trajectory must have
// been set).
ReplayTrace trace_from_episode(const WorldState& initial,
                               const EpisodeResult& result,
                               FollowerMode true_mode, const Geometry& g);

// Drives the ego planner against the trace, resampled at cfg.limits.dt and
// starting at the first leader timestamp. The trace geometry replaces
// cfg.geometry.
EpisodeResult run_replay(const ReplayTrace& trace, PlannerKind planner,
                         AssessMode assess_mode, const PlannerModels& models,
                         const SimConfig& cfg);

}  // namespace safin

#endif  // SAFIN_REPLAY_HPP_
