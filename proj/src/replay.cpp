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

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "safin/io.hpp"

namespace safin {

namespace {

// Samples whose time is within this distance of a grid point are used
// as-is, so replaying a recorded episode reproduces its states exactly.
constexpr double kTimeSnap = 1e-9;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_field(std::string_view s, std::size_t line, const char* name) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw FormatError(fmt::format("line {}: field '{}': not a finite number: '{}'",
                                  line, name, s));
  }
  return v;
}

void parse_directive(std::string_view body, std::size_t line, ReplayTrace& tr) {
  body = trim(body);
  bool geometry = false;
  if (body.rfind("geometry", 0) == 0) {
    geometry = true;
    body.remove_prefix(8);
  }
  std::size_t pos = 0;
  while (pos < body.size()) {
    while (pos < body.size() && body[pos] == ' ') ++pos;
    if (pos >= body.size()) break;
    std::size_t end = body.find(' ', pos);
    if (end == std::string_view::npos) end = body.size();
    const std::string_view item = body.substr(pos, end - pos);
    pos = end;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      if (geometry) {
        throw FormatError(fmt::format("line {}: expected key=value, got '{}'", line, item));
      }
      return;  // plain comment
    }
    const std::string key(item.substr(0, eq));
    const std::string_view value = item.substr(eq + 1);
    if (key == "lane_width") {
      tr.geometry.lane_width = parse_field(value, line, "lane_width");
    } else if (key == "vehicle_width") {
      tr.geometry.vehicle_width = parse_field(value, line, "vehicle_width");
    } else if (key == "vehicle_length") {
      tr.geometry.vehicle_length = parse_field(value, line, "vehicle_length");
    } else if (key == "follower_mode") {
      if (value == "aggressive") {
        tr.follower_mode = FollowerMode::kAggressive;
      } else if (value == "cautious") {
        tr.follower_mode = FollowerMode::kCautious;
      } else {
        throw FormatError(fmt::format("line {}: field 'follower_mode': unknown value '{}'",
                                      line, value));
      }
    } else if (geometry) {
      throw FormatError(fmt::format("line {}: unknown geometry key '{}'", line, key));
    } else {
      return;
    }
  }
}

void append(std::vector<TraceSample>& v, TraceSample s, std::size_t line,
            const char* actor) {
  if (!v.empty() && !(s.t > v.back().t)) {
    throw FormatError(fmt::format(
        "line {}: field 't': {} timestamps must be strictly increasing", line,
        actor));
  }
  v.push_back(s);
}

}  // namespace

ReplayTrace read_trace(std::istream& is) {
  ReplayTrace tr;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::vector<TraceSample> ego;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string_view s = trim(line);
    if (s.empty()) continue;
    if (s.front() == '#') {
      parse_directive(s.substr(1), line_no, tr);
      continue;
    }
    if (!header) {
      if (s != "t,actor,px,vx") {
        throw FormatError(fmt::format(
            "line {}: expected header 't,actor,px,vx', got '{}'", line_no, s));
      }
      header = true;
      continue;
    }
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = s.find(',', start);
      fields.push_back(s.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 4) {
      throw FormatError(fmt::format("line {}: expected 4 fields, got {}", line_no,
                                    fields.size()));
    }
    const TraceSample sample{parse_field(fields[0], line_no, "t"),
                             parse_field(fields[2], line_no, "px"),
                             parse_field(fields[3], line_no, "vx")};
    const std::string_view actor = trim(fields[1]);
    if (actor == "leader") {
      append(tr.leader, sample, line_no, "leader");
    } else if (actor == "follower") {
      append(tr.follower, sample, line_no, "follower");
    } else if (actor == "ego") {
      append(ego, sample, line_no, "ego");
    } else {
      throw FormatError(fmt::format("line {}: field 'actor': unknown actor '{}'",
                                    line_no, actor));
    }
  }
  if (!header) throw FormatError("line 1: missing header 't,actor,px,vx'");
  if (tr.leader.empty()) throw FormatError("trace has no leader rows");
  if (tr.follower.empty()) throw FormatError("trace has no follower rows");
  if (!ego.empty()) tr.ego = ego.front();
  if (!(tr.geometry.lane_width > tr.geometry.vehicle_width) ||
      !(tr.geometry.vehicle_width > 0.0) || !(tr.geometry.vehicle_length > 0.0)) {
    throw FormatError("geometry: need lane_width > vehicle_width > 0 and vehicle_length > 0");
  }
  return tr;
}

void write_trace(std::ostream& os, const ReplayTrace& trace) {
  const Geometry& g = trace.geometry;
  os << fmt::format("# geometry lane_width={} vehicle_width={} vehicle_length={}\n",
                    g.lane_width, g.vehicle_width, g.vehicle_length);
  os << "# follower_mode=" << to_string(trace.follower_mode) << '\n';
  os << "t,actor,px,vx\n";
  if (trace.ego) {
    os << fmt::format("{},ego,{},{}\n", trace.ego->t, trace.ego->px, trace.ego->vx);
  }
  const std::size_t n = std::max(trace.leader.size(), trace.follower.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (i < trace.leader.size()) {
      const TraceSample& s = trace.leader[i];
      os << fmt::format("{},leader,{},{}\n", s.t, s.px, s.vx);
    }
    if (i < trace.follower.size()) {
      const TraceSample& s = trace.follower[i];
      os << fmt::format("{},follower,{},{}\n", s.t, s.px, s.vx);
    }
  }
}

TraceSample sample_at(const std::vector<TraceSample>& samples, double t) {
  if (samples.empty()) throw std::invalid_argument("sample_at: no samples");
  const auto it = std::lower_bound(
      samples.begin(), samples.end(), t,
      [](const TraceSample& s, double v) { return s.t < v; });
  if (it != samples.end() && std::abs(it->t - t) <= kTimeSnap) {
    return {t, it->px, it->vx};
  }
  if (it != samples.begin() && std::abs(std::prev(it)->t - t) <= kTimeSnap) {
    return {t, std::prev(it)->px, std::prev(it)->vx};
  }
  if (it == samples.begin() || it == samples.end()) {
    const TraceSample& e = it == samples.begin() ? samples.front() : samples.back();
    return {t, e.px + e.vx * (t - e.t), e.vx};
  }
  const TraceSample& a = *std::prev(it);
  const TraceSample& b = *it;
  const double f = (t - a.t) / (b.t - a.t);
  return {t, a.px + f * (b.px - a.px), a.vx + f * (b.vx - a.vx)};
}

ReplayTrace trace_from_episode(const WorldState& initial,
                               const EpisodeResult& result,
                               FollowerMode true_mode, const Geometry& g) {
  ReplayTrace tr;
  tr.geometry = g;
  tr.follower_mode = true_mode;
  tr.ego = TraceSample{initial.t, initial.ego.px, initial.ego.vx};
  tr.leader.push_back({initial.t, initial.leader.px, initial.leader.vx});
  tr.follower.push_back({initial.t, initial.follower.px, initial.follower.vx});
  for (const StepRecord& r : result.trajectory) {
    tr.leader.push_back({r.t, r.leader.px, r.leader.vx});
    tr.follower.push_back({r.t, r.follower.px, r.follower.vx});
  }
  return tr;
}

EpisodeResult run_replay(const ReplayTrace& trace, PlannerKind planner,
                         AssessMode assess_mode, const PlannerModels& models,
                         const SimConfig& cfg) {
  if (trace.leader.empty() || trace.follower.empty()) {
    throw std::invalid_argument("run_replay: trace needs leader and follower rows");
  }
  SimConfig local = cfg;
  local.geometry = trace.geometry;
  const double lane = trace.geometry.lane_width;
  const double t0 = trace.leader.front().t;
  const double dt = cfg.limits.dt;

  auto state = [&](const std::vector<TraceSample>& v, double t) {
    const TraceSample s = sample_at(v, t);
    return KinematicState{s.px, lane, s.vx, 0.0};
  };
  WorldState initial;
  initial.t = t0;
  initial.leader = state(trace.leader, t0);
  initial.follower = state(trace.follower, t0);
  if (trace.ego) {
    initial.ego = {trace.ego->px, 0.0, trace.ego->vx, 0.0};
  } else {
    initial.ego = {0.0, 0.0, initial.follower.vx, 0.0};
  }
  const TrafficStep traffic = [&](const WorldState&, int k) {
    const double t = t0 + (k + 1) * dt;
    return std::make_pair(state(trace.leader, t), state(trace.follower, t));
  };
  return run_episode(initial, trace.follower_mode, traffic, planner,
                     assess_mode, models, local);
}

}  // namespace safin
