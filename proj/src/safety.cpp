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

#include "safin/safety.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "safin/decision.hpp"

namespace safin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBisectionTol = 1e-4;

}  // namespace

const char* to_string(FollowerMode mode) {
  return mode == FollowerMode::kAggressive ? "aggressive" : "cautious";
}

LateralTimes lateral_evasion_times(double py0, double vy0, const Limits& lim,
                                   const Geometry& g) {
  const double a = lim.max_lateral_accel;
  const double bound = g.in_lane_bound();

  if (vy0 <= 0.0 && py0 <= bound) {
    return {0.0, -vy0 / a};
  }
  if (vy0 > 0.0 && py0 + vy0 * vy0 / (2.0 * a) <= bound) {
    return {vy0 / a, vy0 / a};
  }

  // -a on [0, t1], +a on [t1, t_yf], ending at the bound with vy = 0.
  // With u = t_yf - t1 the two conditions reduce to
  //   py0 + vy0^2 / (2a) - a u^2 = bound,  t1 = u + vy0 / a.
  const double excess = py0 + vy0 * vy0 / (2.0 * a) - bound;
  if (!(excess >= 0.0)) {
    throw std::logic_error("lateral_evasion_times: no real root");
  }
  const double u = std::sqrt(excess / a);
  const double t1 = u + vy0 / a;
  if (t1 >= 0.0) {
    return {t1, t1 + u};
  }

  // Descending faster than +a can stop before the bound: brake laterally
  // from the start and finish at the crossing.
  const double disc = vy0 * vy0 - 2.0 * a * (py0 - bound);
  const double t_cross = (-vy0 - std::sqrt(std::max(disc, 0.0))) / a;
  return {0.0, t_cross};
}

bool stays_in_original_lane(double py, double vy, const Limits& lim,
                            const Geometry& g) {
  const double peak =
      vy > 0.0 ? py + vy * vy / (2.0 * lim.max_lateral_accel) : py;
  return peak <= g.in_lane_bound();
}

double headway_c1(const KinematicState& ego, const KinematicState& leader,
                  double t_yf, const Limits& lim) {
  const double d = lim.max_decel;
  const double dl = lim.max_decel;
  if (leader.vx / dl < t_yf) {
    return ego.px - leader.px + ego.vx * t_yf - 0.5 * d * t_yf * t_yf -
           leader.vx * leader.vx / (2.0 * dl) + lim.min_gap;
  }
  return ego.px - leader.px + (ego.vx - leader.vx) * t_yf -
         0.5 * (d - dl) * t_yf * t_yf + lim.min_gap;
}

double headway_c2(const KinematicState& ego, const KinematicState& leader,
                  const Limits& lim) {
  return ego.px - leader.px + ego.vx * ego.vx / (2.0 * lim.max_decel) -
         leader.vx * leader.vx / (2.0 * lim.max_decel) + lim.min_gap;
}

LongitudinalMotion::LongitudinalMotion(double p0, double v0,
                                       std::span<const Phase> phases) {
  double t = 0.0;
  double p = p0;
  double v = std::max(v0, 0.0);
  for (const Phase& phase : phases) {
    double a = phase.accel;
    if (v <= 0.0 && a < 0.0) a = 0.0;
    knots_.push_back({t, p, v, a});
    double duration = phase.duration;
    if (a < 0.0) {
      const double t_stop = v / -a;
      if (t_stop < duration) {
        p += v * t_stop + 0.5 * a * t_stop * t_stop;
        t += t_stop;
        v = 0.0;
        knots_.push_back({t, p, 0.0, 0.0});
        if (!std::isfinite(duration)) return;
        // Remaining time of this phase is spent at rest.
        t += duration - t_stop;
        continue;
      }
    }
    if (!std::isfinite(duration)) return;
    p += v * duration + 0.5 * a * duration * duration;
    v += a * duration;
    t += duration;
  }
  // Past the last finite phase the vehicle coasts.
  knots_.push_back({t, p, v, 0.0});
}

const LongitudinalMotion::Knot& LongitudinalMotion::active(double t) const {
  auto it = std::upper_bound(
      knots_.begin(), knots_.end(), t,
      [](double value, const Knot& k) { return value < k.t; });
  if (it == knots_.begin()) return knots_.front();
  return *std::prev(it);
}

double LongitudinalMotion::position(double t) const {
  const Knot& k = active(t);
  const double tau = t - k.t;
  return k.p + k.v * tau + 0.5 * k.a * tau * tau;
}

double LongitudinalMotion::speed(double t) const {
  const Knot& k = active(t);
  return k.v + k.a * (t - k.t);
}

double min_gap(const LongitudinalMotion& front, const LongitudinalMotion& rear,
               double horizon) {
  std::vector<double> times{0.0, horizon};
  for (const auto* m : {&front, &rear}) {
    for (const auto& k : m->knots()) {
      if (k.t > 0.0 && k.t < horizon) times.push_back(k.t);
    }
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  auto gap_at = [&](double t) { return front.position(t) - rear.position(t); };
  double best = gap_at(0.0);
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double ta = times[i];
    const double tb = times[i + 1];
    best = std::min(best, gap_at(tb));
    // Interior minimum of the quadratic piece.
    const double mid = 0.5 * (ta + tb);
    const double rel_v = front.speed(ta) - rear.speed(ta);
    const double rel_a =
        (front.speed(mid) - rear.speed(mid) - rel_v) / (mid - ta);
    if (rel_a > 0.0) {
      const double tau = -rel_v / rel_a;
      if (tau > 0.0 && ta + tau < tb) best = std::min(best, gap_at(ta + tau));
    }
  }
  return best;
}

LongitudinalMotion ego_evasion_motion(const KinematicState& ego, double t2,
                                      const Limits& lim) {
  const LongitudinalMotion::Phase phases[] = {{t2, lim.max_accel},
                                              {kInf, -lim.max_decel}};
  return LongitudinalMotion(ego.px, ego.vx, phases);
}

namespace {

LongitudinalMotion braking_motion(const KinematicState& s, double decel) {
  const LongitudinalMotion::Phase phases[] = {{kInf, -decel}};
  return LongitudinalMotion(s.px, s.vx, phases);
}

bool leader_gap_holds(const WorldState& w, double t2, double t_yf,
                      const Limits& lim) {
  const LongitudinalMotion ego = ego_evasion_motion(w.ego, t2, lim);
  const LongitudinalMotion leader = braking_motion(w.leader, lim.max_decel);
  return min_gap(leader, ego, t_yf) >= lim.min_gap;
}

}  // namespace

double max_accel_duration_t2(const WorldState& w, double t_yf,
                             const Limits& lim) {
  if (!(t_yf > 0.0)) return 0.0;
  if (leader_gap_holds(w, t_yf, t_yf, lim)) return t_yf;
  if (!leader_gap_holds(w, 0.0, t_yf, lim)) return 0.0;
  double lo = 0.0;
  double hi = t_yf;
  while (hi - lo > kBisectionTol) {
    const double mid = 0.5 * (lo + hi);
    if (leader_gap_holds(w, mid, t_yf, lim)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

bool follower_safe(const WorldState& w, double t_yf, double t2,
                   FollowerMode mode, const Limits& lim) {
  const KinematicState& ego = w.ego;
  const KinematicState& fol = w.follower;

  if (mode == FollowerMode::kAggressive) {
    const double a = lim.max_accel;
    const double d = lim.max_decel;
    const double v_peak = ego.vx + a * t2;
    const double p_peak = ego.px + ego.vx * t2 + 0.5 * a * t2 * t2;
    double ego_end;
    if (t2 + v_peak / d < t_yf) {
      ego_end = p_peak + v_peak * v_peak / (2.0 * d);
    } else {
      const double rest = t_yf - t2;
      ego_end = p_peak + v_peak * rest - 0.5 * d * rest * rest;
    }
    const double follower_end =
        fol.px + fol.vx * t_yf + 0.5 * lim.max_accel * t_yf * t_yf;
    // The gap is concave in time here, so checking both ends covers the
    // whole interval.
    return ego_end - follower_end - lim.min_gap > 0.0 &&
           ego.px - fol.px - lim.min_gap > 0.0;
  }

  // A braking follower makes the gap convex, so the minimum can be interior.
  const LongitudinalMotion ego_motion = ego_evasion_motion(ego, t2, lim);
  const LongitudinalMotion follower = braking_motion(fol, lim.max_decel);
  return min_gap(ego_motion, follower, t_yf) > lim.min_gap;
}

std::optional<EvasionProfile> safe_evasion_exists(const WorldState& w,
                                                  FollowerMode mode,
                                                  const Limits& lim,
                                                  const Geometry& g) {
  const LateralTimes lat = lateral_evasion_times(w.ego.py, w.ego.vy, lim, g);
  EvasionProfile profile{lat.t1, lat.t_yf, 0.0, w.t};

  if (stays_in_original_lane(w.ego.py, w.ego.vy, lim, g)) return profile;

  if (w.leader.vx < w.ego.vx) {
    const double t_xf = w.ego.vx / lim.max_decel;
    const double margin = t_xf >= lat.t_yf
                              ? headway_c1(w.ego, w.leader, lat.t_yf, lim)
                              : headway_c2(w.ego, w.leader, lim);
    if (!(margin < 0.0)) return std::nullopt;
  } else if (w.leader.px - w.ego.px < lim.min_gap) {
    // A leader at least as fast only keeps the gap from shrinking; it must
    // already be large enough.
    return std::nullopt;
  }

  const double t2 = max_accel_duration_t2(w, lat.t_yf, lim);
  if (follower_safe(w, lat.t_yf, t2, mode, lim)) {
    profile.t2 = t2;
    return profile;
  }
  if (t2 > 0.0 && follower_safe(w, lat.t_yf, 0.0, mode, lim)) {
    return profile;
  }
  return std::nullopt;
}

Action evasion_action(const EvasionProfile& profile, double elapsed,
                      const KinematicState& ego, const Limits& lim,
                      const Geometry& g) {
  Action act;
  if (elapsed < profile.t1) {
    act.ay = -lim.max_lateral_accel;
  } else if (elapsed < profile.t_yf) {
    act.ay = lim.max_lateral_accel;
  } else {
    act.ay = hesitate_lateral(ego.vy, lim.dt, lim.max_lateral_accel);
  }

  if (ego.py <= g.in_lane_bound()) {
    act.ax = 0.0;
  } else if (elapsed < profile.t2) {
    act.ax = lim.max_accel;
  } else {
    act.ax = -lim.max_decel;
  }
  return act;
}

Action evasion_action_mean(const EvasionProfile& profile, double elapsed,
                           double dt, const KinematicState& ego,
                           const Limits& lim, const Geometry& g) {
  const double a_lat = lim.max_lateral_accel;
  const double t0 = elapsed;
  const double t_end = elapsed + dt;
  if (t0 >= profile.t_yf && ego.py > g.in_lane_bound()) {
    // Mean actions match the profile's velocity but not its position when a
    // switch falls inside a step, so the ego can end the profile a few mm
    // above the bound. Steer it just inside.
    constexpr double kInset = 1e-3;
    const double target = g.in_lane_bound() - kInset;
    const double ay = 2.0 * (target - ego.py - ego.vy * dt) / (dt * dt);
    return {0.0, std::clamp(ay, -a_lat, a_lat)};
  }
  auto overlap = [&](double lo, double hi) {
    return std::max(0.0, std::min(hi, t_end) - std::max(lo, t0));
  };

  // Lateral: bang-bang part inside the step, then damp whatever velocity is
  // left over the remaining fraction.
  double dv_lat = -a_lat * overlap(0.0, profile.t1) +
                  a_lat * overlap(profile.t1, profile.t_yf);
  const double rest = overlap(std::max(profile.t_yf, 0.0), kInf);
  if (rest > 0.0) {
    const double vy_mid = ego.vy + dv_lat;
    dv_lat += std::clamp(-vy_mid, -a_lat * rest, a_lat * rest);
  }

  double dv_lon = 0.0;
  if (ego.py > g.in_lane_bound()) {
    // Past t_yf the ego is back in its lane and stops braking.
    dv_lon = lim.max_accel * overlap(0.0, profile.t2) -
             lim.max_decel * overlap(profile.t2, profile.t_yf);
  }
  return {dv_lon / dt, dv_lat / dt};
}

}  // namespace safin
