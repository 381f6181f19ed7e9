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

// Closed-form worst-case evasion analysis.
//
// An evasion is the maneuver that brings the ego back entirely into the
// original lane (py <= in_lane_bound, vy = 0) as fast as the lateral
// acceleration bound allows, while the leader brakes as hard as possible and
// the follower takes the worst action allowed by its assessed mode. The ego
// longitudinally accelerates for t2 seconds and then brakes.

#ifndef SAFIN_SAFETY_HPP_
#define SAFIN_SAFETY_HPP_

#include <optional>
#include <span>
#include <vector>

#include "safin/core.hpp"

namespace safin {

enum class FollowerMode { kAggressive, kCautious };

const char* to_string(FollowerMode mode);

struct EvasionProfile {
  double t1 = 0.0;         // switch from -a_ym to +a_ym
  double t_yf = 0.0;       // lateral completion
  double t2 = 0.0;         // end of longitudinal acceleration
  double created_at = 0.0; // world time at which the profile starts
};

struct LateralTimes {
  double t1 = 0.0;
  double t_yf = 0.0;
};

// Bang-bang lateral return to the in-lane bound. States that never leave the
// original lane get a profile that only damps the lateral velocity. A state
// moving toward the original lane too fast to stop at the bound gets t1 = 0
// and t_yf at the crossing of the bound.
LateralTimes lateral_evasion_times(double py0, double vy0, const Limits& lim,
                                   const Geometry& g);

// True when the ego can stop its lateral motion without leaving the
// original lane, so no longitudinal constraint applies.
bool stays_in_original_lane(double py, double vy, const Limits& lim,
                            const Geometry& g);

// Headway margins against a hard-braking leader. Negative is safe.
// headway_c1 covers ego braking that outlasts t_yf, headway_c2 the case where
// the ego stops first.
double headway_c1(const KinematicState& ego, const KinematicState& leader,
                  double t_yf, const Limits& lim);
double headway_c2(const KinematicState& ego, const KinematicState& leader,
                  const Limits& lim);

// Largest t2 in [0, t_yf] keeping the gap to the braking leader >= min_gap,
// found by bisection to 1e-4 s.
double max_accel_duration_t2(const WorldState& w, double t_yf,
                             const Limits& lim);

bool follower_safe(const WorldState& w, double t_yf, double t2,
                   FollowerMode mode, const Limits& lim);

std::optional<EvasionProfile> safe_evasion_exists(const WorldState& w,
                                                  FollowerMode mode,
                                                  const Limits& lim,
                                                  const Geometry& g);

// Instantaneous action of the profile `elapsed` seconds after its start.
Action evasion_action(const EvasionProfile& profile, double elapsed,
                      const KinematicState& ego, const Limits& lim,
                      const Geometry& g);

// Mean action of the profile over [elapsed, elapsed + dt]. Executing it for
// one step reproduces the profile's velocity at the step end, which keeps
// switch times that fall inside a control step from drifting.
Action evasion_action_mean(const EvasionProfile& profile, double elapsed,
                           double dt, const KinematicState& ego,
                           const Limits& lim, const Geometry& g);

// Longitudinal motion under piecewise constant acceleration, clamped at
// standstill. Knots are split at every phase change and at the stop time so
// that the motion is exactly quadratic between consecutive knots.
class LongitudinalMotion {
 public:
  struct Phase {
    double duration;  // may be +inf for the final phase
    double accel;
  };
  struct Knot {
    double t;
    double p;
    double v;
    double a;
  };

  LongitudinalMotion(double p0, double v0, std::span<const Phase> phases);

  double position(double t) const;
  double speed(double t) const;
  const std::vector<Knot>& knots() const { return knots_; }

 private:
  const Knot& active(double t) const;
  std::vector<Knot> knots_;
};

// Exact minimum of front(t) - rear(t) over [0, horizon].
double min_gap(const LongitudinalMotion& front, const LongitudinalMotion& rear,
               double horizon);

// Ego motion of an evasion profile: +max_accel for t2, then -max_decel.
LongitudinalMotion ego_evasion_motion(const KinematicState& ego, double t2,
                                      const Limits& lim);

}  // namespace safin

#endif  // SAFIN_SAFETY_HPP_
