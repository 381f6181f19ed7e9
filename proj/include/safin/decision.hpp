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

#ifndef SAFIN_DECISION_HPP_
#define SAFIN_DECISION_HPP_

#include <functional>
#include <optional>

#include "safin/core.hpp"
#include "safin/safety.hpp"

namespace safin {

// In decreasing order of preference.
enum class Strategy { kProceed, kHesitate, kAbort };

const char* to_string(Strategy s);

// Lateral acceleration that cancels vy within one step, saturated at a_ym.
double hesitate_lateral(double vy, double dt, double a_ym);

struct DecisionState {
  // Verified from the state reached after the previous step's action.
  EvasionProfile last_profile;
  std::optional<double> abort_started_at;
};

// Initial state for an ego that starts inside the original lane at rest.
DecisionState initial_decision_state(double t0);

struct Decision {
  Strategy strategy = Strategy::kProceed;
  Action action;
  DecisionState state;
};

using EvasionCheck = std::function<std::optional<EvasionProfile>(
    const WorldState&, FollowerMode, const Limits&, const Geometry&)>;

// World state one step ahead with the ego executing `ego_action`, the leader
// braking at max_decel and the follower accelerating (aggressive) or braking
// (cautious) at the mode's bound.
WorldState worst_case_lookahead(const WorldState& w, const Action& ego_action,
                                FollowerMode mode, const Limits& lim);

// Proceed with the planner action if a safe evasion exists after it, else
// hesitate, else abort along the previously verified profile. An abort stays
// latched until the ego is back in its lane with |vy| <= 0.05 m/s.
Decision decide(const WorldState& w, const DecisionState& ds,
                const Action& nn_action, FollowerMode mode, const Limits& lim,
                const Geometry& g);

Decision decide(const WorldState& w, const DecisionState& ds,
                const Action& nn_action, FollowerMode mode, const Limits& lim,
                const Geometry& g, const EvasionCheck& check);

}  // namespace safin

#endif  // SAFIN_DECISION_HPP_
