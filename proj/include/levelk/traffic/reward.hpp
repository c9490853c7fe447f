// Copyright 2026 The levelk Authors.
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

#pragma once

#include <cstddef>

#include "levelk/traffic/types.hpp"

namespace levelk::traffic {

struct TrafficRewardTerms {
  double collision = 0.0;  // C: -1 if the ego is in a collision
  double speed = 0.0;      // S: -|v - v_mean| / v_mean, 0 is best
  double headway = 0.0;    // D: -1, 0, 1 for a close, nominal, far front gap
  double effort = 0.0;     // E: 0, -0.25, -0.5 or -1
};

double effort_of(std::size_t action);
double combine_reward(const TrafficRewardTerms& t, const TrafficRewardWeights& w);

/// Terms for `ego` after one decision interval. `action` is the action that
/// took effect (a rejected lane change counts as maintain).
TrafficRewardTerms driver_reward_terms(const TrafficWorld& before, const TrafficWorld& after, std::size_t ego,
                                       std::size_t action);
double driver_reward(const TrafficWorld& before, const TrafficWorld& after, std::size_t ego, std::size_t action,
                     const TrafficRewardWeights& w);

}  // namespace levelk::traffic
