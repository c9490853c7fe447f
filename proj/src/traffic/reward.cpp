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

#include "levelk/traffic/reward.hpp"

#include <cmath>

#include "levelk/traffic/dynamics.hpp"
#include "levelk/traffic/observation.hpp"

namespace levelk::traffic {

double effort_of(std::size_t action) {
  switch (action) {
    case kMaintain:
      return 0.0;
    case kAccelerate:
    case kDecelerate:
      return -0.25;
    case kHardAccelerate:
    case kHardDecelerate:
      return -0.5;
    default:
      return -1.0;
  }
}

double combine_reward(const TrafficRewardTerms& t, const TrafficRewardWeights& w) {
  return w.w[0] * t.collision + w.w[1] * t.speed + w.w[2] * t.headway + w.w[3] * t.effort;
}

TrafficRewardTerms driver_reward_terms(const TrafficWorld&, const TrafficWorld& after, std::size_t ego,
                                       std::size_t action) {
  TrafficRewardTerms t;
  for (const auto& [i, j] : detect_collisions(after)) {
    if (i == ego || j == ego) t.collision = -1.0;
  }
  double mean = 0.0;
  for (const auto& v : after.vehicles) mean += v.v_x;
  mean /= static_cast<double>(after.vehicles.size());
  const double v = after.vehicles.at(ego).v_x;
  t.speed = mean > 0.0 ? -std::abs(v - mean) / mean : 0.0;
  const auto front = encode_driver_observation(after, ego).slots[kFront].distance;
  t.headway = front == kClose ? -1.0 : front == kNominal ? 0.0 : 1.0;
  t.effort = effort_of(action);
  return t;
}

double driver_reward(const TrafficWorld& before, const TrafficWorld& after, std::size_t ego, std::size_t action,
                     const TrafficRewardWeights& w) {
  return combine_reward(driver_reward_terms(before, after, ego, action), w);
}

}  // namespace levelk::traffic
