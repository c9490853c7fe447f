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

#include "levelk/airspace/reward.hpp"

#include <algorithm>
#include <limits>

#include "levelk/airspace/dynamics.hpp"

namespace levelk::airspace {

double combine_reward(const RewardTerms& t, const AirspaceRewardWeights& w) {
  return -w.w[0] * t.collision - w.w[1] * t.separation - w.w[2] * t.approach + w.w[3] * t.destination +
         w.w[4] * t.trajectory - w.w[5] * t.effort;
}

RewardTerms reward_terms(const AirspaceWorld& before, const AirspaceWorld& after, std::size_t ego,
                         std::size_t action) {
  const AircraftState& then = before.aircraft.at(ego);
  const AircraftState& now = after.aircraft.at(ego);
  const RegionConfig& regions = after.regions;
  RewardTerms t;

  double nearest = std::numeric_limits<double>::infinity();
  const Vec2 v_now = velocity_of(now);
  for (std::size_t j = 0; j < after.aircraft.size(); ++j) {
    const AircraftState& other = after.aircraft[j];
    if (j == ego || !other.active) continue;
    const Vec2 offset = other.position - now.position;
    const double range = offset.norm();
    if (range <= regions.collision_radius) t.collision += 1.0;
    if (range <= regions.separation_radius) t.separation += 1.0;
    if (range <= regions.awareness_radius && range < nearest) {
      nearest = range;
      t.approach = dot(velocity_of(other) - v_now, offset) < 0.0 ? 1.0 : 0.0;
    }
  }

  const Vec2 moved = now.position - then.position;
  const double flown = moved.norm();
  if (flown > 0.0) {
    const Vec2 to_dest = unit(then.destination() - then.position);
    t.destination = std::clamp(dot(moved, to_dest) / flown, -1.0, 1.0);
    const Vec2 ahead = lookahead_point(then.position, then.trajectory, regions.trajectory_lookahead);
    const Vec2 to_ref = unit(ahead - then.position);
    t.trajectory = std::clamp(dot(moved, to_ref) / flown, -1.0, 1.0);
  }
  t.effort = action != then.previous_action ? 1.0 : 0.0;
  return t;
}

double pilot_reward(const AirspaceWorld& before, const AirspaceWorld& after, std::size_t ego, std::size_t action,
                    const AirspaceRewardWeights& w) {
  return combine_reward(reward_terms(before, after, ego, action), w);
}

}  // namespace levelk::airspace
