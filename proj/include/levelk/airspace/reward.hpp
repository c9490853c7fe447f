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

#include "levelk/airspace/types.hpp"

namespace levelk::airspace {

/// The six pilot reward terms.
struct RewardTerms {
  double collision = 0.0;   // C: aircraft inside the collision region
  double separation = 0.0;  // S: aircraft inside the separation region (collision region included)
  double approach = 0.0;    // I: 1 if the nearest intruder is closing
  double destination = 0.0; // D: displacement projected on the bearing to the destination, per unit distance flown
  double trajectory = 0.0;  // P: same, toward a point ahead on the reference trajectory
  double effort = 0.0;      // E: 1 if the action differs from the previous one
};

double combine_reward(const RewardTerms& t, const AirspaceRewardWeights& w);

/// Terms for `ego` between two snapshots one decision interval apart; the
/// previous action is read from `before`.
RewardTerms reward_terms(const AirspaceWorld& before, const AirspaceWorld& after, std::size_t ego,
                         std::size_t action);

double pilot_reward(const AirspaceWorld& before, const AirspaceWorld& after, std::size_t ego, std::size_t action,
                    const AirspaceRewardWeights& w);

}  // namespace levelk::airspace
