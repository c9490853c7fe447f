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

#include <array>
#include <cstddef>

#include "levelk/airspace/types.hpp"
#include "levelk/common/mixed_radix.hpp"

namespace levelk::airspace {

inline constexpr std::size_t kNumRegions = 6;
inline constexpr std::size_t kNumPilotStates = 421875;  // 5^6 * 3^3

/// Six pie-region codes (ring * 3 + slice; ring 0 inner, slice 0 ahead,
/// 1 right-rear, 2 left-rear) in 0..4, then BTA, BDA and PA in 0..2.
struct PilotObservation {
  std::array<std::size_t, kNumRegions> regions{};
  std::size_t bta = kStraight;
  std::size_t bda = kStraight;
  std::size_t pa = kStraight;

  bool operator==(const PilotObservation&) const = default;
};

/// Digit layout used by observation_index: six base-5 digits then three base-3.
const MixedRadix& pilot_radix();

/// Throws std::out_of_range for a component outside its range.
std::size_t observation_index(const PilotObservation& obs);
PilotObservation decode_observation(std::size_t index);

/// Approach-angle code for an intruder: 1 for a relative heading of
/// [135, 180] degrees (head-on), 2 for [90, 135), 3 for [45, 90), 4 below 45.
std::size_t approach_code(double relative_heading_deg);

/// Pie region (ring * 3 + slice) of an intruder at `offset` km from an ego
/// flying `heading`; intruders beyond the inner ring map to the outer ring.
std::size_t region_of(Vec2 offset, double heading, const RegionConfig& regions);

/// The action whose one-interval lookahead ends closest to the reference
/// trajectory (BTA) or the destination (BDA); ties go to straight.
std::size_t best_trajectory_action(const AircraftState& a, double interval, double dt,
                                   const RegionConfig& regions);
std::size_t best_destination_action(const AircraftState& a, double interval, double dt);

/// Encodes what the manned pilot `ego` sees. Only intruders inside the
/// awareness radius that are closing on the ego are coded; the nearest one
/// in a region sets its code.
PilotObservation encode_observation(const AirspaceWorld& world, std::size_t ego, double decision_interval,
                                    double dt);

}  // namespace levelk::airspace
