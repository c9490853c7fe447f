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

#include "levelk/common/mixed_radix.hpp"
#include "levelk/traffic/types.hpp"

namespace levelk::traffic {

enum DistanceClass : std::size_t { kClose = 0, kNominal = 1, kFar = 2 };
enum MotionClass : std::size_t { kApproaching = 0, kStable = 1, kDistancing = 2 };

enum Slot : std::size_t { kFront = 0, kFrontLeft = 1, kFrontRight = 2, kRearLeft = 3, kRearRight = 4 };
inline constexpr std::size_t kNumSlots = 5;
inline constexpr std::size_t kNumDriverStates = 59049;  // 9^5

/// Centre-to-centre distance: below close_distance is close, up to and
/// including far_distance is nominal. Throws std::invalid_argument for d < 0.
DistanceClass classify_distance(double d, const RoadConfig& road = {});
/// Positive closing speed means the gap is shrinking.
MotionClass classify_motion(double closing_speed, const RoadConfig& road = {});

struct SlotObservation {
  DistanceClass distance = kFar;
  MotionClass motion = kStable;
  bool operator==(const SlotObservation&) const = default;
};

/// Absent neighbours read (far, stable).
struct DriverObservation {
  std::array<SlotObservation, kNumSlots> slots{};
  bool operator==(const DriverObservation&) const = default;
};

/// Five base-9 digits (distance * 3 + motion), front slot most significant.
const MixedRadix& driver_radix();
std::size_t driver_observation_index(const DriverObservation& obs);
DriverObservation decode_driver_observation(std::size_t index);

/// Nearest vehicle per slot. Lanes of both the ego and its neighbours are
/// taken from the true lateral position, so a vehicle in the middle of a
/// lane change is seen in whichever lane it is closer to.
DriverObservation encode_driver_observation(const TrafficWorld& world, std::size_t ego);

}  // namespace levelk::traffic
