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
#include <cstdint>
#include <vector>

#include "levelk/common/vec2.hpp"

namespace levelk::airspace {

inline constexpr double kKmPerNmi = 1.852;
inline constexpr double kSecondsPerHour = 3600.0;

enum class AircraftKind { kManned, kUnmanned };

/// Pilot decisions: heading change of the desired heading.
enum PilotAction : std::size_t { kLeft45 = 0, kStraight = 1, kRight45 = 2 };
inline constexpr std::size_t kNumPilotActions = 3;

/// Positions in km, headings in degrees clockwise from north (+y), speeds
/// in km/h.
struct AircraftState {
  int id = 0;
  AircraftKind kind = AircraftKind::kManned;
  Vec2 position;
  double heading = 0.0;          // [0, 360)
  double desired_heading = 0.0;  // [0, 360)
  double speed = 500.0;          // nominal |v|
  Vec2 velocity;                 // UAS only; manned velocity follows heading
  std::vector<Vec2> trajectory;  // reference polyline: start, waypoints..., destination
  std::size_t next_waypoint = 1; // index into trajectory (UAS waypoint following)
  std::size_t previous_action = kStraight;
  std::size_t level = 0;         // pilot policy level (manned)
  bool active = true;            // false once arrived
  double arrival_time = -1.0;    // seconds, set on arrival

  Vec2 destination() const { return trajectory.back(); }
};

struct RegionConfig {
  double collision_radius = 0.5 * kKmPerNmi;
  double separation_radius = 5.0 * kKmPerNmi;
  double inner_radius = 1.0 * kKmPerNmi;      // observation pie, inner ring
  double outer_radius = 5.0 * kKmPerNmi;      // observation pie, outer ring
  double awareness_radius = 10.0 * kKmPerNmi; // intruders beyond this are not observed
  double violation_rearm = 1.0 * kKmPerNmi;   // a violation ends once the pair is this far past the separation radius
  double arrival_radius = 1.5;                // km
  double trajectory_lookahead = 5.0;          // km ahead on the reference for the P term
};

enum class SaaAlgorithm { kSaa1, kSaa2 };

struct SaaConfig {
  SaaAlgorithm algorithm = SaaAlgorithm::kSaa2;
  double distance_horizon = 20.0;          // km, scan radius
  double time_horizon = 60.0;              // s, projection time; 0 disables SAA
  double threshold = 5.3 * kKmPerNmi;      // km, minimum-distance trigger R (separation plus a buffer)
  double speed_envelope = 1.5;             // UAS speed limit, multiple of nominal

  bool enabled() const { return time_horizon > 0.0 && distance_horizon > 0.0; }
};

/// omega_1..omega_6 for collision, separation, approach, destination,
/// trajectory and effort terms.
struct AirspaceRewardWeights {
  std::array<double, 6> w{100.0, 5.0, 1.0, 1.0, 1.0, 0.5};
};

struct AirspaceWorld {
  std::vector<AircraftState> aircraft;
  double time = 0.0;  // s
  RegionConfig regions;
  SaaConfig saa;
};

}  // namespace levelk::airspace
