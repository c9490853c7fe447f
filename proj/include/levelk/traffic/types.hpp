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
#include <string>
#include <vector>

namespace levelk::traffic {

enum TrafficAction : std::size_t {
  kMaintain = 0,
  kAccelerate = 1,
  kDecelerate = 2,
  kHardAccelerate = 3,
  kHardDecelerate = 4,
  kLaneLeft = 5,
  kLaneRight = 6,
};
inline constexpr std::size_t kNumTrafficActions = 7;

/// "maintain", "accelerate", ..., "lane_right".
std::string action_name(std::size_t action);

/// Lane 0 is the leftmost lane; lane_left moves toward lower indices.
/// Lateral position y grows with the lane index, lane centres at
/// (lane + 0.5) * lane_width. The road is a ring of `length` metres.
struct RoadConfig {
  std::size_t lanes = 5;
  double length = 875.0;         // m
  double lane_width = 3.7;       // m
  double vehicle_length = 5.0;   // m
  double vehicle_width = 2.0;    // m, for lateral overlap
  double lane_change_time = 2.0; // s
  double close_distance = 11.0;  // m, below is close
  double far_distance = 27.0;    // m, above is far
  double motion_threshold = 0.5; // m/s dead band for approaching/distancing

  double lane_centre(std::size_t lane) const { return (static_cast<double>(lane) + 0.5) * lane_width; }
  /// Lane whose centre is nearest to y, clamped to the road.
  std::size_t nearest_lane(double y) const;
  /// Longitudinal offset b - a wrapped into [-length/2, length/2).
  double wrap_offset(double dx) const;
};

struct VehicleState {
  int id = 0;
  double x = 0.0;            // m along the ring, [0, length)
  double y = 0.0;            // m lateral
  std::size_t lane = 0;      // committed lane; changes when a lane change completes
  double v_x = 0.0;          // m/s, never negative
  double v_y = 0.0;          // m/s, nonzero only during a lane change
  double a = 0.0;            // m/s^2 held over the current decision interval
  double length = 5.0;
  std::size_t previous_action = kMaintain;
  int target_lane = -1;      // lane being changed into, -1 if none
  std::size_t level = 0;

  bool changing_lane() const { return target_lane >= 0; }
};

/// omega_1..omega_4 for collision, speed, headway and effort.
struct TrafficRewardWeights {
  std::array<double, 4> w{100.0, 1.0, 1.0, 1.0};
};

struct TrafficWorld {
  std::vector<VehicleState> vehicles;
  RoadConfig road;
  double time = 0.0;  // s
  std::size_t rejected_lane_changes = 0;
};

}  // namespace levelk::traffic
