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
#include <cstdint>
#include <vector>

#include "levelk/airspace/types.hpp"
#include "levelk/common/vec2.hpp"

namespace levelk::airspace {

/// Sets a manned pilot's desired heading (left/right 45 degrees or keep) and
/// remembers the action.
void apply_pilot_action(AircraftState& a, std::size_t action);

/// UAS velocity command from the current snapshot: the SAA resolution
/// against the most urgent predicted conflict, else the nominal speed toward
/// the next waypoint. Returns the current velocity for manned aircraft.
Vec2 uas_desired_velocity(const AirspaceWorld& world, std::size_t index);

/// True if a conflict-resolution command was active for `index` in the
/// snapshot (for logging).
bool uas_in_conflict(const AirspaceWorld& world, std::size_t index);

/// One integration step of `dt` seconds: every command is computed from the
/// snapshot, then all active aircraft move (explicit Euler, km/h to km/s)
/// and arrivals are resolved. An aircraft arrives when it crosses the plane
/// perpendicular to its final leg at the destination.
void step_airspace(AirspaceWorld& world, double dt);

/// Episode outcome measures.
struct AirspaceMetrics {
  std::size_t separation_violations = 0;  // UAS-involved pairs entering the separation radius
  std::size_t collisions = 0;             // any pair entering the collision radius
  double manned_deviation = 0.0;          // km, mean over manned aircraft of the time-mean distance to the reference
  double uas_deviation = 0.0;             // km, same over the UAS
  double uas_flight_time = 0.0;           // s, mean over the UAS; episode duration if not arrived

  bool operator==(const AirspaceMetrics&) const = default;
};

/// Accumulates metrics from successive world snapshots.
class MetricsAccumulator {
 public:
  explicit MetricsAccumulator(const AirspaceWorld& initial);

  /// Records one snapshot; returns the number of new collisions.
  std::size_t record(const AirspaceWorld& world);
  AirspaceMetrics finish(const AirspaceWorld& world) const;

 private:
  std::size_t n_;
  std::vector<std::uint8_t> inside_separation_;
  std::vector<std::uint8_t> inside_collision_;
  std::vector<double> deviation_sum_;
  std::vector<std::size_t> deviation_samples_;
  AirspaceMetrics totals_;
};

struct TrajectoryRow {
  double time = 0.0;
  int aircraft_id = 0;
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  int action = -1;  // last pilot action; -1 for the UAS
};

void append_trajectory_rows(const AirspaceWorld& world, std::vector<TrajectoryRow>& rows);

}  // namespace levelk::airspace
