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
#include <utility>
#include <vector>

#include "levelk/common/random.hpp"
#include "levelk/traffic/types.hpp"

namespace levelk::traffic {

/// Acceleration draw for a longitudinal action: maintain N(0, 0.075),
/// accelerate U[0.5, 2.5], decelerate U[-2.5, -0.5], hard variants
/// +-(3.5 + |N(0, 0.3)|). Throws std::invalid_argument for lane actions.
double sample_acceleration(std::size_t action, Rng& rng);

/// Kinematic step with constant acceleration; v_x stops at zero instead of
/// reversing (the position then follows the truncated profile).
VehicleState step_vehicle(VehicleState vs, double a, double dt);

/// Starts a lane change toward lower (left) or higher (right) lane indices.
/// Returns false and leaves the vehicle unchanged off the road edge or while
/// another change is in progress.
bool start_lane_change(VehicleState& vs, bool left, const RoadConfig& road);

/// Applies a decision: lane actions start a change (rejected ones fall back
/// to maintain and are counted on the world), longitudinal actions draw an
/// acceleration. Returns the action that took effect.
std::size_t apply_driver_action(TrafficWorld& world, std::size_t index, std::size_t action, Rng& rng);

/// One integration step for every vehicle; lane changes complete when the
/// vehicle is within 0.1 m of the target lane centre.
void step_traffic(TrafficWorld& world, double dt);

/// Pairs (i < j) whose footprints overlap: lateral offset below the vehicle
/// width and longitudinal gap below the mean length.
std::vector<std::pair<std::size_t, std::size_t>> detect_collisions(const TrafficWorld& world);

}  // namespace levelk::traffic
