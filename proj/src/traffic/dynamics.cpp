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

#include "levelk/traffic/dynamics.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace levelk::traffic {

double sample_acceleration(std::size_t action, Rng& rng) {
  switch (action) {
    case kMaintain:
      return std::normal_distribution<double>(0.0, 0.075)(rng);
    case kAccelerate:
      return std::uniform_real_distribution<double>(0.5, 2.5)(rng);
    case kDecelerate:
      return std::uniform_real_distribution<double>(-2.5, -0.5)(rng);
    case kHardAccelerate:
      return 3.5 + std::abs(std::normal_distribution<double>(0.0, 0.3)(rng));
    case kHardDecelerate:
      return -3.5 - std::abs(std::normal_distribution<double>(0.0, 0.3)(rng));
    default:
      throw std::invalid_argument("action " + std::to_string(action) + " has no acceleration distribution");
  }
}

VehicleState step_vehicle(VehicleState vs, double a, double dt) {
  const double v_next = vs.v_x + a * dt;
  if (v_next < 0.0) {
    // Braking to a stop inside the step.
    vs.x += a < 0.0 ? vs.v_x * vs.v_x / (-2.0 * a) : 0.0;
    vs.v_x = 0.0;
  } else {
    vs.x += vs.v_x * dt + 0.5 * a * dt * dt;
    vs.v_x = v_next;
  }
  vs.y += vs.v_y * dt;
  return vs;
}

bool start_lane_change(VehicleState& vs, bool left, const RoadConfig& road) {
  if (vs.changing_lane()) return false;
  if (left && vs.lane == 0) return false;
  if (!left && vs.lane + 1 >= road.lanes) return false;
  vs.target_lane = static_cast<int>(left ? vs.lane - 1 : vs.lane + 1);
  vs.v_y = (left ? -1.0 : 1.0) * road.lane_width / road.lane_change_time;
  vs.a = 0.0;
  return true;
}

std::size_t apply_driver_action(TrafficWorld& world, std::size_t index, std::size_t action, Rng& rng) {
  VehicleState& vs = world.vehicles.at(index);
  if (action >= kNumTrafficActions) throw std::out_of_range("traffic action out of range");
  if (action == kLaneLeft || action == kLaneRight) {
    if (start_lane_change(vs, action == kLaneLeft, world.road)) {
      vs.previous_action = action;
      return action;
    }
    ++world.rejected_lane_changes;
    action = kMaintain;
  }
  vs.a = sample_acceleration(action, rng);
  vs.previous_action = action;
  return action;
}

void step_traffic(TrafficWorld& world, double dt) {
  const RoadConfig& road = world.road;
  for (VehicleState& vs : world.vehicles) {
    vs = step_vehicle(vs, vs.changing_lane() ? 0.0 : vs.a, dt);
    vs.x = std::fmod(vs.x, road.length);
    if (vs.x < 0.0) vs.x += road.length;
    if (vs.changing_lane()) {
      const double target = road.lane_centre(static_cast<std::size_t>(vs.target_lane));
      if (std::abs(vs.y - target) < 0.1) {
        vs.lane = static_cast<std::size_t>(vs.target_lane);
        vs.y = target;
        vs.v_y = 0.0;
        vs.target_lane = -1;
      }
    }
  }
  world.time += dt;
}

std::vector<std::pair<std::size_t, std::size_t>> detect_collisions(const TrafficWorld& world) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const auto& v = world.vehicles;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      if (std::abs(v[i].y - v[j].y) >= world.road.vehicle_width) continue;
      if (std::abs(world.road.wrap_offset(v[j].x - v[i].x)) < (v[i].length + v[j].length) / 2.0) {
        pairs.emplace_back(i, j);
      }
    }
  }
  return pairs;
}

}  // namespace levelk::traffic
