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

#include "levelk/traffic/observation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace levelk::traffic {

std::string action_name(std::size_t action) {
  static const char* names[] = {"maintain",        "accelerate", "decelerate", "hard_accelerate",
                                "hard_decelerate", "lane_left",  "lane_right"};
  if (action >= kNumTrafficActions) throw std::out_of_range("traffic action out of range");
  return names[action];
}

std::size_t RoadConfig::nearest_lane(double y) const {
  const double l = std::floor(y / lane_width);
  if (l <= 0.0) return 0;
  return std::min(lanes - 1, static_cast<std::size_t>(l));
}

double RoadConfig::wrap_offset(double dx) const {
  dx = std::fmod(dx, length);
  if (dx < -length / 2) dx += length;
  if (dx >= length / 2) dx -= length;
  return dx;
}

DistanceClass classify_distance(double d, const RoadConfig& road) {
  if (!(d >= 0.0)) throw std::invalid_argument("distance must be nonnegative");
  if (d < road.close_distance) return kClose;
  if (d <= road.far_distance) return kNominal;
  return kFar;
}

MotionClass classify_motion(double closing_speed, const RoadConfig& road) {
  if (closing_speed > road.motion_threshold) return kApproaching;
  if (closing_speed < -road.motion_threshold) return kDistancing;
  return kStable;
}

const MixedRadix& driver_radix() {
  static const MixedRadix radix({9, 9, 9, 9, 9});
  return radix;
}

std::size_t driver_observation_index(const DriverObservation& obs) {
  std::array<std::size_t, kNumSlots> digits{};
  for (std::size_t k = 0; k < kNumSlots; ++k) digits[k] = obs.slots[k].distance * 3 + obs.slots[k].motion;
  return driver_radix().encode(digits);
}

DriverObservation decode_driver_observation(std::size_t index) {
  const auto digits = driver_radix().decode(index);
  DriverObservation obs;
  for (std::size_t k = 0; k < kNumSlots; ++k) {
    obs.slots[k].distance = static_cast<DistanceClass>(digits[k] / 3);
    obs.slots[k].motion = static_cast<MotionClass>(digits[k] % 3);
  }
  return obs;
}

DriverObservation encode_driver_observation(const TrafficWorld& world, std::size_t ego) {
  const RoadConfig& road = world.road;
  const VehicleState& me = world.vehicles.at(ego);
  const long lane = static_cast<long>(road.nearest_lane(me.y));
  std::array<double, kNumSlots> best;
  best.fill(std::numeric_limits<double>::infinity());
  std::array<long, kNumSlots> who;
  who.fill(-1);
  for (std::size_t j = 0; j < world.vehicles.size(); ++j) {
    if (j == ego) continue;
    const VehicleState& other = world.vehicles[j];
    const long other_lane = static_cast<long>(road.nearest_lane(other.y));
    const double dx = road.wrap_offset(other.x - me.x);
    const bool ahead = dx >= 0.0;
    std::size_t slot;
    if (other_lane == lane) {
      if (!ahead) continue;  // the car behind in the same lane is not observed
      slot = kFront;
    } else if (other_lane == lane - 1) {
      slot = ahead ? kFrontLeft : kRearLeft;
    } else if (other_lane == lane + 1) {
      slot = ahead ? kFrontRight : kRearRight;
    } else {
      continue;
    }
    const double d = std::abs(dx);
    if (d < best[slot]) {
      best[slot] = d;
      who[slot] = static_cast<long>(j);
    }
  }
  DriverObservation obs;
  for (std::size_t k = 0; k < kNumSlots; ++k) {
    if (who[k] < 0) continue;
    const VehicleState& other = world.vehicles[static_cast<std::size_t>(who[k])];
    const bool front = k == kFront || k == kFrontLeft || k == kFrontRight;
    const double closing = front ? me.v_x - other.v_x : other.v_x - me.v_x;
    obs.slots[k] = {classify_distance(best[k], road), classify_motion(closing, road)};
  }
  return obs;
}

}  // namespace levelk::traffic
