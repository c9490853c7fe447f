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

#include "levelk/airspace/observation.hpp"

#include <cmath>
#include <limits>

#include "levelk/airspace/dynamics.hpp"

namespace levelk::airspace {
namespace {

// Position after flying `interval` seconds toward the desired heading set by
// `action`.
Vec2 lookahead_position(const AircraftState& a, std::size_t action, double interval, double dt) {
  double heading = a.heading;
  const double desired = normalize_heading(a.desired_heading + (static_cast<double>(action) - 1.0) * 45.0);
  Vec2 p = a.position;
  for (double t = 0.0; t < interval - 1e-9; t += dt) {
    heading = step_heading(heading, desired, dt);
    p += velocity_components(heading, a.speed) * (dt / kSecondsPerHour);
  }
  return p;
}

template <typename Cost>
std::size_t best_action(Cost cost) {
  std::array<double, kNumPilotActions> c{};
  for (std::size_t act = 0; act < kNumPilotActions; ++act) c[act] = cost(act);
  std::size_t best = kStraight;
  for (std::size_t act : {kLeft45, kRight45}) {
    if (c[act] < c[best] - 1e-9) best = act;
  }
  // Left and right tie exactly on symmetric geometry; straight already won
  // unless one of them is strictly better, and the left is checked first.
  return best;
}

}  // namespace

const MixedRadix& pilot_radix() {
  static const MixedRadix radix({5, 5, 5, 5, 5, 5, 3, 3, 3});
  return radix;
}

std::size_t observation_index(const PilotObservation& obs) {
  std::array<std::size_t, 9> digits{};
  for (std::size_t i = 0; i < kNumRegions; ++i) digits[i] = obs.regions[i];
  digits[6] = obs.bta;
  digits[7] = obs.bda;
  digits[8] = obs.pa;
  return pilot_radix().encode(digits);
}

PilotObservation decode_observation(std::size_t index) {
  const auto d = pilot_radix().decode(index);
  PilotObservation obs;
  for (std::size_t i = 0; i < kNumRegions; ++i) obs.regions[i] = d[i];
  obs.bta = d[6];
  obs.bda = d[7];
  obs.pa = d[8];
  return obs;
}

std::size_t approach_code(double relative_heading_deg) {
  if (relative_heading_deg >= 135.0) return 1;
  if (relative_heading_deg >= 90.0) return 2;
  if (relative_heading_deg >= 45.0) return 3;
  return 4;
}

std::size_t region_of(Vec2 offset, double heading, const RegionConfig& regions) {
  const std::size_t ring = offset.norm() <= regions.inner_radius ? 0 : 1;
  const double bearing = heading_of(offset);
  const double relative = normalize_heading(bearing - heading + 60.0);
  const std::size_t slice = std::min<std::size_t>(2, static_cast<std::size_t>(relative / 120.0));
  return ring * 3 + slice;
}

std::size_t best_trajectory_action(const AircraftState& a, double interval, double dt,
                                   const RegionConfig&) {
  return best_action([&](std::size_t act) {
    return distance_to_polyline(lookahead_position(a, act, interval, dt), a.trajectory);
  });
}

std::size_t best_destination_action(const AircraftState& a, double interval, double dt) {
  return best_action(
      [&](std::size_t act) { return (lookahead_position(a, act, interval, dt) - a.destination()).norm(); });
}

PilotObservation encode_observation(const AirspaceWorld& world, std::size_t ego, double decision_interval,
                                    double dt) {
  const AircraftState& me = world.aircraft.at(ego);
  PilotObservation obs;
  std::array<double, kNumRegions> nearest;
  nearest.fill(std::numeric_limits<double>::infinity());
  const Vec2 v_me = velocity_of(me);
  for (std::size_t j = 0; j < world.aircraft.size(); ++j) {
    const AircraftState& other = world.aircraft[j];
    if (j == ego || !other.active) continue;
    const Vec2 offset = other.position - me.position;
    const double range = offset.norm();
    if (range > world.regions.awareness_radius) continue;
    const Vec2 v_other = velocity_of(other);
    if (dot(v_other - v_me, offset) >= 0.0) continue;  // not closing
    const std::size_t region = region_of(offset, me.heading, world.regions);
    if (range < nearest[region]) {
      nearest[region] = range;
      const double relative = angle_between(v_other, v_me) * 180.0 / 3.14159265358979323846;
      obs.regions[region] = approach_code(relative);
    }
  }
  obs.bta = best_trajectory_action(me, decision_interval, dt, world.regions);
  obs.bda = best_destination_action(me, decision_interval, dt);
  obs.pa = me.previous_action;
  return obs;
}

}  // namespace levelk::airspace
