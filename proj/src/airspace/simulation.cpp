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

#include "levelk/airspace/simulation.hpp"

#include <algorithm>
#include <limits>
#include <optional>

#include "levelk/airspace/dynamics.hpp"

namespace levelk::airspace {
namespace {

std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) { return i * n + j; }

// Most urgent conflict: earliest closest approach, then the smaller miss distance.
std::optional<std::pair<std::size_t, Conflict>> worst_conflict(const AirspaceWorld& world, std::size_t index) {
  const AircraftState& ego = world.aircraft[index];
  std::optional<std::pair<std::size_t, Conflict>> worst;
  for (std::size_t j = 0; j < world.aircraft.size(); ++j) {
    if (j == index || !world.aircraft[j].active) continue;
    const auto c = detect_conflict(ego, world.aircraft[j], world.saa);
    if (!c) continue;
    if (!worst || c->time < worst->second.time ||
        (c->time == worst->second.time && c->distance < worst->second.distance)) {
      worst = std::make_pair(j, *c);
    }
  }
  return worst;
}

bool passed_plane(Vec2 p, Vec2 from, Vec2 to) { return dot(p - to, to - from) >= 0.0; }

}  // namespace

void apply_pilot_action(AircraftState& a, std::size_t action) {
  if (action >= kNumPilotActions) throw std::out_of_range("pilot action out of range");
  a.desired_heading = normalize_heading(a.desired_heading + (static_cast<double>(action) - 1.0) * 45.0);
  a.previous_action = action;
}

bool uas_in_conflict(const AirspaceWorld& world, std::size_t index) {
  const AircraftState& a = world.aircraft.at(index);
  return a.kind == AircraftKind::kUnmanned && a.active && worst_conflict(world, index).has_value();
}

Vec2 uas_desired_velocity(const AirspaceWorld& world, std::size_t index) {
  const AircraftState& a = world.aircraft.at(index);
  if (a.kind != AircraftKind::kUnmanned) return velocity_of(a);
  if (const auto conflict = worst_conflict(world, index)) {
    const AircraftState& intruder = world.aircraft[conflict->first];
    const Vec2 v_i = velocity_of(intruder);
    if (world.saa.algorithm == SaaAlgorithm::kSaa1) {
      Vec2 cmd = saa1_command(a.position, a.velocity, intruder.position, v_i, world.saa.threshold, a.speed);
      const double s = cmd.norm();
      const double lo = 0.5 * a.speed, hi = world.saa.speed_envelope * a.speed;
      if (s > hi) cmd = cmd * (hi / s);
      else if (s < lo) cmd = s > 0.0 ? cmd * (lo / s) : unit(a.velocity) * lo;
      return cmd;
    }
    return saa2_command(a.velocity, v_i, conflict->second.r0, conflict->second.rm, world.saa.threshold) * a.speed;
  }
  const std::size_t wp = std::min(a.next_waypoint, a.trajectory.size() - 1);
  return unit(a.trajectory[wp] - a.position) * a.speed;
}

void step_airspace(AirspaceWorld& world, double dt) {
  const std::size_t n = world.aircraft.size();
  std::vector<Vec2> commands(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (world.aircraft[i].active && world.aircraft[i].kind == AircraftKind::kUnmanned) {
      commands[i] = uas_desired_velocity(world, i);
    }
  }
  world.time += dt;
  for (std::size_t i = 0; i < n; ++i) {
    AircraftState& a = world.aircraft[i];
    if (!a.active) continue;
    if (a.kind == AircraftKind::kManned) {
      a.position += velocity_components(a.heading, a.speed) * (dt / kSecondsPerHour);
      a.heading = step_heading(a.heading, a.desired_heading, dt);
    } else {
      a.position += a.velocity * (dt / kSecondsPerHour);
      a.velocity = step_uas_velocity(a.velocity, commands[i], dt);
      a.heading = heading_of(a.velocity);
    }
    const std::size_t last = a.trajectory.size() - 1;
    if (a.kind == AircraftKind::kUnmanned) {
      while (a.next_waypoint < last &&
             ((a.position - a.trajectory[a.next_waypoint]).norm() <= world.regions.arrival_radius ||
              passed_plane(a.position, a.trajectory[a.next_waypoint - 1], a.trajectory[a.next_waypoint]))) {
        ++a.next_waypoint;
      }
    }
    if (last > 0 && passed_plane(a.position, a.trajectory[last - 1], a.trajectory[last]) &&
        (a.kind == AircraftKind::kManned || a.next_waypoint >= last)) {
      a.active = false;
      a.arrival_time = world.time;
    }
  }
}

MetricsAccumulator::MetricsAccumulator(const AirspaceWorld& initial)
    : n_(initial.aircraft.size()),
      inside_separation_(n_ * n_, 0),
      inside_collision_(n_ * n_, 0),
      deviation_sum_(n_, 0.0),
      deviation_samples_(n_, 0) {}

std::size_t MetricsAccumulator::record(const AirspaceWorld& world) {
  std::size_t new_collisions = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    const AircraftState& a = world.aircraft[i];
    if (!a.active) continue;
    deviation_sum_[i] += distance_to_polyline(a.position, a.trajectory);
    ++deviation_samples_[i];
    for (std::size_t j = i + 1; j < n_; ++j) {
      const AircraftState& b = world.aircraft[j];
      const std::size_t k = pair_index(i, j, n_);
      if (!b.active) {
        inside_separation_[k] = inside_collision_[k] = 0;
        continue;
      }
      const double d = (a.position - b.position).norm();
      const bool uas_pair = a.kind == AircraftKind::kUnmanned || b.kind == AircraftKind::kUnmanned;
      const bool sep = uas_pair && d < world.regions.separation_radius;
      const bool col = d < world.regions.collision_radius;
      // A grazing encounter that dips in and out of the radius is one event.
      const bool clear = d >= world.regions.separation_radius + world.regions.violation_rearm;
      if (sep && !inside_separation_[k]) ++totals_.separation_violations;
      if (col && !inside_collision_[k]) {
        ++totals_.collisions;
        ++new_collisions;
      }
      inside_separation_[k] = sep || (inside_separation_[k] && !clear);
      inside_collision_[k] = col;
    }
  }
  return new_collisions;
}

AirspaceMetrics MetricsAccumulator::finish(const AirspaceWorld& world) const {
  AirspaceMetrics m = totals_;
  double manned = 0.0, uas = 0.0, flight = 0.0;
  std::size_t n_manned = 0, n_uas = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    const AircraftState& a = world.aircraft[i];
    const double dev = deviation_samples_[i] > 0 ? deviation_sum_[i] / static_cast<double>(deviation_samples_[i]) : 0.0;
    if (a.kind == AircraftKind::kManned) {
      manned += dev;
      ++n_manned;
    } else {
      uas += dev;
      flight += a.arrival_time >= 0.0 ? a.arrival_time : world.time;
      ++n_uas;
    }
  }
  m.manned_deviation = n_manned > 0 ? manned / static_cast<double>(n_manned) : 0.0;
  m.uas_deviation = n_uas > 0 ? uas / static_cast<double>(n_uas) : 0.0;
  m.uas_flight_time = n_uas > 0 ? flight / static_cast<double>(n_uas) : 0.0;
  return m;
}

void append_trajectory_rows(const AirspaceWorld& world, std::vector<TrajectoryRow>& rows) {
  for (const AircraftState& a : world.aircraft) {
    if (!a.active) continue;
    rows.push_back({world.time, a.id, a.position.x, a.position.y, a.heading,
                    a.kind == AircraftKind::kManned ? static_cast<int>(a.previous_action) : -1});
  }
}

}  // namespace levelk::airspace
