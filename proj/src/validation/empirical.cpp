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

#include "levelk/validation/empirical.hpp"

#include <cmath>
#include <unordered_map>
#include <vector>

#include "levelk/traffic/observation.hpp"

namespace levelk::validation {

using traffic::TrafficAction;

void EmpiricalPolicy::add(std::size_t state, std::size_t action) {
  auto& c = states[state];
  ++c.actions.at(action);
  ++c.visits;
}

std::uint64_t EmpiricalPolicy::total_visits() const {
  std::uint64_t n = 0;
  for (const auto& [s, c] : states) n += c.visits;
  return n;
}

std::size_t classify_action(double a, int lane_now, int lane_later, const EmpiricalOptions& options) {
  if (lane_later < lane_now) return traffic::kLaneLeft;
  if (lane_later > lane_now) return traffic::kLaneRight;
  const double m = std::abs(a);
  if (m < options.maintain_band) return traffic::kMaintain;
  if (m <= options.hard_threshold) return a > 0 ? traffic::kAccelerate : traffic::kDecelerate;
  return a > 0 ? traffic::kHardAccelerate : traffic::kHardDecelerate;
}

std::map<int, EmpiricalPolicy> build_empirical(const io::TrajectorySet& data, const EmpiricalOptions& options) {
  traffic::RoadConfig road = options.road;
  if (!options.ring) road.length = 1e15;

  // Snapshot rows per decision frame.
  std::map<long long, std::vector<const io::TrajectoryRecord*>> frames;
  // Lane per (vehicle, frame) for the lookahead.
  std::unordered_map<int, std::unordered_map<long long, int>> lanes;
  for (const auto& [id, rows] : data.vehicles) {
    auto& by_frame = lanes[id];
    for (const auto& r : rows) {
      by_frame[r.frame] = r.lane;
      if (r.frame % options.stride == 0) frames[r.frame].push_back(&r);
    }
  }

  std::map<int, EmpiricalPolicy> out;
  for (const auto& [frame, rows] : frames) {
    traffic::TrafficWorld world;
    world.road = road;
    for (const auto* r : rows) {
      traffic::VehicleState vs;
      vs.id = r->vehicle_id;
      vs.x = r->x;
      vs.y = r->y;
      vs.lane = static_cast<std::size_t>(r->lane);
      vs.v_x = r->v;
      vs.a = r->a;
      vs.length = road.vehicle_length;
      world.vehicles.push_back(vs);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = *rows[i];
      auto& policy = out[r.vehicle_id];
      const double off = std::abs(r.y - road.lane_centre(static_cast<std::size_t>(r.lane)));
      if (off > options.centred_tolerance * road.lane_width) continue;
      const auto& by_frame = lanes[r.vehicle_id];
      const auto later = by_frame.find(frame + options.lane_change_frames);
      if (later == by_frame.end()) continue;
      const auto state = traffic::driver_observation_index(traffic::encode_driver_observation(world, i));
      policy.add(state, classify_action(r.a, r.lane, later->second, options));
    }
  }
  return out;
}

}  // namespace levelk::validation
