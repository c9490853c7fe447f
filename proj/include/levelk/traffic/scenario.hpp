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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "levelk/traffic/types.hpp"

namespace levelk::traffic {

/// Vehicles dealt round-robin over the lanes, evenly spaced per lane with a
/// small jitter; the ring length is vehicles-per-lane times `spacing`.
struct RandomRoster {
  std::size_t vehicles = 25;
  double spacing = 35.0;     // m per vehicle in a lane
  double speed_min = 10.0;   // m/s
  double speed_max = 15.0;
};

struct VehicleSpec {
  std::size_t lane = 0;
  double x = 0.0;       // m
  double speed = 12.0;  // m/s
  std::optional<std::size_t> level;  // defaults to the scenario driver level
};

struct TrafficScenario {
  RoadConfig road;
  double dt = 0.1;                 // s
  double decision_interval = 1.0;  // s
  double duration = 200.0;         // s
  TrafficRewardWeights weights;
  std::size_t driver_level = 0;
  std::vector<VehicleSpec> vehicles;  // used when `random` is empty
  std::optional<RandomRoster> random;

  /// Throws ConfigError on non-positive sizes or times, vehicles outside the
  /// road, negative weights or all-zero weights.
  void validate() const;
};

/// Five lanes, 25 vehicles on a 175 m ring.
TrafficScenario default_traffic_scenario();
/// Same with `vehicles` vehicles over `lanes` lanes.
TrafficScenario random_traffic_scenario(std::size_t vehicles, std::size_t lanes);

/// The road a scene is built on: a random roster sets the ring length to
/// ceil(vehicles / lanes) * spacing.
RoadConfig effective_road(const TrafficScenario& scenario);

TrafficWorld instantiate(const TrafficScenario& scenario, std::uint64_t seed);

TrafficScenario parse_traffic_scenario(const std::string& json_text);
TrafficScenario load_traffic_scenario(const std::filesystem::path& path);
std::string traffic_scenario_to_json(const TrafficScenario& scenario);

}  // namespace levelk::traffic
