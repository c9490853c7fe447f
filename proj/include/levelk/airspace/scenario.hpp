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

#include "levelk/airspace/types.hpp"

namespace levelk::airspace {

/// Random encounter generator. Every aircraft flies a straight reference
/// through a crossing point; the UAS has its crossing point (near the sector
/// centre) as an intermediate waypoint.
///
/// kCentre: manned crossing points lie in the centre box and each manned
/// aircraft reaches its point within `crossing_window` seconds of the UAS
/// reaching the centre, so manned aircraft also meet each other.
/// kUasRoute: each manned crossing point lies on the first UAS route (away
/// from its ends) and the manned aircraft reaches it within
/// `crossing_window` seconds of the UAS, so every manned aircraft is a UAS
/// encounter and the encounters are spread along the route.
enum class TrafficLayout { kCentre, kUasRoute };

struct RandomTraffic {
  TrafficLayout layout = TrafficLayout::kCentre;
  std::size_t manned = 10;
  std::size_t uas = 1;
  double centre_spread = 10.0;     // km, half-width of the crossing-point box
  double crossing_window = 300.0;  // s
  double manned_speed_min = 450.0; // km/h
  double manned_speed_max = 550.0;
  double uas_speed = 250.0;
};

struct AirspaceScenario {
  double extent_x = 100.0;  // km
  double extent_y = 50.0;
  double dt = 1.0;                  // s
  double decision_interval = 6.0;   // s
  double duration = 1800.0;         // s
  RegionConfig regions;
  SaaConfig saa;
  AirspaceRewardWeights weights;
  std::size_t pilot_level = 0;
  /// Optional fraction of manned aircraft per level (index = level). When
  /// set it overrides pilot_level: counts follow largest-remainder rounding
  /// and the levels are dealt to the manned aircraft in a seeded random order.
  std::vector<double> pilot_mix;
  std::vector<AircraftState> aircraft;  // explicit aircraft; used when `random` is empty
  std::optional<RandomTraffic> random;

  /// Throws ConfigError for non-positive times, extents or radii, negative
  /// weights, or an empty or malformed aircraft list.
  void validate() const;
};

/// Desk-scale default: 10 manned aircraft and one UAS over 100 km x 50 km,
/// centre layout.
AirspaceScenario default_airspace_scenario();

/// Default extents and counts with the UAS-route layout and a 60 s window:
/// the scene used for SAA horizon sweeps and the default pilot training scene.
AirspaceScenario encounter_airspace_scenario();

/// The documented large configuration: 179 manned aircraft and one UAS over
/// 400 km x 200 km. Not used by the tests.
AirspaceScenario large_airspace_scenario();

/// Initial world for `seed` (the seed only matters for random traffic).
/// Manned aircraft come first, so index 0 is a manned aircraft whenever
/// there is one.
AirspaceWorld instantiate(const AirspaceScenario& scenario, std::uint64_t seed);

/// JSON form; radii are given in nmi, distances in km, speeds in km/h,
/// times in s. Missing keys keep their defaults. Throws ConfigError.
AirspaceScenario parse_airspace_scenario(const std::string& json_text);
AirspaceScenario load_airspace_scenario(const std::filesystem::path& path);
std::string airspace_scenario_to_json(const AirspaceScenario& scenario);

}  // namespace levelk::airspace
