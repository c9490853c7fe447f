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

#include "levelk/traffic/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "levelk/common/error.hpp"
#include "levelk/common/random.hpp"

namespace levelk::traffic {
namespace {

using nlohmann::json;

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

VehicleState make_vehicle(int id, std::size_t lane, double x, double speed, const RoadConfig& road) {
  VehicleState v;
  v.id = id;
  v.lane = lane;
  v.x = x;
  v.y = road.lane_centre(lane);
  v.v_x = speed;
  v.length = road.vehicle_length;
  return v;
}

}  // namespace

void TrafficScenario::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0)) throw ConfigError(std::string(what) + " must be positive");
  };
  if (road.lanes == 0) throw ConfigError("lanes must be positive");
  positive(road.lane_width, "lane_width_m");
  positive(road.vehicle_length, "vehicle_length_m");
  positive(road.vehicle_width, "vehicle_width_m");
  positive(road.lane_change_time, "lane_change_time_s");
  positive(dt, "dt_s");
  positive(decision_interval, "decision_interval_s");
  positive(duration, "duration_s");
  if (decision_interval < dt) throw ConfigError("decision_interval_s must be at least dt_s");
  if (!(road.close_distance <= road.far_distance)) throw ConfigError("close distance exceeds far distance");
  bool any = false;
  for (double w : weights.w) {
    if (!(w >= 0.0)) throw ConfigError("reward weights must be nonnegative");
    any = any || w > 0.0;
  }
  if (!any) throw ConfigError("at least one reward weight must be positive");
  if (random) {
    if (random->vehicles == 0) throw ConfigError("random roster needs vehicles");
    positive(random->spacing, "random.spacing_m");
    if (random->speed_min < 0.0 || random->speed_max < random->speed_min) throw ConfigError("bad random speed range");
  } else {
    positive(road.length, "road_length_m");
    if (vehicles.empty()) throw ConfigError("scenario has no vehicles");
    for (const auto& v : vehicles) {
      if (v.lane >= road.lanes) throw ConfigError("vehicle lane " + std::to_string(v.lane) + " is off the road");
      if (v.speed < 0.0) throw ConfigError("vehicle speed must be nonnegative");
    }
  }
}

TrafficScenario default_traffic_scenario() { return random_traffic_scenario(25, 5); }

TrafficScenario random_traffic_scenario(std::size_t vehicles, std::size_t lanes) {
  TrafficScenario s;
  s.road.lanes = lanes;
  RandomRoster r;
  r.vehicles = vehicles;
  s.random = r;
  return s;
}

RoadConfig effective_road(const TrafficScenario& scenario) {
  RoadConfig road = scenario.road;
  if (scenario.random) {
    const std::size_t per_lane = (scenario.random->vehicles + road.lanes - 1) / road.lanes;
    road.length = static_cast<double>(per_lane) * scenario.random->spacing;
  }
  return road;
}

TrafficWorld instantiate(const TrafficScenario& scenario, std::uint64_t seed) {
  scenario.validate();
  TrafficWorld world;
  world.road = effective_road(scenario);
  if (!scenario.random) {
    int id = 0;
    for (const auto& spec : scenario.vehicles) {
      VehicleState v = make_vehicle(id++, spec.lane, std::fmod(spec.x, world.road.length), spec.speed, world.road);
      v.level = spec.level.value_or(scenario.driver_level);
      world.vehicles.push_back(v);
    }
    return world;
  }
  const RandomRoster& r = *scenario.random;
  const std::size_t lanes = world.road.lanes;
  Rng rng(seed);
  const double jitter = 0.2 * r.spacing;
  for (std::size_t k = 0; k < r.vehicles; ++k) {
    const std::size_t lane = k % lanes;
    const std::size_t slot = k / lanes;
    // Lanes are staggered by half a spacing so neighbours are not abreast.
    const double base = (static_cast<double>(slot) + 0.5 * static_cast<double>(lane % 2)) * r.spacing;
    const double x = std::fmod(base + jitter * (uniform01(rng) - 0.5), world.road.length);
    const double speed = r.speed_min + (r.speed_max - r.speed_min) * uniform01(rng);
    VehicleState v = make_vehicle(static_cast<int>(k), lane, x < 0.0 ? x + world.road.length : x, speed, world.road);
    v.level = scenario.driver_level;
    world.vehicles.push_back(v);
  }
  return world;
}

TrafficScenario parse_traffic_scenario(const std::string& json_text) {
  TrafficScenario s;
  try {
    const json j = json::parse(json_text);
    read(j, "lanes", s.road.lanes);
    read(j, "road_length_m", s.road.length);
    read(j, "lane_width_m", s.road.lane_width);
    read(j, "vehicle_length_m", s.road.vehicle_length);
    read(j, "vehicle_width_m", s.road.vehicle_width);
    read(j, "lane_change_time_s", s.road.lane_change_time);
    read(j, "close_m", s.road.close_distance);
    read(j, "far_m", s.road.far_distance);
    read(j, "motion_threshold_mps", s.road.motion_threshold);
    read(j, "dt_s", s.dt);
    read(j, "decision_interval_s", s.decision_interval);
    read(j, "duration_s", s.duration);
    read(j, "driver_level", s.driver_level);
    if (j.contains("weights")) {
      const auto w = j.at("weights").get<std::vector<double>>();
      if (w.size() != 4) throw ConfigError("weights must have 4 entries");
      std::copy(w.begin(), w.end(), s.weights.w.begin());
    }
    if (j.contains("random")) {
      RandomRoster r;
      const auto& g = j.at("random");
      read(g, "vehicles", r.vehicles);
      read(g, "spacing_m", r.spacing);
      if (g.contains("speed_mps")) {
        r.speed_min = g.at("speed_mps").at(0).get<double>();
        r.speed_max = g.at("speed_mps").at(1).get<double>();
      }
      s.random = r;
    }
    if (j.contains("vehicles")) {
      for (const auto& v : j.at("vehicles")) {
        VehicleSpec spec;
        spec.lane = v.at("lane").get<std::size_t>();
        spec.x = v.at("x_m").get<double>();
        read(v, "speed_mps", spec.speed);
        if (v.contains("level")) spec.level = v.at("level").get<std::size_t>();
        s.vehicles.push_back(spec);
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario JSON: ") + e.what());
  }
  s.validate();
  return s;
}

TrafficScenario load_traffic_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_traffic_scenario(buffer.str());
}

std::string traffic_scenario_to_json(const TrafficScenario& s) {
  json j;
  j["lanes"] = s.road.lanes;
  j["road_length_m"] = s.road.length;
  j["lane_width_m"] = s.road.lane_width;
  j["vehicle_length_m"] = s.road.vehicle_length;
  j["vehicle_width_m"] = s.road.vehicle_width;
  j["lane_change_time_s"] = s.road.lane_change_time;
  j["close_m"] = s.road.close_distance;
  j["far_m"] = s.road.far_distance;
  j["motion_threshold_mps"] = s.road.motion_threshold;
  j["dt_s"] = s.dt;
  j["decision_interval_s"] = s.decision_interval;
  j["duration_s"] = s.duration;
  j["driver_level"] = s.driver_level;
  j["weights"] = s.weights.w;
  if (s.random) {
    j["random"] = {{"vehicles", s.random->vehicles},
                   {"spacing_m", s.random->spacing},
                   {"speed_mps", {s.random->speed_min, s.random->speed_max}}};
  } else {
    json list = json::array();
    for (const auto& v : s.vehicles) {
      json e = {{"lane", v.lane}, {"x_m", v.x}, {"speed_mps", v.speed}};
      if (v.level) e["level"] = *v.level;
      list.push_back(e);
    }
    j["vehicles"] = list;
  }
  return j.dump(2);
}

}  // namespace levelk::traffic
