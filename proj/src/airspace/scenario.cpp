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

#include "levelk/airspace/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "levelk/airspace/dynamics.hpp"
#include "levelk/common/error.hpp"
#include "levelk/common/random.hpp"
#include "levelk/levels/environment.hpp"

namespace levelk::airspace {
namespace {

using nlohmann::json;

double draw(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

Vec2 direction(double heading) { return velocity_components(heading, 1.0); }

AircraftState make_aircraft(int id, AircraftKind kind, double speed, std::vector<Vec2> waypoints) {
  AircraftState a;
  a.id = id;
  a.kind = kind;
  a.speed = speed;
  a.position = waypoints.front();
  a.heading = heading_of(waypoints[1] - waypoints[0]);
  a.desired_heading = a.heading;
  a.trajectory = std::move(waypoints);
  a.velocity = velocity_components(a.heading, speed);
  return a;
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void AirspaceScenario::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0)) throw ConfigError(std::string(what) + " must be positive");
  };
  positive(extent_x, "extent_km[0]");
  positive(extent_y, "extent_km[1]");
  positive(dt, "dt_s");
  positive(decision_interval, "decision_interval_s");
  positive(duration, "duration_s");
  if (decision_interval < dt) throw ConfigError("decision_interval_s must be at least dt_s");
  positive(regions.collision_radius, "regions.collision");
  positive(regions.separation_radius, "regions.separation");
  positive(regions.inner_radius, "regions.inner");
  positive(regions.outer_radius, "regions.outer");
  positive(regions.awareness_radius, "regions.awareness");
  if (!pilot_mix.empty()) {
    double sum = 0.0;
    for (double f : pilot_mix) {
      if (!(f >= 0.0)) throw ConfigError("pilot_mix fractions must be nonnegative");
      sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("pilot_mix must sum to 1");
  }
  if (!(regions.violation_rearm >= 0.0)) throw ConfigError("regions.violation_rearm must be nonnegative");
  if (saa.distance_horizon < 0.0 || saa.time_horizon < 0.0) throw ConfigError("SAA horizons must be nonnegative");
  positive(saa.threshold, "saa.threshold_nmi");
  bool any = false;
  for (double w : weights.w) {
    if (!(w >= 0.0)) throw ConfigError("reward weights must be nonnegative");
    any = any || w > 0.0;
  }
  if (!any) throw ConfigError("at least one reward weight must be positive");
  if (random) {
    if (random->manned + random->uas == 0) throw ConfigError("random traffic needs at least one aircraft");
    positive(random->uas_speed, "random.uas_speed_kmh");
    positive(random->manned_speed_min, "random.manned_speed_kmh");
    if (random->manned_speed_max < random->manned_speed_min) throw ConfigError("manned speed range is reversed");
    if (random->centre_spread < 0.0 || random->crossing_window < 0.0) throw ConfigError("random spreads must be nonnegative");
  } else {
    if (aircraft.empty()) throw ConfigError("scenario has no aircraft");
    for (const auto& a : aircraft) {
      positive(a.speed, "aircraft speed_kmh");
      if (a.trajectory.size() < 2) throw ConfigError("aircraft " + std::to_string(a.id) + " needs at least two waypoints");
    }
  }
}

AirspaceScenario default_airspace_scenario() {
  AirspaceScenario s;
  s.random = RandomTraffic{};
  return s;
}

AirspaceScenario encounter_airspace_scenario() {
  AirspaceScenario s = default_airspace_scenario();
  s.random->layout = TrafficLayout::kUasRoute;
  s.random->crossing_window = 60.0;
  return s;
}

AirspaceScenario large_airspace_scenario() {
  AirspaceScenario s;
  s.extent_x = 400.0;
  s.extent_y = 200.0;
  s.duration = 7200.0;
  RandomTraffic r;
  r.manned = 179;
  r.centre_spread = 60.0;
  r.crossing_window = 1200.0;
  s.random = r;
  return s;
}

static AirspaceWorld instantiate_scene(const AirspaceScenario& scenario, std::uint64_t seed) {
  AirspaceWorld world;
  world.regions = scenario.regions;
  world.saa = scenario.saa;
  if (!scenario.random) {
    world.aircraft = scenario.aircraft;
    std::stable_partition(world.aircraft.begin(), world.aircraft.end(),
                          [](const AircraftState& a) { return a.kind == AircraftKind::kManned; });
    for (auto& a : world.aircraft) a.level = scenario.pilot_level;
    return world;
  }
  const RandomTraffic& r = *scenario.random;
  Rng rng(seed);
  const Vec2 centre{scenario.extent_x / 2.0, scenario.extent_y / 2.0};
  const double half = scenario.extent_x / 2.0;
  auto crossing_point = [&] {
    return centre + Vec2{draw(rng, -r.centre_spread, r.centre_spread), draw(rng, -r.centre_spread, r.centre_spread)};
  };
  std::vector<AircraftState> uas;
  for (std::size_t k = 0; k < r.uas; ++k) {
    const Vec2 d = direction(draw(rng, 0.0, 360.0));
    const Vec2 c = crossing_point();
    uas.push_back(make_aircraft(0, AircraftKind::kUnmanned, r.uas_speed, {c - d * half, c, c + d * half}));
  }
  // Reference time at which traffic converges on the centre.
  const double t_cross = r.uas > 0 ? half / r.uas_speed * kSecondsPerHour : r.crossing_window;
  const bool on_route = r.layout == TrafficLayout::kUasRoute && !uas.empty();
  int id = 0;
  for (std::size_t k = 0; k < r.manned; ++k) {
    const Vec2 d = direction(draw(rng, 0.0, 360.0));
    Vec2 c;
    double t_meet = t_cross;
    if (on_route) {
      // Arc length along the UAS route; the route is straight through its
      // crossing point, so the point is entry + s along the first leg's direction.
      const auto& route = uas.front().trajectory;
      const double s = draw(rng, 0.15, 0.85) * 2.0 * half;
      c = route.front() + unit(route[1] - route.front()) * s;
      t_meet = s / r.uas_speed * kSecondsPerHour;
    } else {
      c = crossing_point();
    }
    const double speed = draw(rng, r.manned_speed_min, r.manned_speed_max);
    const double t = std::max(0.0, t_meet + draw(rng, -r.crossing_window, r.crossing_window));
    const double lead = std::max(speed * t / kSecondsPerHour, 1.0);
    AircraftState a = make_aircraft(id++, AircraftKind::kManned, speed, {c - d * lead, c + d * half});
    a.level = scenario.pilot_level;
    world.aircraft.push_back(std::move(a));
  }
  for (auto& a : uas) {
    a.id = id++;
    world.aircraft.push_back(std::move(a));
  }
  return world;
}

AirspaceScenario parse_airspace_scenario(const std::string& json_text) {
  AirspaceScenario s;
  try {
    const json j = json::parse(json_text);
    if (j.contains("extent_km")) {
      const auto& e = j.at("extent_km");
      s.extent_x = e.at(0).get<double>();
      s.extent_y = e.at(1).get<double>();
    }
    read(j, "dt_s", s.dt);
    read(j, "decision_interval_s", s.decision_interval);
    read(j, "duration_s", s.duration);
    read(j, "pilot_level", s.pilot_level);
    if (j.contains("pilot_mix")) s.pilot_mix = j.at("pilot_mix").get<std::vector<double>>();
    if (j.contains("regions")) {
      const auto& r = j.at("regions");
      auto nmi = [&](const char* key, double& out) {
        if (r.contains(key)) out = r.at(key).get<double>() * kKmPerNmi;
      };
      nmi("collision_nmi", s.regions.collision_radius);
      nmi("separation_nmi", s.regions.separation_radius);
      nmi("inner_nmi", s.regions.inner_radius);
      nmi("outer_nmi", s.regions.outer_radius);
      nmi("awareness_nmi", s.regions.awareness_radius);
      nmi("violation_rearm_nmi", s.regions.violation_rearm);
      read(r, "arrival_km", s.regions.arrival_radius);
      read(r, "lookahead_km", s.regions.trajectory_lookahead);
    }
    if (j.contains("saa")) {
      const auto& a = j.at("saa");
      if (a.contains("algorithm")) {
        const auto name = a.at("algorithm").get<std::string>();
        if (name == "saa1" || name == "1") s.saa.algorithm = SaaAlgorithm::kSaa1;
        else if (name == "saa2" || name == "2") s.saa.algorithm = SaaAlgorithm::kSaa2;
        else throw ConfigError("unknown SAA algorithm '" + name + "'");
      }
      read(a, "distance_horizon_km", s.saa.distance_horizon);
      read(a, "time_horizon_s", s.saa.time_horizon);
      if (a.contains("threshold_nmi")) s.saa.threshold = a.at("threshold_nmi").get<double>() * kKmPerNmi;
      read(a, "speed_envelope", s.saa.speed_envelope);
    }
    if (j.contains("weights")) {
      const auto w = j.at("weights").get<std::vector<double>>();
      if (w.size() != 6) throw ConfigError("weights must have 6 entries");
      std::copy(w.begin(), w.end(), s.weights.w.begin());
    }
    if (j.contains("random")) {
      RandomTraffic r;
      const auto& g = j.at("random");
      read(g, "manned", r.manned);
      read(g, "uas", r.uas);
      read(g, "centre_spread_km", r.centre_spread);
      read(g, "crossing_window_s", r.crossing_window);
      if (g.contains("manned_speed_kmh")) {
        r.manned_speed_min = g.at("manned_speed_kmh").at(0).get<double>();
        r.manned_speed_max = g.at("manned_speed_kmh").at(1).get<double>();
      }
      read(g, "uas_speed_kmh", r.uas_speed);
      if (g.contains("layout")) {
        const auto layout = g.at("layout").get<std::string>();
        if (layout == "centre") r.layout = TrafficLayout::kCentre;
        else if (layout == "uas_route") r.layout = TrafficLayout::kUasRoute;
        else throw ConfigError("unknown random.layout '" + layout + "'");
      }
      s.random = r;
    }
    if (j.contains("aircraft")) {
      int next_id = 0;
      for (const auto& a : j.at("aircraft")) {
        const auto kind_name = a.value("kind", std::string("manned"));
        AircraftKind kind;
        if (kind_name == "manned") kind = AircraftKind::kManned;
        else if (kind_name == "uas" || kind_name == "unmanned") kind = AircraftKind::kUnmanned;
        else throw ConfigError("unknown aircraft kind '" + kind_name + "'");
        std::vector<Vec2> wps;
        for (const auto& p : a.at("waypoints_km")) wps.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
        if (wps.size() < 2) throw ConfigError("aircraft needs at least two waypoints");
        AircraftState st = make_aircraft(a.value("id", next_id), kind, a.value("speed_kmh", kind == AircraftKind::kManned ? 500.0 : 250.0), wps);
        if (a.contains("heading_deg")) {
          st.heading = normalize_heading(a.at("heading_deg").get<double>());
          st.desired_heading = st.heading;
          st.velocity = velocity_components(st.heading, st.speed);
        }
        next_id = st.id + 1;
        s.aircraft.push_back(std::move(st));
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario JSON: ") + e.what());
  }
  s.validate();
  return s;
}

AirspaceScenario load_airspace_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_airspace_scenario(buffer.str());
}

std::string airspace_scenario_to_json(const AirspaceScenario& s) {
  json j;
  j["extent_km"] = {s.extent_x, s.extent_y};
  j["dt_s"] = s.dt;
  j["decision_interval_s"] = s.decision_interval;
  j["duration_s"] = s.duration;
  j["pilot_level"] = s.pilot_level;
  if (!s.pilot_mix.empty()) j["pilot_mix"] = s.pilot_mix;
  j["regions"] = {{"collision_nmi", s.regions.collision_radius / kKmPerNmi},
                  {"separation_nmi", s.regions.separation_radius / kKmPerNmi},
                  {"inner_nmi", s.regions.inner_radius / kKmPerNmi},
                  {"outer_nmi", s.regions.outer_radius / kKmPerNmi},
                  {"awareness_nmi", s.regions.awareness_radius / kKmPerNmi},
                  {"violation_rearm_nmi", s.regions.violation_rearm / kKmPerNmi},
                  {"arrival_km", s.regions.arrival_radius},
                  {"lookahead_km", s.regions.trajectory_lookahead}};
  j["saa"] = {{"algorithm", s.saa.algorithm == SaaAlgorithm::kSaa1 ? "saa1" : "saa2"},
              {"distance_horizon_km", s.saa.distance_horizon},
              {"time_horizon_s", s.saa.time_horizon},
              {"threshold_nmi", s.saa.threshold / kKmPerNmi},
              {"speed_envelope", s.saa.speed_envelope}};
  j["weights"] = s.weights.w;
  if (s.random) {
    const RandomTraffic& r = *s.random;
    j["random"] = {{"layout", r.layout == TrafficLayout::kUasRoute ? "uas_route" : "centre"},
                   {"manned", r.manned},
                   {"uas", r.uas},
                   {"centre_spread_km", r.centre_spread},
                   {"crossing_window_s", r.crossing_window},
                   {"manned_speed_kmh", {r.manned_speed_min, r.manned_speed_max}},
                   {"uas_speed_kmh", r.uas_speed}};
  } else {
    json list = json::array();
    for (const auto& a : s.aircraft) {
      json wps = json::array();
      for (const Vec2& p : a.trajectory) wps.push_back({p.x, p.y});
      list.push_back({{"id", a.id},
                      {"kind", a.kind == AircraftKind::kManned ? "manned" : "uas"},
                      {"speed_kmh", a.speed},
                      {"heading_deg", a.heading},
                      {"waypoints_km", wps}});
    }
    j["aircraft"] = list;
  }
  return j.dump(2);
}

AirspaceWorld instantiate(const AirspaceScenario& scenario, std::uint64_t seed) {
  scenario.validate();
  AirspaceWorld world = instantiate_scene(scenario, seed);
  if (scenario.pilot_mix.empty()) return world;
  std::vector<AircraftState*> manned;
  for (auto& a : world.aircraft) {
    if (a.kind == AircraftKind::kManned) manned.push_back(&a);
  }
  const auto counts = levels::largest_remainder(manned.size(), scenario.pilot_mix);
  std::vector<std::size_t> dealt;
  for (std::size_t level = 0; level < counts.size(); ++level) dealt.insert(dealt.end(), counts[level], level);
  Rng rng(derive_seed(seed, 2));
  for (std::size_t i = dealt.size(); i > 1; --i) {
    const auto j = std::min(i - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i)));
    std::swap(dealt[i - 1], dealt[j]);
  }
  for (std::size_t i = 0; i < manned.size(); ++i) manned[i]->level = dealt[i];
  return world;
}

}  // namespace levelk::airspace
