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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "levelk/common/error.hpp"
#include "levelk/common/random.hpp"
#include "levelk/traffic/domain.hpp"
#include "levelk/traffic/dynamics.hpp"
#include "levelk/traffic/observation.hpp"
#include "levelk/traffic/reward.hpp"
#include "levelk/traffic/scenario.hpp"

namespace levelk::traffic {
namespace {

VehicleState car(int id, std::size_t lane, double x, double v, const RoadConfig& road = {}) {
  VehicleState s;
  s.id = id;
  s.lane = lane;
  s.x = x;
  s.y = road.lane_centre(lane);
  s.v_x = v;
  return s;
}

TrafficWorld road_with(std::vector<VehicleState> cars) {
  TrafficWorld w;
  w.vehicles = std::move(cars);
  return w;
}

TEST(TrafficObservation, DistanceClasses) {
  EXPECT_EQ(classify_distance(5.0), kClose);
  EXPECT_EQ(classify_distance(20.0), kNominal);
  EXPECT_EQ(classify_distance(11.0), kNominal);
  EXPECT_EQ(classify_distance(27.0), kNominal);
  EXPECT_EQ(classify_distance(27.01), kFar);
  EXPECT_THROW(classify_distance(-1.0), std::invalid_argument);
}

TEST(TrafficObservation, MotionClasses) {
  EXPECT_EQ(classify_motion(2.0), kApproaching);
  EXPECT_EQ(classify_motion(0.0), kStable);
  EXPECT_EQ(classify_motion(-2.0), kDistancing);
  EXPECT_EQ(classify_motion(0.5), kStable);
}

TEST(TrafficObservation, EmptyRoadIsFarAndStable) {
  const auto obs = encode_driver_observation(road_with({car(0, 2, 100, 20)}), 0);
  DriverObservation expected;
  for (const auto& s : obs.slots) EXPECT_EQ(s, (SlotObservation{kFar, kStable}));
  EXPECT_EQ(driver_observation_index(obs), driver_observation_index(expected));
  // Each digit is far * 3 + stable = 7.
  EXPECT_EQ(driver_observation_index(obs), 7u * (1 + 9 + 81 + 729 + 6561));
}

TEST(TrafficObservation, CloseApproachingFrontCar) {
  const auto obs = encode_driver_observation(road_with({car(0, 2, 100, 20), car(1, 2, 108, 17)}), 0);
  EXPECT_EQ(obs.slots[kFront], (SlotObservation{kClose, kApproaching}));
  EXPECT_EQ(obs.slots[kFrontLeft], (SlotObservation{kFar, kStable}));
}

TEST(TrafficObservation, ExhaustiveBijection) {
  EXPECT_EQ(kNumDriverStates, 59049u);
  for (std::size_t s = 0; s < kNumDriverStates; ++s) {
    ASSERT_EQ(driver_observation_index(decode_driver_observation(s)), s);
  }
  EXPECT_THROW(decode_driver_observation(kNumDriverStates), std::out_of_range);
}

TEST(TrafficObservation, SlotsAndRearMotionSign) {
  // Rear-left car 15 m behind and faster: it is catching up.
  TrafficWorld w = road_with({car(0, 2, 100, 20), car(1, 1, 85, 23), car(2, 3, 130, 25), car(3, 3, 60, 20),
                              car(4, 2, 90, 30)});
  const auto obs = encode_driver_observation(w, 0);
  EXPECT_EQ(obs.slots[kRearLeft], (SlotObservation{kNominal, kApproaching}));
  EXPECT_EQ(obs.slots[kFrontRight], (SlotObservation{kFar, kDistancing}));
  EXPECT_EQ(obs.slots[kRearRight], (SlotObservation{kFar, kStable}));
  // The same-lane car behind is not part of the neighbourhood.
  EXPECT_EQ(obs.slots[kFront], (SlotObservation{kFar, kStable}));
}

TEST(TrafficObservation, RingWrapsAround) {
  RoadConfig road;
  road.length = 200.0;
  TrafficWorld w = road_with({car(0, 1, 195, 20), car(1, 1, 15, 20)});
  w.road = road;
  EXPECT_EQ(encode_driver_observation(w, 0).slots[kFront], (SlotObservation{kNominal, kStable}));
}

TEST(TrafficObservation, MidChangeUsesTrueLateralPosition) {
  // Ego starts in lane 1 heading for lane 2; a car sits 15 m ahead in lane 2
  // and another 15 m ahead in lane 1.
  TrafficWorld w = road_with({car(0, 1, 100, 20), car(1, 2, 115, 20), car(2, 1, 115, 20)});
  ASSERT_TRUE(start_lane_change(w.vehicles[0], false, w.road));
  for (int k = 0; k < 12; ++k) w.vehicles[0] = step_vehicle(w.vehicles[0], 0.0, 0.1);
  // y = 5.55 + 12 * 0.185 = 7.77 m, past the 7.4 m lane boundary.
  const double y = w.vehicles[0].y;
  EXPECT_NEAR(y, 7.77, 1e-9);
  ASSERT_EQ(static_cast<std::size_t>(std::floor(y / 3.7)), 2u);
  w.vehicles[1].x = w.vehicles[0].x + 15.0;
  w.vehicles[2].x = w.vehicles[0].x + 15.0;
  const auto obs = encode_driver_observation(w, 0);
  EXPECT_EQ(obs.slots[kFront].distance, kNominal);
  EXPECT_EQ(obs.slots[kFrontLeft].distance, kNominal);
  EXPECT_EQ(obs.slots[kFrontRight].distance, kFar);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

TEST(TrafficDynamics, MaintainDrawStatistics) {
  Rng rng(11);
  const int n = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = sample_acceleration(kMaintain, rng);
    sum += a;
    sq += a * a;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  EXPECT_NEAR(mean, 0.0, 0.002);
  EXPECT_NEAR(sd, 0.075, 0.01);
}

TEST(TrafficDynamics, UniformSupports) {
  Rng rng(12);
  for (int i = 0; i < 20000; ++i) {
    const double up = sample_acceleration(kAccelerate, rng);
    EXPECT_GE(up, 0.5);
    EXPECT_LE(up, 2.5);
    const double down = sample_acceleration(kDecelerate, rng);
    EXPECT_GE(down, -2.5);
    EXPECT_LE(down, -0.5);
  }
}

TEST(TrafficDynamics, HardDecelerateIsHalfNormal) {
  Rng rng(13);
  const int n = 100000;
  std::vector<double> excess(n);
  for (int i = 0; i < n; ++i) {
    const double a = sample_acceleration(kHardDecelerate, rng);
    ASSERT_LT(a, 0.0);
    ASSERT_LE(a, -3.5 + 5 * 0.3);
    ASSERT_LE(a, -3.5);
    excess[i] = -3.5 - a;
  }
  std::sort(excess.begin(), excess.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double cdf = 2.0 * normal_cdf(excess[i] / 0.3) - 1.0;
    ks = std::max({ks, std::abs(cdf - static_cast<double>(i) / n), std::abs(cdf - static_cast<double>(i + 1) / n)});
  }
  EXPECT_LT(ks, 0.01);
  Rng rng2(14);
  for (int i = 0; i < 1000; ++i) EXPECT_GE(sample_acceleration(kHardAccelerate, rng2), 3.5);
}

TEST(TrafficDynamics, LaneActionsHaveNoAcceleration) {
  Rng rng(1);
  EXPECT_THROW(sample_acceleration(kLaneLeft, rng), std::invalid_argument);
  EXPECT_THROW(sample_acceleration(kLaneRight, rng), std::invalid_argument);
}

TEST(TrafficDynamics, KinematicStep) {
  VehicleState s = car(0, 0, 0.0, 10.0);
  const VehicleState n = step_vehicle(s, 2.0, 0.1);
  EXPECT_NEAR(n.x, 1.01, 1e-12);
  EXPECT_NEAR(n.v_x, 10.2, 1e-12);
  const VehicleState u = step_vehicle(s, 0.0, 0.1);
  EXPECT_NEAR(u.x, 1.0, 1e-12);
  EXPECT_EQ(u.v_x, 10.0);
}

TEST(TrafficDynamics, BrakingStopsWithoutReversing) {
  VehicleState s = car(0, 0, 0.0, 0.1);
  const VehicleState n = step_vehicle(s, -3.5, 0.1);
  const double t_stop = 0.1 / 3.5;
  const double oracle = 0.1 * t_stop - 0.5 * 3.5 * t_stop * t_stop;
  EXPECT_EQ(n.v_x, 0.0);
  EXPECT_NEAR(n.x, oracle, 1e-12);
  const VehicleState m = step_vehicle(n, -3.5, 0.1);
  EXPECT_EQ(m.v_x, 0.0);
  EXPECT_EQ(m.x, n.x);
}

TEST(TrafficDynamics, LaneChangeOffTheEdgeIsRejected) {
  TrafficWorld w = road_with({car(0, 0, 50, 20)});
  const VehicleState before = w.vehicles[0];
  Rng rng(2);
  EXPECT_EQ(apply_driver_action(w, 0, kLaneLeft, rng), static_cast<std::size_t>(kMaintain));
  EXPECT_EQ(w.rejected_lane_changes, 1u);
  EXPECT_FALSE(w.vehicles[0].changing_lane());
  EXPECT_EQ(w.vehicles[0].lane, before.lane);
  EXPECT_EQ(w.vehicles[0].y, before.y);
  VehicleState last = car(1, 4, 0, 10);
  EXPECT_FALSE(start_lane_change(last, false, w.road));
}

TEST(TrafficDynamics, LaneChangeTakesExactlyTwoSeconds) {
  TrafficWorld w = road_with({car(0, 2, 50, 20)});
  Rng rng(3);
  ASSERT_EQ(apply_driver_action(w, 0, kLaneRight, rng), static_cast<std::size_t>(kLaneRight));
  // A second request is rejected while the first is in progress.
  EXPECT_FALSE(start_lane_change(w.vehicles[0], true, w.road));
  int steps = 0;
  while (w.vehicles[0].changing_lane()) {
    step_traffic(w, 0.1);
    ++steps;
    EXPECT_EQ(w.vehicles[0].v_x, 20.0);
    ASSERT_LT(steps, 100);
  }
  EXPECT_EQ(steps, 20);
  EXPECT_EQ(w.vehicles[0].lane, 3u);
  EXPECT_DOUBLE_EQ(w.vehicles[0].y, w.road.lane_centre(3));
}

bool rectangles_overlap(const VehicleState& a, const VehicleState& b, double width) {
  const double ax0 = a.x - a.length / 2, ax1 = a.x + a.length / 2;
  const double bx0 = b.x - b.length / 2, bx1 = b.x + b.length / 2;
  const double ay0 = a.y - width / 2, ay1 = a.y + width / 2;
  const double by0 = b.y - width / 2, by1 = b.y + width / 2;
  return ax0 < bx1 && bx0 < ax1 && ay0 < by1 && by0 < ay1;
}

TEST(TrafficCollision, SameLaneGap) {
  EXPECT_EQ(detect_collisions(road_with({car(0, 1, 50, 20), car(1, 1, 53, 20)})).size(), 1u);
  EXPECT_TRUE(detect_collisions(road_with({car(0, 1, 50, 20), car(1, 1, 56, 20)})).empty());
}

TEST(TrafficCollision, AdjacentLanesAbreast) {
  EXPECT_TRUE(detect_collisions(road_with({car(0, 1, 50, 20), car(1, 2, 50, 20)})).empty());
}

TEST(TrafficCollision, LateralOverlapDuringChange) {
  TrafficWorld w = road_with({car(0, 1, 50, 20), car(1, 2, 52, 20)});
  w.vehicles[0].y = 7.4;
  w.vehicles[0].target_lane = 2;
  const auto pairs = detect_collisions(w);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_TRUE(rectangles_overlap(w.vehicles[0], w.vehicles[1], w.road.vehicle_width));
  // Against the oracle on a grid of placements.
  for (double dy = 0.0; dy < 4.0; dy += 0.25) {
    for (double dx = 0.0; dx < 8.0; dx += 0.5) {
      TrafficWorld g = road_with({car(0, 1, 50, 20), car(1, 1, 50 + dx + 0.1, 20)});
      g.vehicles[1].y += dy + 0.05;
      EXPECT_EQ(!detect_collisions(g).empty(), rectangles_overlap(g.vehicles[0], g.vehicles[1], 2.0))
          << dx << " " << dy;
    }
  }
}

TEST(TrafficReward, Encodings) {
  TrafficRewardTerms t;
  t.collision = -1.0;
  EXPECT_DOUBLE_EQ(combine_reward(t, {}), -100.0);

  const TrafficWorld w = road_with({car(0, 2, 100, 20), car(1, 0, 300, 20)});
  EXPECT_DOUBLE_EQ(driver_reward(w, w, 0, kMaintain, {}), 1.0);

  const TrafficWorld nominal = road_with({car(0, 2, 100, 20), car(1, 2, 120, 20)});
  EXPECT_DOUBLE_EQ(driver_reward(nominal, nominal, 0, kLaneLeft, {}), -1.0);
  EXPECT_DOUBLE_EQ(effort_of(kAccelerate), -0.25);
  EXPECT_DOUBLE_EQ(effort_of(kHardDecelerate), -0.5);
}

TEST(TrafficReward, SpeedDeviationTerm) {
  const TrafficWorld w = road_with({car(0, 2, 100, 15), car(1, 0, 300, 25)});
  const auto t = driver_reward_terms(w, w, 0, kMaintain);
  EXPECT_DOUBLE_EQ(t.speed, -0.25);
}

TEST(TrafficReward, TranslationInvariant) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    TrafficWorld w;
    w.road.length = 400.0;
    for (int i = 0; i < 12; ++i) {
      w.vehicles.push_back(car(i, static_cast<std::size_t>(i % 5), 400.0 * uniform01(rng), 10 + 10 * uniform01(rng)));
    }
    TrafficWorld shifted = w;
    const double shift = 400.0 * uniform01(rng);
    for (auto& v : shifted.vehicles) v.x = std::fmod(v.x + shift, 400.0);
    for (std::size_t a = 0; a < kNumTrafficActions; ++a) {
      EXPECT_NEAR(driver_reward(w, w, 0, a, {}), driver_reward(shifted, shifted, 0, a, {}), 1e-9);
    }
  }
}

TEST(TrafficScenario, JsonRoundTripAndErrors) {
  TrafficScenario s = random_traffic_scenario(15, 3);
  s.weights.w = {50, 1, 2, 1};
  const TrafficScenario r = parse_traffic_scenario(traffic_scenario_to_json(s));
  EXPECT_EQ(traffic_scenario_to_json(r), traffic_scenario_to_json(s));
  EXPECT_THROW(parse_traffic_scenario("{\"lanes\": 0}"), ConfigError);
  EXPECT_THROW(parse_traffic_scenario("{\"weights\": [0, 0, 0, 0]}"), ConfigError);
  EXPECT_THROW(parse_traffic_scenario("{\"vehicles\": [{\"lane\": 9, \"x_m\": 0}]}"), ConfigError);
  EXPECT_THROW(parse_traffic_scenario("not json"), ConfigError);
  const auto explicit_roster =
      parse_traffic_scenario("{\"lanes\": 2, \"road_length_m\": 100, \"vehicles\": [{\"lane\": 1, \"x_m\": 5, "
                             "\"speed_mps\": 9, \"level\": 2}]}");
  const TrafficWorld w = instantiate(explicit_roster, 1);
  ASSERT_EQ(w.vehicles.size(), 1u);
  EXPECT_EQ(w.vehicles[0].level, 2u);
  EXPECT_DOUBLE_EQ(w.vehicles[0].y, w.road.lane_centre(1));
}

TEST(TrafficScenario, RandomRosterIsSeededAndClear) {
  const TrafficScenario s = random_traffic_scenario(125, 5);
  const TrafficWorld a = instantiate(s, 7), b = instantiate(s, 7);
  ASSERT_EQ(a.vehicles.size(), 125u);
  EXPECT_DOUBLE_EQ(a.road.length, 25 * 35.0);
  for (std::size_t i = 0; i < a.vehicles.size(); ++i) EXPECT_EQ(a.vehicles[i].x, b.vehicles[i].x);
  EXPECT_TRUE(detect_collisions(a).empty());
}

std::vector<const rl::StochasticPolicy*> uniform_levels(const rl::StochasticPolicy& pi) { return {&pi}; }

TEST(TrafficProperties, SpeedsStayNonnegativeAndCountIsConserved) {
  const TrafficScenario s = random_traffic_scenario(125, 5);
  TrafficWorld w = instantiate(s, 21);
  rl::StochasticPolicy uniform(kNumDriverStates, kNumTrafficActions);
  const std::vector<const rl::StochasticPolicy*> policies(w.vehicles.size(), &uniform);
  Rng rng(22);
  std::set<int> ids;
  for (const auto& v : w.vehicles) ids.insert(v.id);
  for (int decision = 0; decision < 60; ++decision) {
    driver_decisions(w, policies, rng);
    for (int k = 0; k < 10; ++k) {
      step_traffic(w, 0.1);
      for (const auto& v : w.vehicles) {
        ASSERT_GE(v.v_x, 0.0);
        ASSERT_GE(v.x, 0.0);
        ASSERT_LT(v.x, w.road.length);
      }
    }
  }
  ASSERT_EQ(w.vehicles.size(), 125u);
  std::set<int> after;
  for (const auto& v : w.vehicles) after.insert(v.id);
  EXPECT_EQ(ids, after);
}

TEST(TrafficProperties, LevelZeroOnlyBrakesOrMaintains) {
  const auto anchor = traffic_anchor_policy();
  const TrafficScenario s = random_traffic_scenario(60, 5);
  TrafficWorld w = instantiate(s, 31);
  const std::vector<const rl::StochasticPolicy*> policies(w.vehicles.size(), &anchor);
  Rng rng(32);
  std::set<std::size_t> seen;
  for (int decision = 0; decision < 100; ++decision) {
    driver_decisions(w, policies, rng, [&](std::size_t, std::size_t, std::size_t a) { seen.insert(a); });
    for (int k = 0; k < 10; ++k) step_traffic(w, 0.1);
  }
  for (std::size_t a : seen) {
    EXPECT_TRUE(a == kMaintain || a == kDecelerate || a == kHardDecelerate) << action_name(a);
  }
  EXPECT_TRUE(seen.count(kMaintain));
}

TEST(TrafficAnchor, FollowsTheFrontSlot) {
  const auto pi = traffic_anchor_policy();
  DriverObservation obs;
  EXPECT_EQ(pi.greedy_action(driver_observation_index(obs)), static_cast<std::size_t>(kMaintain));
  obs.slots[kFront] = {kClose, kApproaching};
  EXPECT_EQ(pi.greedy_action(driver_observation_index(obs)), static_cast<std::size_t>(kHardDecelerate));
  obs.slots[kFront] = {kClose, kDistancing};
  EXPECT_EQ(pi.greedy_action(driver_observation_index(obs)), static_cast<std::size_t>(kDecelerate));
  obs.slots[kFrontLeft] = {kClose, kApproaching};
  obs.slots[kFront] = {kNominal, kApproaching};
  EXPECT_EQ(pi.greedy_action(driver_observation_index(obs)), static_cast<std::size_t>(kMaintain));
}

TEST(TrafficEnvironment, DeterministicAndLocksDuringLaneChange) {
  const auto anchor = traffic_anchor_policy();
  levels::OpponentSetup setup;
  setup.level_policies = uniform_levels(anchor);
  TrafficScenario s = random_traffic_scenario(15, 3);
  TrafficEnvironment a(s, setup), b(s, setup);
  EXPECT_EQ(a.reset(9), b.reset(9));
  // Ego is vehicle 0 in lane 0; a right change spans two decision intervals.
  const auto r = a.step(kLaneRight);
  EXPECT_NEAR(a.world().time, 2.0, 1e-9);
  EXPECT_EQ(a.world().vehicles[0].lane, 1u);
  const auto q = b.step(kLaneRight);
  EXPECT_EQ(r.next_state, q.next_state);
  EXPECT_EQ(r.reward, q.reward);
  const auto m = a.step(kMaintain);
  EXPECT_NEAR(a.world().time, 3.0, 1e-9);
  (void)m;
}

TEST(TrafficEnvironment, EpisodeEndsAtDuration) {
  const auto anchor = traffic_anchor_policy();
  levels::OpponentSetup setup;
  setup.level_policies = uniform_levels(anchor);
  TrafficScenario s = random_traffic_scenario(6, 3);
  s.duration = 5.0;
  TrafficEnvironment env(s, setup);
  env.reset(1);
  int steps = 0;
  levels::StepResult r;
  do {
    r = env.step(kMaintain);
    ++steps;
  } while (!r.done && steps < 100);
  EXPECT_TRUE(r.done);
  EXPECT_LE(steps, 5);
}

TEST(TrafficSimulation, LogsDecisionFrames) {
  const auto anchor = traffic_anchor_policy();
  TrafficScenario s = random_traffic_scenario(10, 2);
  s.duration = 3.0;
  std::vector<TrafficTrajectoryRow> rows;
  const auto stats = simulate_traffic(s, {&anchor}, 4, &rows);
  EXPECT_EQ(rows.size(), 30u);
  EXPECT_NEAR(stats.duration, 3.0, 1e-9);
  EXPECT_GT(stats.mean_speed, 0.0);
  EXPECT_THROW(simulate_traffic(s, {}, 4), RegistryError);
}

TEST(TrafficDomain, FeaturesAndSizes) {
  const TrafficDomain d;
  EXPECT_EQ(d.name(), "traffic");
  EXPECT_EQ(d.num_states(), 59049u);
  EXPECT_EQ(d.num_actions(), 7u);
  const auto f = d.features(kNumDriverStates - 1);
  ASSERT_EQ(f.size(), d.feature_width());
  for (double x : f) EXPECT_DOUBLE_EQ(x, 1.0);
}

}  // namespace
}  // namespace levelk::traffic
