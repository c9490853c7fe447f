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

#include "levelk/traffic/domain.hpp"

#include <cmath>
#include <set>

#include "levelk/common/error.hpp"
#include "levelk/traffic/dynamics.hpp"
#include "levelk/traffic/observation.hpp"
#include "levelk/traffic/reward.hpp"

namespace levelk::traffic {
namespace {

std::size_t substeps_of(const TrafficScenario& s) {
  return static_cast<std::size_t>(std::llround(s.decision_interval / s.dt));
}

bool ego_in(const std::vector<std::pair<std::size_t, std::size_t>>& pairs, std::size_t ego) {
  for (const auto& [i, j] : pairs) {
    if (i == ego || j == ego) return true;
  }
  return false;
}

}  // namespace

rl::StochasticPolicy traffic_anchor_policy() {
  rl::StochasticPolicy pi(kNumDriverStates, kNumTrafficActions);
  for (std::size_t s = 0; s < kNumDriverStates; ++s) {
    const SlotObservation front = decode_driver_observation(s).slots[kFront];
    std::size_t action = static_cast<std::size_t>(TrafficAction::kMaintain);
    if (front.distance == DistanceClass::kClose) {
      action = front.motion == MotionClass::kApproaching ? static_cast<std::size_t>(TrafficAction::kHardDecelerate)
                                                         : static_cast<std::size_t>(TrafficAction::kDecelerate);
    }
    auto row = pi.mutable_row(s);
    std::fill(row.begin(), row.end(), 0.0);
    row[action] = 1.0;
  }
  return pi;
}

std::vector<int> driver_decisions(TrafficWorld& world, const std::vector<const rl::StochasticPolicy*>& policies,
                                  Rng& rng, const std::function<void(std::size_t, std::size_t, std::size_t)>& tap) {
  const std::size_t n = std::min(world.vehicles.size(), policies.size());
  std::vector<std::size_t> states(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (policies[i] && !world.vehicles[i].changing_lane()) {
      states[i] = driver_observation_index(encode_driver_observation(world, i));
    }
  }
  std::vector<int> effective(world.vehicles.size(), -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!policies[i] || world.vehicles[i].changing_lane()) continue;
    const std::size_t action = rl::sample_action(*policies[i], states[i], rng);
    if (tap) tap(i, states[i], action);
    effective[i] = static_cast<int>(apply_driver_action(world, i, action, rng));
  }
  return effective;
}

TrafficEnvironment::TrafficEnvironment(TrafficScenario scenario, levels::OpponentSetup opponents)
    : scenario_(std::move(scenario)), opponents_(std::move(opponents)) {
  scenario_.validate();
  if (opponents_.level_policies.empty()) throw RegistryError("no opponent policies");
}

std::size_t TrafficEnvironment::num_states() const { return kNumDriverStates; }
std::size_t TrafficEnvironment::num_actions() const { return kNumTrafficActions; }

std::size_t TrafficEnvironment::reset(std::uint64_t seed) {
  world_ = instantiate(scenario_, seed);
  rng_.seed(derive_seed(seed, 1));
  const auto assigned = levels::assign_population(world_.vehicles.size() - 1, opponents_, rng_);
  policies_.assign(world_.vehicles.size(), nullptr);
  levels_.assign(world_.vehicles.size(), 0);
  for (std::size_t i = 1; i < world_.vehicles.size(); ++i) {
    levels_[i] = assigned[i - 1];
    policies_[i] = opponents_.level_policies[levels_[i]];
    world_.vehicles[i].level = levels_[i];
  }
  ego_collided_ = false;
  return driver_observation_index(encode_driver_observation(world_, 0));
}

void TrafficEnvironment::advance_interval() {
  const std::size_t substeps = substeps_of(scenario_);
  for (std::size_t k = 0; k < substeps && !ego_collided_; ++k) {
    step_traffic(world_, scenario_.dt);
    ego_collided_ = ego_in(detect_collisions(world_), 0);
  }
}

levels::StepResult TrafficEnvironment::step(std::size_t action) {
  if (action >= kNumTrafficActions) throw std::out_of_range("traffic action " + std::to_string(action));
  const TrafficWorld before = world_;
  std::function<void(std::size_t, std::size_t, std::size_t)> tap;
  if (opponents_.tap) {
    tap = [&](std::size_t i, std::size_t s, std::size_t a) { opponents_.tap(i, levels_[i], s, a); };
  }
  const double limit = scenario_.duration - 1e-9;
  driver_decisions(world_, policies_, rng_, tap);
  const std::size_t effective = apply_driver_action(world_, 0, action, rng_);
  advance_interval();
  // The ego is locked until its lane change completes; the others keep deciding.
  while (world_.vehicles[0].changing_lane() && !ego_collided_ && world_.time < limit) {
    driver_decisions(world_, policies_, rng_, tap);
    advance_interval();
  }
  levels::StepResult result;
  result.reward = driver_reward(before, world_, 0, effective, scenario_.weights);
  result.next_state = driver_observation_index(encode_driver_observation(world_, 0));
  result.done = ego_collided_ || world_.time >= limit;
  return result;
}

TrafficDomain::TrafficDomain(TrafficScenario training) : scenario_(std::move(training)) { scenario_.validate(); }

std::size_t TrafficDomain::num_states() const { return kNumDriverStates; }
std::size_t TrafficDomain::num_actions() const { return kNumTrafficActions; }
std::vector<double> TrafficDomain::features(std::size_t state) const { return driver_radix().normalized(state); }
std::size_t TrafficDomain::feature_width() const { return driver_radix().num_digits(); }

std::unique_ptr<levels::Environment> TrafficDomain::make_environment(const levels::OpponentSetup& opponents) const {
  return std::make_unique<TrafficEnvironment>(scenario_, opponents);
}

TrafficRunStats simulate_traffic(const TrafficScenario& scenario,
                                 const std::vector<const rl::StochasticPolicy*>& level_policies, std::uint64_t seed,
                                 std::vector<TrafficTrajectoryRow>* rows) {
  TrafficWorld world = instantiate(scenario, seed);
  Rng rng(derive_seed(seed, 1));
  std::vector<const rl::StochasticPolicy*> policies(world.vehicles.size(), nullptr);
  for (std::size_t i = 0; i < world.vehicles.size(); ++i) {
    const std::size_t level = world.vehicles[i].level;
    if (level >= level_policies.size() || !level_policies[level]) {
      throw RegistryError("no policy for driver level " + std::to_string(level));
    }
    policies[i] = level_policies[level];
  }
  TrafficRunStats stats;
  std::set<std::pair<std::size_t, std::size_t>> touching;
  double speed_sum = 0.0;
  std::size_t speed_samples = 0;
  const std::size_t substeps = substeps_of(scenario);
  const double limit = scenario.duration - 1e-9;
  while (world.time < limit) {
    const auto actions = driver_decisions(world, policies, rng);
    if (rows) {
      for (std::size_t i = 0; i < world.vehicles.size(); ++i) {
        const VehicleState& v = world.vehicles[i];
        rows->push_back({world.time, v.id, v.x, v.y, v.lane, v.v_x, v.a, actions[i]});
      }
    }
    for (std::size_t k = 0; k < substeps; ++k) {
      step_traffic(world, scenario.dt);
      std::set<std::pair<std::size_t, std::size_t>> now;
      for (const auto& p : detect_collisions(world)) {
        now.insert(p);
        if (!touching.count(p)) ++stats.collisions;
      }
      touching = std::move(now);
      for (const auto& v : world.vehicles) speed_sum += v.v_x;
      speed_samples += world.vehicles.size();
    }
  }
  stats.rejected_lane_changes = world.rejected_lane_changes;
  stats.mean_speed = speed_samples ? speed_sum / static_cast<double>(speed_samples) : 0.0;
  stats.duration = world.time;
  return stats;
}

}  // namespace levelk::traffic
