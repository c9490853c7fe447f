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
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "levelk/levels/environment.hpp"
#include "levelk/rl/policy.hpp"
#include "levelk/traffic/scenario.hpp"

namespace levelk::traffic {

/// Level-0 driver: keeps its lane, brakes hard when the front car is close
/// and approaching, brakes when it is merely close, maintains otherwise.
rl::StochasticPolicy traffic_anchor_policy();

/// Observes (all from the same snapshot) and acts for every vehicle that has
/// a policy and is not locked in a lane change. `tap` receives (vehicle
/// index, state, sampled action). Returns the effective action per vehicle,
/// -1 for vehicles that did not decide.
std::vector<int> driver_decisions(TrafficWorld& world, const std::vector<const rl::StochasticPolicy*>& policies,
                                  Rng& rng,
                                  const std::function<void(std::size_t, std::size_t, std::size_t)>& tap = {});

/// Driver training environment: the ego is vehicle 0 of a fresh scene per
/// episode. A lane change locks the ego until it completes, so one step may
/// span several decision intervals. Episodes end at the first collision
/// involving the ego or at the duration limit.
class TrafficEnvironment : public levels::Environment {
 public:
  TrafficEnvironment(TrafficScenario scenario, levels::OpponentSetup opponents);

  std::size_t num_states() const override;
  std::size_t num_actions() const override;
  std::size_t reset(std::uint64_t seed) override;
  levels::StepResult step(std::size_t action) override;

  const TrafficWorld& world() const { return world_; }
  const std::vector<std::size_t>& levels() const { return levels_; }

 private:
  void advance_interval();

  TrafficScenario scenario_;
  levels::OpponentSetup opponents_;
  TrafficWorld world_;
  std::vector<const rl::StochasticPolicy*> policies_;
  std::vector<std::size_t> levels_;
  Rng rng_;
  bool ego_collided_ = false;
};

class TrafficDomain : public levels::Domain {
 public:
  explicit TrafficDomain(TrafficScenario training = default_traffic_scenario());

  std::string name() const override { return "traffic"; }
  std::size_t num_states() const override;
  std::size_t num_actions() const override;
  rl::StochasticPolicy anchor_policy() const override { return traffic_anchor_policy(); }
  std::vector<double> features(std::size_t state) const override;
  std::size_t feature_width() const override;
  std::unique_ptr<levels::Environment> make_environment(const levels::OpponentSetup& opponents) const override;

  const TrafficScenario& scenario() const { return scenario_; }

 private:
  TrafficScenario scenario_;
};

/// One logged vehicle state at a decision frame (after the decision, before
/// integration). `action` is -1 for a vehicle locked in a lane change.
struct TrafficTrajectoryRow {
  double time = 0.0;
  int vehicle_id = 0;
  double x = 0.0;
  double y = 0.0;
  std::size_t lane = 0;
  double v_x = 0.0;
  double a = 0.0;
  int action = -1;
};

struct TrafficRunStats {
  std::size_t collisions = 0;          // rising edges over all pairs
  std::size_t rejected_lane_changes = 0;
  double mean_speed = 0.0;             // time and vehicle mean, m/s
  double duration = 0.0;
};

/// Runs a scene where every vehicle follows the policy of its level for the
/// whole duration (collisions are counted, not terminal). `rows` is filled
/// when non-null.
TrafficRunStats simulate_traffic(const TrafficScenario& scenario,
                                 const std::vector<const rl::StochasticPolicy*>& level_policies, std::uint64_t seed,
                                 std::vector<TrafficTrajectoryRow>* rows = nullptr);

}  // namespace levelk::traffic
