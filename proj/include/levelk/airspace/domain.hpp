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
#include <functional>
#include <memory>
#include <vector>

#include "levelk/airspace/scenario.hpp"
#include "levelk/levels/environment.hpp"
#include "levelk/rl/policy.hpp"

namespace levelk::airspace {

/// Level-0 pilot: always the Best Trajectory Action of the observation.
rl::StochasticPolicy airspace_anchor_policy();

/// Observes and acts for every active manned aircraft that has a policy
/// (null entries are skipped). One uniform draw per acting pilot, in index
/// order. `tap` receives (aircraft index, state, action).
void pilot_decisions(AirspaceWorld& world, const std::vector<const rl::StochasticPolicy*>& policies,
                     double decision_interval, double dt, Rng& rng,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& tap = {});

/// Same, with one random stream per aircraft (`rngs[i]` serves aircraft i).
/// Pilots that never interact with a change elsewhere in the scene then make
/// identical draws, which keeps paired comparisons tight.
void pilot_decisions(AirspaceWorld& world, const std::vector<const rl::StochasticPolicy*>& policies,
                     double decision_interval, double dt, std::vector<Rng>& rngs);

/// Pilot training environment: the ego is manned aircraft 0 of a fresh
/// random scene per episode; all other pilots follow frozen policies and the
/// UAS runs its SAA. An episode ends when the ego arrives, at the duration
/// limit, or at the first collision.
class AirspaceEnvironment : public levels::Environment {
 public:
  AirspaceEnvironment(AirspaceScenario scenario, levels::OpponentSetup opponents);

  std::size_t num_states() const override;
  std::size_t num_actions() const override;
  std::size_t reset(std::uint64_t seed) override;
  levels::StepResult step(std::size_t action) override;

  const AirspaceWorld& world() const { return world_; }
  /// Level each aircraft plays this episode (ego and UAS report 0).
  const std::vector<std::size_t>& levels() const { return levels_; }

 private:
  AirspaceScenario scenario_;
  levels::OpponentSetup opponents_;
  AirspaceWorld world_;
  std::vector<const rl::StochasticPolicy*> policies_;
  std::vector<std::size_t> levels_;
  Rng rng_;
  std::size_t state_ = 0;
};

class AirspaceDomain : public levels::Domain {
 public:
  explicit AirspaceDomain(AirspaceScenario training = encounter_airspace_scenario());

  std::string name() const override { return "airspace"; }
  std::size_t num_states() const override;
  std::size_t num_actions() const override;
  rl::StochasticPolicy anchor_policy() const override { return airspace_anchor_policy(); }
  std::vector<double> features(std::size_t state) const override;
  std::size_t feature_width() const override;
  std::unique_ptr<levels::Environment> make_environment(const levels::OpponentSetup& opponents) const override;

  const AirspaceScenario& scenario() const { return scenario_; }

 private:
  AirspaceScenario scenario_;
};

}  // namespace levelk::airspace
