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

#include "levelk/airspace/domain.hpp"

#include <cmath>
#include <stdexcept>

#include "levelk/airspace/observation.hpp"
#include "levelk/airspace/reward.hpp"
#include "levelk/airspace/simulation.hpp"
#include "levelk/common/error.hpp"

namespace levelk::airspace {

rl::StochasticPolicy airspace_anchor_policy() {
  rl::StochasticPolicy pi(kNumPilotStates, kNumPilotActions);
  for (std::size_t s = 0; s < kNumPilotStates; ++s) {
    auto row = pi.mutable_row(s);
    std::fill(row.begin(), row.end(), 0.0);
    row[decode_observation(s).bta] = 1.0;
  }
  return pi;
}

void pilot_decisions(AirspaceWorld& world, const std::vector<const rl::StochasticPolicy*>& policies,
                     double decision_interval, double dt, Rng& rng,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& tap) {
  // Observations come from the snapshot before anyone turns.
  std::vector<std::size_t> states(world.aircraft.size(), 0);
  for (std::size_t i = 0; i < world.aircraft.size() && i < policies.size(); ++i) {
    const AircraftState& a = world.aircraft[i];
    if (!policies[i] || !a.active || a.kind != AircraftKind::kManned) continue;
    states[i] = observation_index(encode_observation(world, i, decision_interval, dt));
  }
  for (std::size_t i = 0; i < world.aircraft.size() && i < policies.size(); ++i) {
    AircraftState& a = world.aircraft[i];
    if (!policies[i] || !a.active || a.kind != AircraftKind::kManned) continue;
    const std::size_t action = rl::sample_action(*policies[i], states[i], rng);
    if (tap) tap(i, states[i], action);
    apply_pilot_action(a, action);
  }
}

void pilot_decisions(AirspaceWorld& world, const std::vector<const rl::StochasticPolicy*>& policies,
                     double decision_interval, double dt, std::vector<Rng>& rngs) {
  if (rngs.size() < world.aircraft.size()) throw std::invalid_argument("one random stream per aircraft required");
  std::vector<std::size_t> states(world.aircraft.size(), 0);
  std::vector<std::uint8_t> acting(world.aircraft.size(), 0);
  for (std::size_t i = 0; i < world.aircraft.size() && i < policies.size(); ++i) {
    const AircraftState& a = world.aircraft[i];
    if (!policies[i] || !a.active || a.kind != AircraftKind::kManned) continue;
    acting[i] = 1;
    states[i] = observation_index(encode_observation(world, i, decision_interval, dt));
  }
  for (std::size_t i = 0; i < world.aircraft.size(); ++i) {
    if (acting[i]) apply_pilot_action(world.aircraft[i], rl::sample_action(*policies[i], states[i], rngs[i]));
  }
}

AirspaceEnvironment::AirspaceEnvironment(AirspaceScenario scenario, levels::OpponentSetup opponents)
    : scenario_(std::move(scenario)), opponents_(std::move(opponents)) {
  scenario_.validate();
  if (opponents_.level_policies.empty()) throw RegistryError("no opponent policies");
}

std::size_t AirspaceEnvironment::num_states() const { return kNumPilotStates; }
std::size_t AirspaceEnvironment::num_actions() const { return kNumPilotActions; }

std::size_t AirspaceEnvironment::reset(std::uint64_t seed) {
  world_ = instantiate(scenario_, seed);
  if (world_.aircraft.empty() || world_.aircraft[0].kind != AircraftKind::kManned) {
    throw ConfigError("airspace training needs at least one manned aircraft");
  }
  rng_.seed(derive_seed(seed, 1));
  std::size_t manned = 0;
  for (const auto& a : world_.aircraft) manned += a.kind == AircraftKind::kManned ? 1 : 0;
  const auto assigned = levels::assign_population(manned - 1, opponents_, rng_);
  policies_.assign(world_.aircraft.size(), nullptr);
  levels_.assign(world_.aircraft.size(), 0);
  for (std::size_t i = 1, k = 0; i < world_.aircraft.size(); ++i) {
    if (world_.aircraft[i].kind != AircraftKind::kManned) continue;
    levels_[i] = assigned[k++];
    policies_[i] = opponents_.level_policies[levels_[i]];
    world_.aircraft[i].level = levels_[i];
  }
  state_ = observation_index(encode_observation(world_, 0, scenario_.decision_interval, scenario_.dt));
  return state_;
}

levels::StepResult AirspaceEnvironment::step(std::size_t action) {
  const AirspaceWorld before = world_;
  std::function<void(std::size_t, std::size_t, std::size_t)> tap;
  if (opponents_.tap) {
    tap = [&](std::size_t i, std::size_t s, std::size_t a) { opponents_.tap(i, levels_[i], s, a); };
  }
  pilot_decisions(world_, policies_, scenario_.decision_interval, scenario_.dt, rng_, tap);
  apply_pilot_action(world_.aircraft[0], action);

  MetricsAccumulator metrics(world_);
  metrics.record(world_);
  bool collided = false;
  const auto substeps = static_cast<std::size_t>(std::llround(scenario_.decision_interval / scenario_.dt));
  for (std::size_t k = 0; k < substeps && world_.aircraft[0].active; ++k) {
    step_airspace(world_, scenario_.dt);
    collided = metrics.record(world_) > 0 || collided;
  }
  levels::StepResult result;
  result.reward = pilot_reward(before, world_, 0, action, scenario_.weights);
  state_ = observation_index(encode_observation(world_, 0, scenario_.decision_interval, scenario_.dt));
  result.next_state = state_;
  result.done = !world_.aircraft[0].active || collided || world_.time >= scenario_.duration - 1e-9;
  return result;
}

AirspaceDomain::AirspaceDomain(AirspaceScenario training) : scenario_(std::move(training)) { scenario_.validate(); }

std::size_t AirspaceDomain::num_states() const { return kNumPilotStates; }
std::size_t AirspaceDomain::num_actions() const { return kNumPilotActions; }
std::vector<double> AirspaceDomain::features(std::size_t state) const { return pilot_radix().normalized(state); }
std::size_t AirspaceDomain::feature_width() const { return pilot_radix().num_digits(); }

std::unique_ptr<levels::Environment> AirspaceDomain::make_environment(const levels::OpponentSetup& opponents) const {
  return std::make_unique<AirspaceEnvironment>(scenario_, opponents);
}

}  // namespace levelk::airspace
