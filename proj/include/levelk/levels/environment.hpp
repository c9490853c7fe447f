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

#include "levelk/rl/policy.hpp"

namespace levelk::levels {

struct StepResult {
  double reward = 0.0;
  std::size_t next_state = 0;
  bool done = false;
};

/// The ego agent's view of a domain: every other agent is driven by a frozen
/// policy inside the environment.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual std::size_t num_states() const = 0;
  virtual std::size_t num_actions() const = 0;
  /// Starts an episode; returns the ego's first observation index.
  virtual std::size_t reset(std::uint64_t seed) = 0;
  virtual StepResult step(std::size_t action) = 0;
};

/// Instrumentation hook, called for every action a non-ego agent samples.
using ActionTap = std::function<void(std::size_t agent, std::size_t level, std::size_t state, std::size_t action)>;

/// Policies of the frozen population around the ego.
struct OpponentSetup {
  std::vector<const rl::StochasticPolicy*> level_policies;  // index = level, 0..top
  std::size_t level = 0;                  // level every opponent plays by default
  bool respond_to_all_lower = false;      // draw opponent levels from {0..level} per episode
  std::vector<double> mix;                // optional fraction per level (index = level)
  ActionTap tap;
};

/// Per-agent levels for `agents` opponents. With a mix, counts follow
/// largest-remainder rounding (ties to the lower level); with
/// respond_to_all_lower, each level is drawn uniformly from {0..level};
/// otherwise all agents play `level`. Throws RegistryError if a referenced
/// level has no policy and ConfigError for a mix that does not sum to 1.
std::vector<std::size_t> assign_population(std::size_t agents, const OpponentSetup& setup, Rng& rng);

/// Largest-remainder apportionment of `total` items over `fractions`.
std::vector<std::size_t> largest_remainder(std::size_t total, const std::vector<double>& fractions);

/// A trainable domain: state/action sizes, its level-0 anchor and a factory
/// for ego environments.
class Domain {
 public:
  virtual ~Domain() = default;
  virtual std::string name() const = 0;
  virtual std::size_t num_states() const = 0;
  virtual std::size_t num_actions() const = 0;
  virtual rl::StochasticPolicy anchor_policy() const = 0;
  /// Normalized observation features for function approximation.
  virtual std::vector<double> features(std::size_t state) const = 0;
  virtual std::size_t feature_width() const = 0;
  virtual std::unique_ptr<Environment> make_environment(const OpponentSetup& opponents) const = 0;
};

}  // namespace levelk::levels
