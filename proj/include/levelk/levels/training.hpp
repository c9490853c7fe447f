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
#include <memory>
#include <string>
#include <vector>

#include "levelk/levels/environment.hpp"
#include "levelk/levels/registry.hpp"
#include "levelk/rl/learner.hpp"
#include "levelk/rl/policy.hpp"

namespace levelk::levels {

enum class Algorithm { kJaakkola, kQ, kNfq };

/// "jaakkola", "q" or "nfq"; throws ConfigError otherwise.
Algorithm parse_algorithm(const std::string& name);
std::string to_string(Algorithm algorithm);

struct NfqSettings {
  std::size_t iterations = 3;         // outer NFQ iterations after each episode
  std::size_t epochs = 30;            // Rprop epochs per iteration
  std::size_t max_experiences = 2000; // most recent transitions kept
  double greedy_epsilon = 0.2;
  std::size_t random_episode_every = 5;
};

struct LevelKConfig {
  std::size_t max_level = 3;
  bool respond_to_all_lower = false;
  std::vector<double> population_mix;  // optional fraction per level

  /// Throws ConfigError if max_level is 0.
  void validate() const;
};

struct EpisodeTelemetry {
  std::size_t level = 0;    // level being trained (the ego becomes level + 1)
  std::size_t episode = 0;
  std::size_t steps = 0;
  double total_reward = 0.0;
  double avg_reward = 0.0;  // mean reward per decision step
  double entropy = 0.0;     // mean row entropy of the ego policy table
};

/// Ego learner behind a common interface.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual std::size_t act(std::size_t state, Rng& rng) = 0;
  virtual void observe(std::size_t state, std::size_t action, double reward, std::size_t next_state,
                       bool done) = 0;
  virtual void end_episode(std::size_t episode) = 0;
  virtual rl::StochasticPolicy policy() const = 0;
  /// Mean over all states of the entropy of the current policy row.
  virtual double mean_entropy() const = 0;
  /// Tables and visit counts (NFQ keeps counts only).
  virtual const rl::LearnerState& tables() const = 0;
};

std::unique_ptr<Learner> make_learner(Algorithm algorithm, const Domain& domain, const rl::LearningConfig& cfg,
                                      const NfqSettings& nfq = {});

/// A learner that never updates its policy; the untrained control.
std::unique_ptr<Learner> make_frozen_learner(const rl::StochasticPolicy& policy);

struct TrainedLevel {
  rl::StochasticPolicy policy;
  rl::LearnerState tables;
  std::vector<EpisodeTelemetry> telemetry;
};

/// Runs `learner` as the ego for cfg.episodes episodes against the level-i
/// population. Episode e resets the environment with derive_seed(seed, e).
std::vector<EpisodeTelemetry> run_training_episodes(Learner& learner, Environment& env, std::size_t level,
                                                    std::size_t episodes, std::uint64_t seed);

/// Opponent setup for training against level i (policies 0..i from the registry).
OpponentSetup opponents_for_level(const PolicyRegistry& registry, const std::string& domain, std::size_t level,
                                  const LevelKConfig& lk, ActionTap tap = {});

/// Trains one ego against the frozen level-i population and stores the
/// result as level i + 1 (with its per-state visit counts). Throws
/// RegistryError if level i is missing.
TrainedLevel train_level(PolicyRegistry& registry, const Domain& domain, std::size_t level,
                         const rl::LearningConfig& cfg, const LevelKConfig& lk, Algorithm algorithm,
                         const NfqSettings& nfq = {}, ActionTap tap = {});

/// Anchors the registry if needed and trains levels 1..lk.max_level in order.
std::vector<TrainedLevel> train_levels(PolicyRegistry& registry, const Domain& domain,
                                       const rl::LearningConfig& cfg, const LevelKConfig& lk, Algorithm algorithm,
                                       const NfqSettings& nfq = {});

}  // namespace levelk::levels
