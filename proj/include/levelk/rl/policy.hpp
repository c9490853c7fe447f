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
#include <span>
#include <vector>

#include "levelk/common/random.hpp"

namespace levelk::rl {

/// Row-stochastic table pi(a|s): one probability row per discrete state.
/// Dense, row-major. A freshly constructed policy is uniform.
class StochasticPolicy {
 public:
  StochasticPolicy(std::size_t num_states, std::size_t num_actions);

  std::size_t num_states() const noexcept { return states_; }
  std::size_t num_actions() const noexcept { return actions_; }

  double prob(std::size_t state, std::size_t action) const;
  std::span<const double> row(std::size_t state) const;

  /// Replaces a row. Throws std::invalid_argument unless the row is a
  /// probability vector (nonnegative, sums to 1 within 1e-9).
  void set_row(std::size_t state, std::span<const double> probs);

  /// Unchecked mutable access for in-place updates; callers keep rows stochastic.
  std::span<double> mutable_row(std::size_t state);

  /// Index of the largest entry; lowest index on ties.
  std::size_t greedy_action(std::size_t state) const;

  bool operator==(const StochasticPolicy&) const = default;

 private:
  void check_state(std::size_t state) const;

  std::size_t states_;
  std::size_t actions_;
  std::vector<double> probs_;
};

/// Draws an index from a probability vector (inverse CDF on one uniform).
std::size_t sample_index(std::span<const double> probs, Rng& rng);

/// Draws an action from pi(.|state). Same seed and state give the same draw.
std::size_t sample_action(const StochasticPolicy& policy, std::size_t state, Rng& rng);

/// Raises every entry to at least `floor` and renormalizes. Afterwards every
/// entry is >= floor / (1 + n * floor). A floor of 0 is a no-op.
void apply_exploration_floor(std::span<double> row, double floor);

}  // namespace levelk::rl
