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

#include "levelk/rl/policy.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace levelk::rl {

StochasticPolicy::StochasticPolicy(std::size_t num_states, std::size_t num_actions)
    : states_(num_states), actions_(num_actions) {
  if (num_states == 0 || num_actions == 0) {
    throw std::invalid_argument("policy needs at least one state and one action");
  }
  probs_.assign(states_ * actions_, 1.0 / static_cast<double>(actions_));
}

void StochasticPolicy::check_state(std::size_t state) const {
  if (state >= states_) {
    throw std::out_of_range("state " + std::to_string(state) + " >= " + std::to_string(states_));
  }
}

double StochasticPolicy::prob(std::size_t state, std::size_t action) const {
  check_state(state);
  if (action >= actions_) throw std::out_of_range("action " + std::to_string(action));
  return probs_[state * actions_ + action];
}

std::span<const double> StochasticPolicy::row(std::size_t state) const {
  check_state(state);
  return {probs_.data() + state * actions_, actions_};
}

std::span<double> StochasticPolicy::mutable_row(std::size_t state) {
  check_state(state);
  return {probs_.data() + state * actions_, actions_};
}

void StochasticPolicy::set_row(std::size_t state, std::span<const double> probs) {
  check_state(state);
  if (probs.size() != actions_) throw std::invalid_argument("row has wrong number of actions");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("negative or non-finite probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("row does not sum to 1");
  std::copy(probs.begin(), probs.end(), probs_.begin() + static_cast<std::ptrdiff_t>(state * actions_));
}

std::size_t StochasticPolicy::greedy_action(std::size_t state) const {
  const auto r = row(state);
  std::size_t best = 0;
  for (std::size_t a = 1; a < r.size(); ++a) {
    if (r[a] > r[best]) best = a;
  }
  return best;
}

std::size_t sample_index(std::span<const double> probs, Rng& rng) {
  const double u = uniform01(rng);
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    cumulative += probs[i];
    last_positive = i;
    if (u < cumulative) return i;
  }
  // Rounding left the cumulative sum slightly below 1.
  return last_positive;
}

std::size_t sample_action(const StochasticPolicy& policy, std::size_t state, Rng& rng) {
  return sample_index(policy.row(state), rng);
}

void apply_exploration_floor(std::span<double> row, double floor) {
  if (floor <= 0.0) return;
  double sum = 0.0;
  for (double& p : row) {
    p = std::max(p, floor);
    sum += p;
  }
  for (double& p : row) p /= sum;
}

}  // namespace levelk::rl
