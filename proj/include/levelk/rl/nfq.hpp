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
#include <span>
#include <vector>

#include "levelk/rl/mlp.hpp"

namespace levelk::rl {

/// One transition in cost space (cost = -reward).
struct Experience {
  std::size_t state = 0;
  std::size_t action = 0;
  double cost = 0.0;
  std::size_t next_state = 0;
  bool terminal = false;
};

/// Maps a discrete state to the network's state features (typically the
/// normalized observation digits).
using StateFeatures = std::function<std::vector<double>(std::size_t)>;

/// Approximate cost-to-go Q(s, a) as an MLP over [state features, one-hot action].
class NfqModel {
 public:
  NfqModel(std::size_t num_states, std::size_t num_actions, std::size_t feature_width,
           StateFeatures features, std::uint64_t seed, std::vector<std::size_t> hidden = {20, 20});

  std::size_t num_states() const noexcept { return states_; }
  std::size_t num_actions() const noexcept { return actions_; }

  std::vector<double> input(std::size_t state, std::size_t action) const;
  double q(std::size_t state, std::size_t action) const;
  /// Lowest-cost action; lowest index on ties.
  std::size_t greedy_action(std::size_t state) const;

  MlpNetwork& network() noexcept { return net_; }
  const MlpNetwork& network() const noexcept { return net_; }

 private:
  std::size_t states_;
  std::size_t actions_;
  std::size_t width_;
  StateFeatures features_;
  MlpNetwork net_;
};

struct NfqOptions {
  double gamma = 0.9;
  std::size_t iterations = 20;
  std::size_t epochs = 50;  // Rprop batch epochs per outer iteration
};

/// Neural fitted Q iteration. Each outer iteration rebuilds the targets
///   cost + gamma * min_b Q(next_state, b)   (cost alone when terminal)
/// and fits the network to them with batch Rprop. Returns, per outer
/// iteration, the batch squared error of the incoming network against that
/// iteration's fresh targets (the Bellman residual on the batch). Throws std::invalid_argument
/// for an empty experience set or out-of-range indices.
std::vector<double> nfq_train(std::span<const Experience> experiences, NfqModel& model,
                              const NfqOptions& options);

}  // namespace levelk::rl
