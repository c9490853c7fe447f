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

#include "levelk/rl/nfq.hpp"

#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace levelk::rl {

NfqModel::NfqModel(std::size_t num_states, std::size_t num_actions, std::size_t feature_width,
                   StateFeatures features, std::uint64_t seed, std::vector<std::size_t> hidden)
    : states_(num_states),
      actions_(num_actions),
      width_(feature_width),
      features_(std::move(features)),
      net_([&] {
        std::vector<std::size_t> sizes{feature_width + num_actions};
        sizes.insert(sizes.end(), hidden.begin(), hidden.end());
        sizes.push_back(1);
        return sizes;
      }(), seed) {
  if (num_states == 0 || num_actions == 0) throw std::invalid_argument("NFQ model needs states and actions");
  if (!features_) throw std::invalid_argument("NFQ model needs a feature map");
}

std::vector<double> NfqModel::input(std::size_t state, std::size_t action) const {
  if (state >= states_ || action >= actions_) throw std::out_of_range("NFQ input index out of range");
  std::vector<double> x = features_(state);
  if (x.size() != width_) throw std::invalid_argument("feature map returned the wrong width");
  x.resize(width_ + actions_, 0.0);
  x[width_ + action] = 1.0;
  return x;
}

double NfqModel::q(std::size_t state, std::size_t action) const { return net_.forward(input(state, action)); }

std::size_t NfqModel::greedy_action(std::size_t state) const {
  std::size_t best = 0;
  double best_q = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < actions_; ++a) {
    const double v = q(state, a);
    if (v < best_q) {
      best_q = v;
      best = a;
    }
  }
  return best;
}

std::vector<double> nfq_train(std::span<const Experience> experiences, NfqModel& model,
                              const NfqOptions& options) {
  if (experiences.empty()) throw std::invalid_argument("nfq_train: empty experience set");
  std::vector<std::vector<double>> inputs;
  inputs.reserve(experiences.size());
  for (const auto& e : experiences) {
    if (e.next_state >= model.num_states()) throw std::out_of_range("NFQ next_state out of range");
    inputs.push_back(model.input(e.state, e.action));
  }
  RpropOptimizer rprop(model.network().num_parameters());
  std::vector<double> targets(experiences.size()), gradient, errors;
  errors.reserve(options.iterations);
  std::unordered_map<std::size_t, double> min_cost;
  for (std::size_t it = 0; it < options.iterations; ++it) {
    min_cost.clear();
    for (std::size_t i = 0; i < experiences.size(); ++i) {
      const auto& e = experiences[i];
      double bootstrap = 0.0;
      if (!e.terminal && options.gamma > 0.0) {
        auto [pos, inserted] = min_cost.try_emplace(e.next_state, 0.0);
        if (inserted) {
          double best = std::numeric_limits<double>::infinity();
          for (std::size_t b = 0; b < model.num_actions(); ++b) best = std::min(best, model.q(e.next_state, b));
          pos->second = best;
        }
        bootstrap = options.gamma * pos->second;
      }
      targets[i] = e.cost + bootstrap;
    }
    for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
      const double error = model.network().batch_gradient(inputs, targets, gradient);
      if (epoch == 0) errors.push_back(error);
      rprop.step(model.network(), gradient);
    }
    if (options.epochs == 0) errors.push_back(model.network().batch_error(inputs, targets));
  }
  return errors;
}

}  // namespace levelk::rl
