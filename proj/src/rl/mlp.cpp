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

#include "levelk/rl/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "levelk/common/random.hpp"

namespace levelk::rl {
namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

MlpNetwork::MlpNetwork(std::vector<std::size_t> layer_sizes, std::uint64_t seed)
    : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("network needs an input and an output layer");
  for (std::size_t n : sizes_) {
    if (n == 0) throw std::invalid_argument("layer sizes must be positive");
  }
  if (sizes_.back() != 1) throw std::invalid_argument("network output must be a single unit");
  std::size_t count = 0;
  for (std::size_t l = 1; l < sizes_.size(); ++l) count += sizes_[l] * (sizes_[l - 1] + 1);
  params_.resize(count);
  Rng rng(seed);
  for (double& p : params_) p = uniform01(rng) - 0.5;
}

double MlpNetwork::forward(std::span<const double> input) const {
  if (input.size() != sizes_.front()) throw std::invalid_argument("input width mismatch");
  std::vector<double> current(input.begin(), input.end()), next;
  std::size_t offset = 0;
  for (std::size_t l = 1; l < sizes_.size(); ++l) {
    const std::size_t n_in = sizes_[l - 1], n_out = sizes_[l];
    const double* w = params_.data() + offset;
    const double* b = w + n_out * n_in;
    next.assign(n_out, 0.0);
    const bool hidden = l + 1 < sizes_.size();
    for (std::size_t j = 0; j < n_out; ++j) {
      double z = b[j];
      for (std::size_t i = 0; i < n_in; ++i) z += w[j * n_in + i] * current[i];
      next[j] = hidden ? logistic(z) : z;
    }
    offset += n_out * (n_in + 1);
    current.swap(next);
  }
  return current[0];
}

double MlpNetwork::batch_gradient(const std::vector<std::vector<double>>& inputs,
                                  std::span<const double> targets, std::vector<double>& gradient) const {
  if (inputs.size() != targets.size()) throw std::invalid_argument("inputs and targets differ in length");
  gradient.assign(params_.size(), 0.0);
  const std::size_t L = sizes_.size();
  std::vector<std::vector<double>> act(L);
  std::vector<std::size_t> offsets(L, 0);
  for (std::size_t l = 1, off = 0; l < L; ++l) {
    offsets[l] = off;
    off += sizes_[l] * (sizes_[l - 1] + 1);
  }
  double error = 0.0;
  std::vector<double> delta, prev_delta;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    if (inputs[k].size() != sizes_.front()) throw std::invalid_argument("input width mismatch");
    act[0] = inputs[k];
    for (std::size_t l = 1; l < L; ++l) {
      const std::size_t n_in = sizes_[l - 1], n_out = sizes_[l];
      const double* w = params_.data() + offsets[l];
      const double* b = w + n_out * n_in;
      act[l].assign(n_out, 0.0);
      for (std::size_t j = 0; j < n_out; ++j) {
        double z = b[j];
        for (std::size_t i = 0; i < n_in; ++i) z += w[j * n_in + i] * act[l - 1][i];
        act[l][j] = (l + 1 < L) ? logistic(z) : z;
      }
    }
    const double residual = act[L - 1][0] - targets[k];
    error += residual * residual;
    delta.assign(1, 2.0 * residual);
    for (std::size_t l = L - 1; l >= 1; --l) {
      const std::size_t n_in = sizes_[l - 1], n_out = sizes_[l];
      const double* w = params_.data() + offsets[l];
      double* gw = gradient.data() + offsets[l];
      double* gb = gw + n_out * n_in;
      for (std::size_t j = 0; j < n_out; ++j) {
        for (std::size_t i = 0; i < n_in; ++i) gw[j * n_in + i] += delta[j] * act[l - 1][i];
        gb[j] += delta[j];
      }
      if (l == 1) break;
      prev_delta.assign(n_in, 0.0);
      for (std::size_t i = 0; i < n_in; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n_out; ++j) sum += w[j * n_in + i] * delta[j];
        const double a = act[l - 1][i];
        prev_delta[i] = sum * a * (1.0 - a);
      }
      delta.swap(prev_delta);
    }
  }
  return error;
}

double MlpNetwork::batch_error(const std::vector<std::vector<double>>& inputs,
                               std::span<const double> targets) const {
  if (inputs.size() != targets.size()) throw std::invalid_argument("inputs and targets differ in length");
  double error = 0.0;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const double r = forward(inputs[k]) - targets[k];
    error += r * r;
  }
  return error;
}

RpropOptimizer::RpropOptimizer(std::size_t num_parameters, RpropParams params)
    : params_(params), delta_(num_parameters, params.delta0), previous_(num_parameters, 0.0) {}

void RpropOptimizer::step(std::span<double> parameters, std::span<const double> gradient) {
  if (parameters.size() != delta_.size() || gradient.size() != delta_.size()) {
    throw std::invalid_argument("rprop: gradient shape does not match the parameters");
  }
  for (std::size_t i = 0; i < delta_.size(); ++i) {
    const double g = gradient[i];
    const double agreement = g * previous_[i];
    if (agreement > 0.0) {
      delta_[i] = std::min(delta_[i] * params_.eta_plus, params_.delta_max);
    } else if (agreement < 0.0) {
      delta_[i] = std::max(delta_[i] * params_.eta_minus, params_.delta_min);
    }
    if (g > 0.0) {
      parameters[i] -= delta_[i];
    } else if (g < 0.0) {
      parameters[i] += delta_[i];
    }
    previous_[i] = g;
  }
}

}  // namespace levelk::rl
