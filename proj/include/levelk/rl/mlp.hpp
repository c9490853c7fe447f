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
#include <span>
#include <vector>

namespace levelk::rl {

/// Fully connected network: logistic hidden layers, one linear output unit.
/// Parameters live in one flat vector, layer by layer, each layer stored as
/// its weight matrix (row per output unit) followed by its biases.
class MlpNetwork {
 public:
  /// layer_sizes = {inputs, hidden..., 1}. Weights start uniform in
  /// [-0.5, 0.5] drawn from `seed`. Throws std::invalid_argument unless there
  /// are at least two layers, all positive, with a single output.
  MlpNetwork(std::vector<std::size_t> layer_sizes, std::uint64_t seed);

  std::span<const std::size_t> layer_sizes() const noexcept { return sizes_; }
  std::size_t num_inputs() const noexcept { return sizes_.front(); }
  std::size_t num_parameters() const noexcept { return params_.size(); }
  std::span<const double> parameters() const noexcept { return params_; }
  std::span<double> mutable_parameters() noexcept { return params_; }

  double forward(std::span<const double> input) const;

  /// Sum of squared errors over the batch; `gradient` receives its
  /// derivative with respect to every parameter.
  double batch_gradient(const std::vector<std::vector<double>>& inputs,
                        std::span<const double> targets, std::vector<double>& gradient) const;

  double batch_error(const std::vector<std::vector<double>>& inputs,
                     std::span<const double> targets) const;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<double> params_;
};

struct RpropParams {
  double eta_plus = 1.2;
  double eta_minus = 0.5;
  double delta0 = 0.1;
  double delta_min = 1e-6;
  double delta_max = 50.0;
};

/// Resilient backprop without weight backtracking. Each parameter keeps its
/// own step size and the sign of its previous gradient.
class RpropOptimizer {
 public:
  explicit RpropOptimizer(std::size_t num_parameters, RpropParams params = {});

  /// Moves every parameter by -sign(g) * step after adapting the step.
  /// Throws std::invalid_argument on a size mismatch.
  void step(std::span<double> parameters, std::span<const double> gradient);
  void step(MlpNetwork& net, std::span<const double> gradient) { step(net.mutable_parameters(), gradient); }

  std::span<const double> step_sizes() const noexcept { return delta_; }

 private:
  RpropParams params_;
  std::vector<double> delta_;
  std::vector<double> previous_;
};

}  // namespace levelk::rl
