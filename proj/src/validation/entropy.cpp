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

#include "levelk/validation/entropy.hpp"

#include <cmath>
#include <stdexcept>

namespace levelk::validation {
namespace {

void check_probability_vector(std::span<const double> p) {
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("negative or non-finite probability");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("probabilities do not sum to 1");
}

}  // namespace

double entropy(std::span<const double> p) {
  check_probability_vector(p);
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

std::vector<double> floor_normalize(std::span<const double> p, double floor) {
  check_probability_vector(p);
  const double n = static_cast<double>(p.size());
  if (!(floor >= 0.0) || floor * n >= 1.0) throw std::invalid_argument("infeasible probability floor");
  std::vector<double> out(p.begin(), p.end());
  std::vector<bool> fixed(out.size(), false);
  // An entry scaled down by the renormalization can itself drop below the
  // floor; iterate until the floored set is stable.
  while (true) {
    std::size_t m = 0;
    double rest = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (!fixed[i] && p[i] < floor) fixed[i] = true;
      if (fixed[i]) {
        ++m;
      } else {
        rest += p[i];
      }
    }
    if (m == 0) return out;
    const double scale = (1.0 - floor * static_cast<double>(m)) / rest;
    bool changed = false;
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (fixed[i]) {
        out[i] = floor;
      } else {
        out[i] = p[i] * scale;
        if (out[i] < floor) {
          fixed[i] = true;
          changed = true;
        }
      }
    }
    if (!changed) return out;
  }
}

}  // namespace levelk::validation
