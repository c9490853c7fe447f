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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "levelk/common/error.hpp"
#include "levelk/levels/environment.hpp"

namespace levelk::levels {

std::vector<std::size_t> largest_remainder(std::size_t total, const std::vector<double>& fractions) {
  double sum = 0.0;
  for (double f : fractions) {
    if (!(f >= 0.0)) throw ConfigError("population fractions must be nonnegative");
    sum += f;
  }
  if (fractions.empty() || std::abs(sum - 1.0) > 1e-9) throw ConfigError("population fractions must sum to 1");
  std::vector<std::size_t> counts(fractions.size());
  std::vector<double> remainder(fractions.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const double exact = fractions[i] * static_cast<double>(total);
    // Guard against 0.3 * 10 = 2.9999999999999996.
    const double whole = std::floor(exact + 1e-9);
    counts[i] = static_cast<std::size_t>(whole);
    remainder[i] = exact - whole;
    assigned += counts[i];
  }
  std::vector<std::size_t> order(fractions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++counts[order[k % order.size()]];
  return counts;
}

std::vector<std::size_t> assign_population(std::size_t agents, const OpponentSetup& setup, Rng& rng) {
  auto require = [&](std::size_t level) {
    if (level >= setup.level_policies.size() || setup.level_policies[level] == nullptr) {
      throw RegistryError("population references missing level " + std::to_string(level));
    }
  };
  std::vector<std::size_t> levels;
  levels.reserve(agents);
  if (!setup.mix.empty()) {
    const auto counts = largest_remainder(agents, setup.mix);
    for (std::size_t level = 0; level < counts.size(); ++level) {
      if (counts[level] > 0) require(level);
      levels.insert(levels.end(), counts[level], level);
    }
    // Interleave so agent order does not correlate with level.
    std::shuffle(levels.begin(), levels.end(), rng);
    return levels;
  }
  if (setup.respond_to_all_lower) {
    for (std::size_t l = 0; l <= setup.level; ++l) require(l);
    for (std::size_t i = 0; i < agents; ++i) levels.push_back(static_cast<std::size_t>(rng() % (setup.level + 1)));
    return levels;
  }
  require(setup.level);
  levels.assign(agents, setup.level);
  return levels;
}

}  // namespace levelk::levels
