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
#include <iosfwd>
#include <span>
#include <vector>

#include "levelk/io/trajectory.hpp"

namespace levelk::io {

/// Fixed-width histogram. Bin i covers [origin + i w, origin + (i + 1) w).
struct Histogram {
  double origin = 0.0;
  double bin_width = 1.0;
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const;
  /// Share of the total inside [lo, hi], with partly covered bins counted
  /// in proportion to the covered width. 0 for an empty histogram.
  double band_fraction(double lo, double hi) const;
};

/// Bins the values with the origin at their minimum. Empty input gives an
/// empty histogram. Throws std::invalid_argument unless bin_width > 0.
Histogram make_histogram(std::span<const double> values, double bin_width);

/// Per frame, the centre-to-centre gap from each vehicle to the nearest
/// vehicle ahead in the same lane. Vehicles with no leader contribute nothing.
std::vector<double> front_gaps(const TrajectorySet& set);

Histogram headway_histogram(const TrajectorySet& set, double bin_width);
Histogram acceleration_histogram(const TrajectorySet& set, double bin_width);

/// `bin_start,bin_end,count` rows.
void write_histogram_csv(std::ostream& out, const Histogram& h);

}  // namespace levelk::io
