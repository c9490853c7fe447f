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

#include "levelk/io/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

#include "levelk/common/text.hpp"

namespace levelk::io {

std::uint64_t Histogram::total() const {
  std::uint64_t n = 0;
  for (auto c : counts) n += c;
  return n;
}

double Histogram::band_fraction(double lo, double hi) const {
  const auto n = total();
  if (n == 0 || hi <= lo) return 0.0;
  double inside = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double a = origin + static_cast<double>(i) * bin_width;
    const double overlap = std::min(hi, a + bin_width) - std::max(lo, a);
    if (overlap > 0.0) inside += static_cast<double>(counts[i]) * std::min(1.0, overlap / bin_width);
  }
  return inside / static_cast<double>(n);
}

Histogram make_histogram(std::span<const double> values, double bin_width) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("bin width must be positive");
  Histogram h;
  h.bin_width = bin_width;
  if (values.empty()) return h;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  h.origin = *lo;
  h.counts.assign(static_cast<std::size_t>(std::floor((*hi - *lo) / bin_width)) + 1, 0);
  for (double v : values) {
    auto i = static_cast<std::size_t>(std::floor((v - h.origin) / bin_width));
    ++h.counts[std::min(i, h.counts.size() - 1)];
  }
  return h;
}

std::vector<double> front_gaps(const TrajectorySet& set) {
  // (frame, lane) -> positions present at that instant.
  std::map<std::pair<long long, int>, std::vector<double>> slices;
  for (const auto& [id, rows] : set.vehicles) {
    for (const auto& r : rows) slices[{r.frame, r.lane}].push_back(r.x);
  }
  std::vector<double> gaps;
  for (auto& [key, xs] : slices) {
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) gaps.push_back(xs[i + 1] - xs[i]);
  }
  return gaps;
}

Histogram headway_histogram(const TrajectorySet& set, double bin_width) {
  return make_histogram(front_gaps(set), bin_width);
}

Histogram acceleration_histogram(const TrajectorySet& set, double bin_width) {
  std::vector<double> a;
  a.reserve(set.record_count());
  for (const auto& [id, rows] : set.vehicles) {
    for (const auto& r : rows) a.push_back(r.a);
  }
  return make_histogram(a, bin_width);
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
  out << "bin_start,bin_end,count\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double a = h.origin + static_cast<double>(i) * h.bin_width;
    out << format_g(a) << ',' << format_g(a + h.bin_width) << ',' << h.counts[i] << '\n';
  }
}

}  // namespace levelk::io
