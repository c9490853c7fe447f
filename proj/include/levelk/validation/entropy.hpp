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

#include <span>
#include <vector>

namespace levelk::validation {

/// -sum p_i ln p_i with 0 ln 0 = 0. Throws std::invalid_argument for a
/// negative entry or a vector that does not sum to 1 within 1e-9.
double entropy(std::span<const double> p);

/// Entries below `floor` are set to exactly `floor`; the others are scaled
/// so the vector sums to 1. Repeats until no scaled entry falls below the
/// floor, which makes the map idempotent. Throws std::invalid_argument when
/// floor * n >= 1 or the input is not a probability vector.
std::vector<double> floor_normalize(std::span<const double> p, double floor = 0.01);

}  // namespace levelk::validation
