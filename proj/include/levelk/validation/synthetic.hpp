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
#include <vector>

#include "levelk/io/trajectory.hpp"
#include "levelk/traffic/domain.hpp"

namespace levelk::validation {

/// Converts logged decision rows to canonical records. Vehicle ids are
/// shifted by `id_offset` and frames (time / dt, rounded) by `frame_offset`.
io::TrajectorySet to_trajectories(const std::vector<traffic::TrafficTrajectoryRow>& rows, double dt,
                                  int id_offset = 0, long long frame_offset = 0);

/// Runs `scenes` independent traffic scenes (scene r seeded with
/// derive_seed(seed, r)) and merges their logs. Scenes are kept apart by
/// disjoint vehicle ids (r * 1000 + i) and frame ranges (r * 10^7 onward),
/// so each vehicle is one driver and neighbours come only from its own
/// scene. Scenes run on up to `jobs` threads; the result does not depend on it.
/// `stats`, when given, receives the run statistics of each scene.
io::TrajectorySet generate_drivers(const traffic::TrafficScenario& scenario,
                                   const std::vector<const rl::StochasticPolicy*>& level_policies, std::size_t scenes,
                                   std::uint64_t seed, std::size_t jobs = 1,
                                   std::vector<traffic::TrafficRunStats>* stats = nullptr);

}  // namespace levelk::validation
