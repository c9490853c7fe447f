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

#include "levelk/validation/synthetic.hpp"

#include <cmath>
#include <stdexcept>

#include "levelk/common/parallel.hpp"
#include "levelk/common/random.hpp"

namespace levelk::validation {

io::TrajectorySet to_trajectories(const std::vector<traffic::TrafficTrajectoryRow>& rows, double dt, int id_offset,
                                  long long frame_offset) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  io::TrajectorySet set;
  for (const auto& r : rows) {
    io::TrajectoryRecord rec;
    rec.vehicle_id = r.vehicle_id + id_offset;
    rec.frame = frame_offset + std::llround(r.time / dt);
    rec.x = r.x;
    rec.y = r.y;
    rec.lane = static_cast<int>(r.lane);
    rec.v = r.v_x;
    rec.a = r.a;
    set.vehicles[rec.vehicle_id].push_back(rec);
  }
  return set;
}

io::TrajectorySet generate_drivers(const traffic::TrafficScenario& scenario,
                                   const std::vector<const rl::StochasticPolicy*>& level_policies, std::size_t scenes,
                                   std::uint64_t seed, std::size_t jobs,
                                   std::vector<traffic::TrafficRunStats>* stats) {
  constexpr long long kFrameBlock = 10'000'000;
  std::vector<io::TrajectorySet> parts(scenes);
  std::vector<traffic::TrafficRunStats> run_stats(scenes);
  parallel_for(scenes, jobs, [&](std::size_t r) {
    std::vector<traffic::TrafficTrajectoryRow> rows;
    run_stats[r] = traffic::simulate_traffic(scenario, level_policies, derive_seed(seed, r), &rows);
    for (const auto& row : rows) {
      if (row.vehicle_id < 0 || row.vehicle_id >= 1000) throw std::invalid_argument("scenes are limited to 1000 vehicles");
    }
    parts[r] = to_trajectories(rows, scenario.dt, static_cast<int>(r) * 1000, static_cast<long long>(r) * kFrameBlock);
  });
  if (stats) *stats = std::move(run_stats);
  io::TrajectorySet all;
  for (auto& p : parts) {
    for (auto& [id, recs] : p.vehicles) all.vehicles[id] = std::move(recs);
  }
  return all;
}

}  // namespace levelk::validation
