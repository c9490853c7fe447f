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
#include <filesystem>
#include <ostream>
#include <span>
#include <vector>

#include "levelk/airspace/scenario.hpp"
#include "levelk/airspace/simulation.hpp"
#include "levelk/levels/registry.hpp"

namespace levelk::harness {

using EpisodeMetrics = airspace::AirspaceMetrics;

struct EpisodeResult {
  EpisodeMetrics metrics;
  std::vector<airspace::TrajectoryRow> trajectory;  // one row per aircraft per dt, when requested
};

/// Runs one airspace episode with every manned aircraft flying the
/// registry's "airspace" policy for its level. Deterministic in `seed`: the
/// scene comes from `seed` and the pilot draws from derive_seed(seed, 1).
/// Throws ConfigError if a level has no policy.
EpisodeResult run_episode(const airspace::AirspaceScenario& scenario, const levels::PolicyRegistry& registry,
                          std::uint64_t seed, bool log_trajectory = false);

struct SweepGrid {
  std::vector<double> distance_horizons;  // km
  std::vector<double> time_horizons;      // s; 0 disables SAA for that row
  std::size_t runs_per_cell = 100;
  std::uint64_t base_seed = 1;
  bool control = true;  // add one SAA-disabled cell ahead of the grid

  /// Throws ConfigError for empty axes, zero runs or negative horizons.
  void validate() const;
  /// Seed of run r. It does not depend on the cell, so every cell replays
  /// the same scenes and pilot draws (paired comparison).
  std::uint64_t run_seed(std::size_t run) const;
};

struct Stat {
  double mean = 0.0;
  double se = 0.0;  // sample standard deviation / sqrt(n); 0 for n = 1
};

Stat summarize(std::span<const double> values);

struct CellSummary {
  double distance_horizon = 0.0;
  double time_horizon = 0.0;
  Stat violations;
  Stat manned_deviation;
  Stat uas_deviation;
  Stat flight_time;
  Stat collisions;
  std::size_t runs = 0;

  bool is_control() const { return !(time_horizon > 0.0 && distance_horizon > 0.0); }
};

/// Every (time horizon, distance horizon) cell, time-major, preceded by the
/// control cell when grid.control is set. Work is spread over `jobs`
/// threads; results do not depend on the job count or evaluation order.
std::vector<CellSummary> sweep(const SweepGrid& grid, const airspace::AirspaceScenario& scenario,
                               const levels::PolicyRegistry& registry, airspace::SaaAlgorithm algorithm,
                               std::size_t jobs = 1);

/// Product-moment correlation. Throws std::invalid_argument for mismatched
/// or short inputs and std::domain_error when either side has zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

/// Bytes for a dense table: states * columns * bytes_per_value. Throws
/// std::invalid_argument for a zero input and std::overflow_error on overflow.
std::uint64_t memory_estimate(std::uint64_t num_states, std::uint64_t num_columns, std::uint64_t bytes_per_value);

/// Manned versus UAS mean deviation across the SAA-enabled cells.
double deviation_correlation(const std::vector<CellSummary>& cells);

void write_report_csv(std::ostream& out, const std::vector<CellSummary>& cells);

/// One matrix per metric (violations.csv, manned_deviation.csv,
/// uas_deviation.csv, flight_time.csv, collisions.csv): rows are time
/// horizons, columns distance horizons. The control cell is left out.
void write_plot_csvs(const std::filesystem::path& dir, const std::vector<CellSummary>& cells);

void write_trajectory_csv(std::ostream& out, const std::vector<airspace::TrajectoryRow>& rows);

}  // namespace levelk::harness
