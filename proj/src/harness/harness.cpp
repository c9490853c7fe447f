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

#include "levelk/harness/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

#include "levelk/airspace/domain.hpp"
#include "levelk/common/error.hpp"
#include "levelk/common/parallel.hpp"
#include "levelk/common/random.hpp"
#include "levelk/common/text.hpp"

namespace levelk::harness {

EpisodeResult run_episode(const airspace::AirspaceScenario& scenario, const levels::PolicyRegistry& registry,
                          std::uint64_t seed, bool log_trajectory) {
  using namespace airspace;
  AirspaceWorld world = instantiate(scenario, seed);
  std::vector<const rl::StochasticPolicy*> pilots(world.aircraft.size(), nullptr);
  for (std::size_t i = 0; i < world.aircraft.size(); ++i) {
    if (world.aircraft[i].kind != AircraftKind::kManned) continue;
    const std::size_t level = world.aircraft[i].level;
    if (!registry.has("airspace", level)) {
      throw ConfigError("no airspace policy for pilot level " + std::to_string(level));
    }
    pilots[i] = &registry.get("airspace", level);
  }
  std::vector<Rng> rngs;
  for (std::size_t i = 0; i < world.aircraft.size(); ++i) rngs.emplace_back(derive_seed(derive_seed(seed, 1), i));
  EpisodeResult result;
  MetricsAccumulator metrics(world);
  metrics.record(world);
  if (log_trajectory) append_trajectory_rows(world, result.trajectory);
  const auto per_decision = static_cast<std::size_t>(std::llround(scenario.decision_interval / scenario.dt));
  const double limit = scenario.duration - 1e-9;
  auto any_active = [&] {
    return std::any_of(world.aircraft.begin(), world.aircraft.end(), [](const auto& a) { return a.active; });
  };
  for (std::size_t k = 0; world.time < limit && any_active(); ++k) {
    if (k % per_decision == 0) pilot_decisions(world, pilots, scenario.decision_interval, scenario.dt, rngs);
    step_airspace(world, scenario.dt);
    metrics.record(world);
    if (log_trajectory) append_trajectory_rows(world, result.trajectory);
  }
  result.metrics = metrics.finish(world);
  return result;
}

void SweepGrid::validate() const {
  if (distance_horizons.empty() || time_horizons.empty()) throw ConfigError("sweep axes must be nonempty");
  if (runs_per_cell == 0) throw ConfigError("runs_per_cell must be positive");
  for (double d : distance_horizons) {
    if (!(d >= 0.0)) throw ConfigError("distance horizons must be nonnegative");
  }
  for (double t : time_horizons) {
    if (!(t >= 0.0)) throw ConfigError("time horizons must be nonnegative");
  }
}

std::uint64_t SweepGrid::run_seed(std::size_t run) const { return derive_seed(base_seed, run); }

Stat summarize(std::span<const double> values) {
  Stat s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return s;
}

std::vector<CellSummary> sweep(const SweepGrid& grid, const airspace::AirspaceScenario& scenario,
                               const levels::PolicyRegistry& registry, airspace::SaaAlgorithm algorithm,
                               std::size_t jobs) {
  grid.validate();
  std::vector<std::pair<double, double>> cells;  // (distance, time)
  if (grid.control) cells.emplace_back(0.0, 0.0);
  for (double t : grid.time_horizons) {
    for (double d : grid.distance_horizons) cells.emplace_back(d, t);
  }
  const std::size_t runs = grid.runs_per_cell;
  std::vector<EpisodeMetrics> results(cells.size() * runs);
  parallel_for(results.size(), jobs, [&](std::size_t item) {
    const std::size_t c = item / runs, r = item % runs;
    airspace::AirspaceScenario s = scenario;
    s.saa.algorithm = algorithm;
    s.saa.distance_horizon = cells[c].first;
    s.saa.time_horizon = cells[c].second;
    results[item] = run_episode(s, registry, grid.run_seed(r)).metrics;
  });
  std::vector<CellSummary> out;
  std::vector<double> v(runs), md(runs), ud(runs), ft(runs), col(runs);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t r = 0; r < runs; ++r) {
      const EpisodeMetrics& m = results[c * runs + r];
      v[r] = static_cast<double>(m.separation_violations);
      md[r] = m.manned_deviation;
      ud[r] = m.uas_deviation;
      ft[r] = m.uas_flight_time;
      col[r] = static_cast<double>(m.collisions);
    }
    CellSummary cell;
    cell.distance_horizon = cells[c].first;
    cell.time_horizon = cells[c].second;
    cell.violations = summarize(v);
    cell.manned_deviation = summarize(md);
    cell.uas_deviation = summarize(ud);
    cell.flight_time = summarize(ft);
    cell.collisions = summarize(col);
    cell.runs = runs;
    out.push_back(cell);
  }
  return out;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("pearson: length mismatch");
  if (xs.size() < 2) throw std::invalid_argument("pearson: need at least two points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) throw std::domain_error("pearson: correlation undefined for zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::uint64_t memory_estimate(std::uint64_t num_states, std::uint64_t num_columns, std::uint64_t bytes_per_value) {
  if (num_states == 0 || num_columns == 0 || bytes_per_value == 0) {
    throw std::invalid_argument("memory_estimate: inputs must be positive");
  }
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  if (num_states > max / num_columns || num_states * num_columns > max / bytes_per_value) {
    throw std::overflow_error("memory_estimate: result does not fit in 64 bits");
  }
  return num_states * num_columns * bytes_per_value;
}

double deviation_correlation(const std::vector<CellSummary>& cells) {
  std::vector<double> manned, uas;
  for (const auto& c : cells) {
    if (c.is_control()) continue;
    manned.push_back(c.manned_deviation.mean);
    uas.push_back(c.uas_deviation.mean);
  }
  return pearson(manned, uas);
}

void write_report_csv(std::ostream& out, const std::vector<CellSummary>& cells) {
  out << "distance_horizon,time_horizon,mean_violations,se_violations,mean_manned_dev,mean_uas_dev,"
         "mean_flight_time,se_manned_dev,se_uas_dev,se_flight_time,mean_collisions,se_collisions,runs\n";
  for (const auto& c : cells) {
    out << format_g(c.distance_horizon) << ',' << format_g(c.time_horizon) << ',' << format_g(c.violations.mean)
        << ',' << format_g(c.violations.se) << ',' << format_g(c.manned_deviation.mean) << ','
        << format_g(c.uas_deviation.mean) << ',' << format_g(c.flight_time.mean) << ','
        << format_g(c.manned_deviation.se) << ',' << format_g(c.uas_deviation.se) << ','
        << format_g(c.flight_time.se) << ',' << format_g(c.collisions.mean) << ',' << format_g(c.collisions.se)
        << ',' << c.runs << '\n';
  }
}

void write_plot_csvs(const std::filesystem::path& dir, const std::vector<CellSummary>& cells) {
  std::filesystem::create_directories(dir);
  std::vector<double> ds, ts;
  std::map<std::pair<double, double>, const CellSummary*> by_key;
  for (const auto& c : cells) {
    if (c.is_control()) continue;
    if (std::find(ds.begin(), ds.end(), c.distance_horizon) == ds.end()) ds.push_back(c.distance_horizon);
    if (std::find(ts.begin(), ts.end(), c.time_horizon) == ts.end()) ts.push_back(c.time_horizon);
    by_key[{c.time_horizon, c.distance_horizon}] = &c;
  }
  struct Metric {
    const char* file;
    double (*get)(const CellSummary&);
  };
  const Metric metrics[] = {
      {"violations.csv", [](const CellSummary& c) { return c.violations.mean; }},
      {"manned_deviation.csv", [](const CellSummary& c) { return c.manned_deviation.mean; }},
      {"uas_deviation.csv", [](const CellSummary& c) { return c.uas_deviation.mean; }},
      {"flight_time.csv", [](const CellSummary& c) { return c.flight_time.mean; }},
      {"collisions.csv", [](const CellSummary& c) { return c.collisions.mean; }},
  };
  for (const auto& m : metrics) {
    std::ofstream out(dir / m.file);
    if (!out) throw DataError("cannot write " + (dir / m.file).string());
    out << "time_horizon";
    for (double d : ds) out << ",d" << format_g(d);
    out << '\n';
    for (double t : ts) {
      out << format_g(t);
      for (double d : ds) {
        const auto it = by_key.find({t, d});
        out << ',' << (it == by_key.end() ? std::string("NA") : format_g(m.get(*it->second)));
      }
      out << '\n';
    }
  }
}

void write_trajectory_csv(std::ostream& out, const std::vector<airspace::TrajectoryRow>& rows) {
  out << "t,aircraft_id,x,y,heading,action\n";
  for (const auto& r : rows) {
    out << format_g(r.time) << ',' << r.aircraft_id << ',' << format_g(r.x) << ',' << format_g(r.y) << ','
        << format_g(r.heading) << ',' << r.action << '\n';
  }
}

}  // namespace levelk::harness
