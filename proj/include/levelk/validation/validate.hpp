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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "levelk/rl/policy.hpp"
#include "levelk/validation/empirical.hpp"
#include "levelk/validation/ks.hpp"

namespace levelk::validation {

struct StateTest {
  std::size_t state = 0;
  std::uint64_t driver_visits = 0;
  KsResult ks;
};

struct KsReport {
  int driver_id = 0;
  std::size_t n_limit = 1;
  std::size_t n_state = 0;  // states the driver visited
  std::size_t n_comp = 0;
  std::size_t n_success = 0;
  std::vector<StateTest> states;

  /// n_success / n_comp in percent; empty when nothing was compared.
  std::optional<double> percentage() const;
};

/// Compares one driver with one model state by state. A state is compared
/// when the driver visited it at least n_limit times and so did the model
/// during training; an empty `model_visits` skips the model check (the
/// uniform baseline has no training). Both distributions are floored at
/// `floor` and renormalized, then tested with n = the driver's visits.
/// Throws ConfigError if n_limit is 0.
KsReport validate_driver(int driver_id, const EmpiricalPolicy& driver, const rl::StochasticPolicy& model,
                         const std::vector<std::uint64_t>& model_visits, std::size_t n_limit, double floor = 0.01,
                         double alpha = 0.05);

/// Uniform distribution over the traffic actions for every driver state.
rl::StochasticPolicy uniform_traffic_policy();

struct NamedModel {
  std::string name;  // "level1", ..., "UD"
  const rl::StochasticPolicy* policy = nullptr;
  const std::vector<std::uint64_t>* visits = nullptr;  // null: no check
};

/// validate_driver for every (driver, model), in driver-id order. Drivers
/// run in parallel on up to `jobs` threads; the result does not depend on it.
/// Result[m][i] is model m on the i-th driver.
std::vector<std::vector<KsReport>> validate_all(const std::map<int, EmpiricalPolicy>& drivers,
                                                const std::vector<NamedModel>& models, std::size_t n_limit,
                                                std::size_t jobs = 1);

struct DriverSummary {
  int driver_id = 0;
  std::optional<double> combined;  // best level percentage
  std::optional<double> uniform;
  std::optional<double> difference() const;
};

struct LevelSummary {
  std::vector<DriverSummary> drivers;
  std::vector<std::size_t> histogram;  // drivers per 10% bin of the combined percentage, 100% in the last
  std::size_t undefined = 0;           // drivers without a combined percentage
  /// Share of drivers (with both values) whose combined percentage is above the uniform one.
  double share_above_uniform() const;
  /// Mean combined minus uniform over drivers with both values (0 if none).
  double mean_gap() const;
};

/// Per driver the best percentage over the level reports, next to the
/// uniform baseline. Throws std::invalid_argument when the driver lists differ.
LevelSummary best_level_summary(const std::vector<std::vector<KsReport>>& levels, const std::vector<KsReport>& uniform,
                                std::size_t bins = 10);

/// `driver_id,model,n_limit,n_comp,n_success,percentage` rows (NA when
/// nothing was compared).
void write_ks_csv_header(std::ostream& out);
void write_ks_rows(std::ostream& out, const std::string& model, const std::vector<KsReport>& reports);
/// `driver_id,model,n_limit,state,driver_visits,d,d_plus,d_minus,p_value,rejected` rows.
void write_ks_detail_header(std::ostream& out);
void write_ks_detail_rows(std::ostream& out, const std::string& model, const std::vector<KsReport>& reports);
/// `driver_id,combined,uniform,difference` rows then nothing else.
void write_summary_csv(std::ostream& out, const LevelSummary& summary);
/// `bin_start,bin_end,drivers` rows, plus an `NA,NA,<undefined>` row.
void write_summary_histogram_csv(std::ostream& out, const LevelSummary& summary);

}  // namespace levelk::validation
