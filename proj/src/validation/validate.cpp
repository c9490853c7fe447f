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

#include "levelk/validation/validate.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "levelk/common/error.hpp"
#include "levelk/common/parallel.hpp"
#include "levelk/common/text.hpp"
#include "levelk/traffic/observation.hpp"
#include "levelk/validation/entropy.hpp"

namespace levelk::validation {

std::optional<double> KsReport::percentage() const {
  if (n_comp == 0) return std::nullopt;
  return 100.0 * static_cast<double>(n_success) / static_cast<double>(n_comp);
}

KsReport validate_driver(int driver_id, const EmpiricalPolicy& driver, const rl::StochasticPolicy& model,
                         const std::vector<std::uint64_t>& model_visits, std::size_t n_limit, double floor,
                         double alpha) {
  if (n_limit == 0) throw ConfigError("n_limit must be at least 1");
  if (model.num_actions() != traffic::kNumTrafficActions) throw std::invalid_argument("model is not a driver policy");
  KsReport report;
  report.driver_id = driver_id;
  report.n_limit = n_limit;
  report.n_state = driver.states.size();
  for (const auto& [s, counts] : driver.states) {
    if (counts.visits < n_limit) continue;
    if (!model_visits.empty() && (s >= model_visits.size() || model_visits[s] < n_limit)) continue;
    std::vector<double> empirical(counts.actions.size());
    for (std::size_t a = 0; a < empirical.size(); ++a) {
      empirical[a] = static_cast<double>(counts.actions[a]) / static_cast<double>(counts.visits);
    }
    const auto row = model.row(s);
    const auto h = floor_normalize(row, floor);
    const auto e = floor_normalize(empirical, floor);
    StateTest t{s, counts.visits, ks_discrete(h, e, counts.visits, alpha)};
    ++report.n_comp;
    if (!t.ks.rejected) ++report.n_success;
    report.states.push_back(t);
  }
  return report;
}

rl::StochasticPolicy uniform_traffic_policy() {
  return rl::StochasticPolicy(traffic::kNumDriverStates, traffic::kNumTrafficActions);
}

std::vector<std::vector<KsReport>> validate_all(const std::map<int, EmpiricalPolicy>& drivers,
                                                const std::vector<NamedModel>& models, std::size_t n_limit,
                                                std::size_t jobs) {
  std::vector<const std::pair<const int, EmpiricalPolicy>*> list;
  for (const auto& d : drivers) list.push_back(&d);
  std::vector<std::vector<KsReport>> out(models.size(), std::vector<KsReport>(list.size()));
  static const std::vector<std::uint64_t> kNoVisits;
  parallel_for(list.size() * models.size(), jobs, [&](std::size_t k) {
    const std::size_t m = k / list.size(), i = k % list.size();
    const auto& model = models[m];
    if (model.policy == nullptr) throw std::invalid_argument("model " + model.name + " has no policy");
    out[m][i] = validate_driver(list[i]->first, list[i]->second, *model.policy,
                                model.visits ? *model.visits : kNoVisits, n_limit);
  });
  return out;
}

std::optional<double> DriverSummary::difference() const {
  if (!combined || !uniform) return std::nullopt;
  return *combined - *uniform;
}

double LevelSummary::share_above_uniform() const {
  std::size_t both = 0, above = 0;
  for (const auto& d : drivers) {
    if (const auto diff = d.difference()) {
      ++both;
      if (*diff > 0.0) ++above;
    }
  }
  return both == 0 ? 0.0 : static_cast<double>(above) / static_cast<double>(both);
}

double LevelSummary::mean_gap() const {
  std::size_t both = 0;
  double sum = 0.0;
  for (const auto& d : drivers) {
    if (const auto diff = d.difference()) {
      ++both;
      sum += *diff;
    }
  }
  return both == 0 ? 0.0 : sum / static_cast<double>(both);
}

LevelSummary best_level_summary(const std::vector<std::vector<KsReport>>& levels, const std::vector<KsReport>& uniform,
                                std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("histogram needs at least one bin");
  for (const auto& level : levels) {
    bool same = level.size() == uniform.size();
    for (std::size_t i = 0; same && i < level.size(); ++i) same = level[i].driver_id == uniform[i].driver_id;
    if (!same) throw std::invalid_argument("reports cover different drivers");
  }
  LevelSummary summary;
  summary.histogram.assign(bins, 0);
  for (std::size_t i = 0; i < uniform.size(); ++i) {
    DriverSummary d;
    d.driver_id = uniform[i].driver_id;
    d.uniform = uniform[i].percentage();
    for (const auto& level : levels) {
      const auto p = level[i].percentage();
      if (p && (!d.combined || *p > *d.combined)) d.combined = p;
    }
    if (d.combined) {
      const auto bin = static_cast<std::size_t>(*d.combined / 100.0 * static_cast<double>(bins));
      ++summary.histogram[std::min(bin, bins - 1)];
    } else {
      ++summary.undefined;
    }
    summary.drivers.push_back(d);
  }
  return summary;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_g(*v) : "NA"; }

}  // namespace

void write_ks_csv_header(std::ostream& out) { out << "driver_id,model,n_limit,n_comp,n_success,percentage\n"; }

void write_ks_rows(std::ostream& out, const std::string& model, const std::vector<KsReport>& reports) {
  for (const auto& r : reports) {
    out << r.driver_id << ',' << model << ',' << r.n_limit << ',' << r.n_comp << ',' << r.n_success << ','
        << opt(r.percentage()) << '\n';
  }
}

void write_ks_detail_header(std::ostream& out) {
  out << "driver_id,model,n_limit,state,driver_visits,d,d_plus,d_minus,p_value,rejected\n";
}

void write_ks_detail_rows(std::ostream& out, const std::string& model, const std::vector<KsReport>& reports) {
  for (const auto& r : reports) {
    for (const auto& t : r.states) {
      out << r.driver_id << ',' << model << ',' << r.n_limit << ',' << t.state << ',' << t.driver_visits << ','
          << format_g(t.ks.d) << ',' << format_g(t.ks.d_plus) << ',' << format_g(t.ks.d_minus) << ','
          << format_g(t.ks.p_value) << ',' << (t.ks.rejected ? 1 : 0) << '\n';
    }
  }
}

void write_summary_csv(std::ostream& out, const LevelSummary& summary) {
  out << "driver_id,combined,uniform,difference\n";
  for (const auto& d : summary.drivers) {
    out << d.driver_id << ',' << opt(d.combined) << ',' << opt(d.uniform) << ',' << opt(d.difference()) << '\n';
  }
}

void write_summary_histogram_csv(std::ostream& out, const LevelSummary& summary) {
  out << "bin_start,bin_end,drivers\n";
  const double w = 100.0 / static_cast<double>(summary.histogram.size());
  for (std::size_t i = 0; i < summary.histogram.size(); ++i) {
    out << format_g(i * w) << ',' << format_g((i + 1) * w) << ',' << summary.histogram[i] << '\n';
  }
  out << "NA,NA," << summary.undefined << '\n';
}

}  // namespace levelk::validation
