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

// levelk: command-line entry point. Exit codes: 0 ok, 1 unexpected failure,
// 2 configuration error, 3 registry or policy error, 4 data error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "levelk/airspace/domain.hpp"
#include "levelk/airspace/scenario.hpp"
#include "levelk/common/error.hpp"
#include "levelk/common/parallel.hpp"
#include "levelk/common/random.hpp"
#include "levelk/common/text.hpp"
#include "levelk/harness/harness.hpp"
#include "levelk/io/histogram.hpp"
#include "levelk/io/policy_io.hpp"
#include "levelk/io/trajectory.hpp"
#include "levelk/levels/registry.hpp"
#include "levelk/levels/training.hpp"
#include "levelk/traffic/domain.hpp"
#include "levelk/traffic/scenario.hpp"
#include "levelk/validation/empirical.hpp"
#include "levelk/validation/synthetic.hpp"
#include "levelk/validation/validate.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace levelk;

namespace {

// Values from a JSON config file. The top level may hold "seed", "jobs" and
// one object per subcommand whose keys are that subcommand's long flag names
// (dashes become underscores). A flag given on the command line always wins.
class Config {
 public:
  void load(const std::string& path, const std::string& section) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    dir_ = fs::path(path).parent_path();
    json top;
    try {
      top = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError("config file '" + path + "': " + e.what());
    }
    if (!top.is_object()) throw ConfigError("config file must hold a JSON object");
    for (auto it = top.begin(); it != top.end(); ++it) {
      static const std::set<std::string> known{"seed",     "jobs",     "train",  "simulate",    "sweep",
                                               "ingest",   "validate", "report", "mem-estimate"};
      if (!known.count(it.key())) throw ConfigError("unknown config key '" + it.key() + "'");
    }
    if (top.contains("seed")) values_["seed"] = top["seed"];
    if (top.contains("jobs")) values_["jobs"] = top["jobs"];
    if (top.contains(section)) {
      const auto& s = top[section];
      if (!s.is_object()) throw ConfigError("config section '" + section + "' must be an object");
      for (auto it = s.begin(); it != s.end(); ++it) {
        values_[it.key()] = it.value();
        section_keys_.insert(it.key());
      }
    }
  }

  template <typename T>
  void apply(const CLI::Option* opt, const std::string& key, T& value) {
    used_.insert(key);
    if (opt->count() > 0) return;
    const auto it = values_.find(key);
    if (it == values_.end()) return;
    try {
      value = it->second.get<T>();
    } catch (const json::exception& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }

  /// Scenario JSON text from the config, inline or as a path relative to the config file.
  std::optional<std::string> scenario_text(const CLI::Option* opt) {
    used_.insert("scenario");
    if (opt->count() > 0) return std::nullopt;
    const auto it = values_.find("scenario");
    if (it == values_.end()) return std::nullopt;
    if (it->second.is_object()) return it->second.dump();
    if (!it->second.is_string()) throw ConfigError("config key 'scenario' must be a path or an object");
    return read_text(dir_ / it->second.get<std::string>());
  }

  void finish() const {
    for (const auto& k : section_keys_) {
      if (!used_.count(k)) throw ConfigError("unknown config key '" + k + "'");
    }
  }

  static std::string read_text(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path.string() + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

 private:
  fs::path dir_;
  std::map<std::string, json> values_;
  std::set<std::string> section_keys_;
  std::set<std::string> used_;
};

struct Common {
  std::uint64_t seed = 1;
  std::size_t jobs = 0;
  std::string config;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* jobs_opt = nullptr;
};

void add_common(CLI::App* app, Common& c) {
  c.seed_opt = app->add_option("--seed", c.seed, "Base random seed (default 1)");
  c.jobs_opt = app->add_option("--jobs", c.jobs, "Worker threads; 0 uses all cores (default 0). Outputs do not depend on it");
  app->add_option("--config", c.config, "JSON config file; command-line flags take precedence");
}

void apply_common(Config& cfg, Common& c) {
  cfg.apply(c.seed_opt, "seed", c.seed);
  cfg.apply(c.jobs_opt, "jobs", c.jobs);
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  return out;
}

void check_domain(const std::string& domain) {
  if (domain != "traffic" && domain != "airspace") {
    throw ConfigError("unknown domain '" + domain + "' (expected airspace or traffic)");
  }
}

traffic::TrafficScenario traffic_scenario(Config& cfg, const CLI::Option* opt, const std::string& path,
                                          traffic::TrafficScenario fallback) {
  if (!path.empty()) return traffic::load_traffic_scenario(path);
  if (auto text = cfg.scenario_text(opt)) return traffic::parse_traffic_scenario(*text);
  return fallback;
}

airspace::AirspaceScenario airspace_scenario(Config& cfg, const CLI::Option* opt, const std::string& path,
                                             airspace::AirspaceScenario fallback) {
  if (!path.empty()) return airspace::load_airspace_scenario(path);
  if (auto text = cfg.scenario_text(opt)) return airspace::parse_airspace_scenario(*text);
  return fallback;
}

/// Registry with the domain anchor plus whatever levels `root` holds.
levels::PolicyRegistry load_registry(const std::string& domain, const std::string& root) {
  levels::PolicyRegistry reg;
  reg.set_anchor(domain, domain == "traffic" ? traffic::traffic_anchor_policy() : airspace::airspace_anchor_policy());
  if (!root.empty()) {
    if (!fs::is_directory(fs::path(root) / domain)) {
      throw RegistryError("policy directory '" + (fs::path(root) / domain).string() + "' does not exist");
    }
    reg.load(root, domain);
  }
  return reg;
}

// ---------------------------------------------------------------- train

struct TrainOptions {
  Common common;
  std::string domain = "traffic";
  std::size_t levels = 3;
  std::string algo = "jaakkola";
  std::size_t episodes = 200;
  double alpha = 0.1, gamma = 0.9, epsilon = 0.1, tau = 1000.0, floor = 0.01, q_explore = 0.1;
  std::size_t nfq_iterations = 3, nfq_epochs = 30;
  bool respond_all = false;
  std::vector<double> mix;
  std::string scenario;
  std::string out = "out";
  std::map<std::string, CLI::Option*> opts;
};

int run_train(TrainOptions& o) {
  Config cfg;
  cfg.load(o.common.config, "train");
  apply_common(cfg, o.common);
  cfg.apply(o.opts["domain"], "domain", o.domain);
  cfg.apply(o.opts["levels"], "levels", o.levels);
  cfg.apply(o.opts["algo"], "algo", o.algo);
  cfg.apply(o.opts["episodes"], "episodes", o.episodes);
  cfg.apply(o.opts["alpha"], "alpha", o.alpha);
  cfg.apply(o.opts["gamma"], "gamma", o.gamma);
  cfg.apply(o.opts["epsilon"], "epsilon", o.epsilon);
  cfg.apply(o.opts["tau"], "tau", o.tau);
  cfg.apply(o.opts["floor"], "floor", o.floor);
  cfg.apply(o.opts["q-explore"], "q_explore", o.q_explore);
  cfg.apply(o.opts["nfq-iterations"], "nfq_iterations", o.nfq_iterations);
  cfg.apply(o.opts["nfq-epochs"], "nfq_epochs", o.nfq_epochs);
  cfg.apply(o.opts["respond-all"], "respond_all", o.respond_all);
  cfg.apply(o.opts["mix"], "mix", o.mix);
  cfg.apply(o.opts["out"], "out", o.out);
  check_domain(o.domain);

  rl::LearningConfig lc;
  lc.alpha = o.alpha;
  lc.gamma = o.gamma;
  lc.epsilon = o.epsilon;
  lc.gamma_schedule = rl::GammaSchedule::harmonic(o.tau);
  lc.exploration_floor = o.floor;
  lc.q_explore = o.q_explore;
  lc.episodes = o.episodes;
  lc.seed = o.common.seed;
  lc.validate();
  levels::LevelKConfig lk;
  lk.max_level = o.levels;
  lk.respond_to_all_lower = o.respond_all;
  lk.population_mix = o.mix;
  lk.validate();
  levels::NfqSettings nfq;
  nfq.iterations = o.nfq_iterations;
  nfq.epochs = o.nfq_epochs;
  const auto algorithm = levels::parse_algorithm(o.algo);

  std::unique_ptr<levels::Domain> domain;
  std::string scenario_json;
  if (o.domain == "traffic") {
    auto s = traffic_scenario(cfg, o.opts["scenario"], o.scenario, traffic::default_traffic_scenario());
    s.validate();
    scenario_json = traffic::traffic_scenario_to_json(s);
    domain = std::make_unique<traffic::TrafficDomain>(s);
  } else {
    auto s = airspace_scenario(cfg, o.opts["scenario"], o.scenario, airspace::encounter_airspace_scenario());
    s.validate();
    scenario_json = airspace::airspace_scenario_to_json(s);
    domain = std::make_unique<airspace::AirspaceDomain>(s);
  }
  cfg.finish();

  levels::PolicyRegistry reg;
  const auto trained = levels::train_levels(reg, *domain, lc, lk, algorithm, nfq);

  const fs::path root(o.out);
  const fs::path dir = root / o.domain;
  fs::create_directories(dir);
  auto telemetry = open_out(dir / "telemetry.csv");
  telemetry << "level,episode,steps,total_reward,avg_reward,entropy\n";
  for (std::size_t k = 1; k <= trained.size(); ++k) {
    const auto& t = trained[k - 1];
    io::save_policy(levels::PolicyRegistry::policy_path(root, o.domain, k), t.policy, k);
    io::save_checkpoint(levels::PolicyRegistry::checkpoint_path(root, o.domain, k), t.tables, t.policy, k);
    for (const auto& e : t.telemetry) {
      telemetry << k << ',' << e.episode << ',' << e.steps << ',' << format_g(e.total_reward) << ','
                << format_g(e.avg_reward) << ',' << format_g(e.entropy) << '\n';
    }
    const auto& last = t.telemetry.back();
    std::printf("level %zu: %zu episodes, last avg reward %s, entropy %s\n", k, t.telemetry.size(),
                format_g(last.avg_reward, 6).c_str(), format_g(last.entropy, 6).c_str());
  }
  open_out(dir / "scenario.json") << scenario_json << '\n';
  return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  Common common;
  std::string domain = "traffic";
  std::string policies;
  std::string scenario;
  std::size_t runs = 1;
  int level = -1;
  double duration = 0.0;
  std::string out;
  std::string stats;
  std::map<std::string, CLI::Option*> opts;
};

int run_simulate(SimulateOptions& o) {
  Config cfg;
  cfg.load(o.common.config, "simulate");
  apply_common(cfg, o.common);
  cfg.apply(o.opts["domain"], "domain", o.domain);
  cfg.apply(o.opts["policies"], "policies", o.policies);
  cfg.apply(o.opts["runs"], "runs", o.runs);
  cfg.apply(o.opts["level"], "level", o.level);
  cfg.apply(o.opts["duration"], "duration", o.duration);
  cfg.apply(o.opts["out"], "out", o.out);
  cfg.apply(o.opts["stats"], "stats", o.stats);
  check_domain(o.domain);
  if (o.out.empty()) throw ConfigError("simulate needs --out");
  if (o.runs == 0) throw ConfigError("--runs must be at least 1");
  if (o.duration < 0.0) throw ConfigError("--duration must be positive");
  const auto reg = load_registry(o.domain, o.policies);

  if (o.domain == "traffic") {
    auto s = traffic_scenario(cfg, o.opts["scenario"], o.scenario, traffic::default_traffic_scenario());
    cfg.finish();
    if (o.level >= 0) s.driver_level = static_cast<std::size_t>(o.level);
    if (o.duration > 0.0) s.duration = o.duration;
    s.validate();
    std::vector<const rl::StochasticPolicy*> pols;
    for (std::size_t k : reg.levels("traffic")) pols.push_back(&reg.get("traffic", k));
    std::vector<traffic::TrafficRunStats> stats;
    const auto data = validation::generate_drivers(s, pols, o.runs, o.common.seed, o.common.jobs, &stats);
    io::save_trajectories(o.out, data);
    if (!o.stats.empty()) {
      auto out = open_out(o.stats);
      out << "run,collisions,rejected_lane_changes,mean_speed,duration\n";
      for (std::size_t r = 0; r < stats.size(); ++r) {
        out << r << ',' << stats[r].collisions << ',' << stats[r].rejected_lane_changes << ','
            << format_g(stats[r].mean_speed) << ',' << format_g(stats[r].duration) << '\n';
      }
    }
    std::printf("traffic: %zu run(s), %zu vehicles, %zu records\n", o.runs, data.vehicles.size(),
                data.record_count());
    return 0;
  }

  auto s = airspace_scenario(cfg, o.opts["scenario"], o.scenario, airspace::encounter_airspace_scenario());
  cfg.finish();
  if (o.level >= 0) {
    s.pilot_level = static_cast<std::size_t>(o.level);
    s.pilot_mix.clear();
  }
  if (o.duration > 0.0) s.duration = o.duration;
  s.validate();
  std::vector<harness::EpisodeResult> results(o.runs);
  parallel_for(o.runs, o.common.jobs, [&](std::size_t r) {
    results[r] = harness::run_episode(s, reg, derive_seed(o.common.seed, r), true);
  });
  std::vector<airspace::TrajectoryRow> rows;
  for (std::size_t r = 0; r < o.runs; ++r) {
    for (auto row : results[r].trajectory) {
      row.aircraft_id += static_cast<int>(r) * 1000;
      rows.push_back(row);
    }
  }
  {
    auto out = open_out(o.out);
    harness::write_trajectory_csv(out, rows);
  }
  if (!o.stats.empty()) {
    auto out = open_out(o.stats);
    out << "run,violations,collisions,manned_deviation,uas_deviation,uas_flight_time\n";
    for (std::size_t r = 0; r < o.runs; ++r) {
      const auto& m = results[r].metrics;
      out << r << ',' << m.separation_violations << ',' << m.collisions << ',' << format_g(m.manned_deviation) << ','
          << format_g(m.uas_deviation) << ',' << format_g(m.uas_flight_time) << '\n';
    }
  }
  std::printf("airspace: %zu run(s), %zu trajectory rows\n", o.runs, rows.size());
  return 0;
}

// ---------------------------------------------------------------- sweep

struct SweepOptions {
  Common common;
  int saa = 2;
  std::vector<double> dh{30.0, 40.0, 50.0};
  std::vector<double> th{120.0, 180.0, 240.0};
  std::size_t runs = 100;
  std::string scenario;
  std::string policies;
  bool control = false;
  std::string out;
  std::string plots;
  std::map<std::string, CLI::Option*> opts;
};

int run_sweep(SweepOptions& o) {
  Config cfg;
  cfg.load(o.common.config, "sweep");
  apply_common(cfg, o.common);
  cfg.apply(o.opts["saa"], "saa", o.saa);
  cfg.apply(o.opts["dh"], "dh", o.dh);
  cfg.apply(o.opts["th"], "th", o.th);
  cfg.apply(o.opts["runs"], "runs", o.runs);
  cfg.apply(o.opts["policies"], "policies", o.policies);
  cfg.apply(o.opts["control"], "control", o.control);
  cfg.apply(o.opts["out"], "out", o.out);
  cfg.apply(o.opts["plots"], "plots", o.plots);
  auto s = airspace_scenario(cfg, o.opts["scenario"], o.scenario, airspace::encounter_airspace_scenario());
  cfg.finish();
  if (o.saa != 1 && o.saa != 2) throw ConfigError("--saa must be 1 or 2");
  if (o.out.empty()) throw ConfigError("sweep needs --out");
  s.validate();
  const auto reg = load_registry("airspace", o.policies);
  for (std::size_t k = 0; k < s.pilot_mix.size(); ++k) {
    if (s.pilot_mix[k] > 0.0 && !reg.has("airspace", k)) {
      throw RegistryError("scenario needs airspace level " + std::to_string(k) + " policies");
    }
  }
  if (s.pilot_mix.empty() && !reg.has("airspace", s.pilot_level)) {
    throw RegistryError("scenario needs airspace level " + std::to_string(s.pilot_level) + " policies");
  }
  harness::SweepGrid grid;
  grid.distance_horizons = o.dh;
  grid.time_horizons = o.th;
  grid.runs_per_cell = o.runs;
  grid.base_seed = o.common.seed;
  grid.control = o.control;
  const auto algorithm = o.saa == 1 ? airspace::SaaAlgorithm::kSaa1 : airspace::SaaAlgorithm::kSaa2;
  const auto cells = harness::sweep(grid, s, reg, algorithm, o.common.jobs);
  {
    auto out = open_out(o.out);
    harness::write_report_csv(out, cells);
  }
  if (!o.plots.empty()) harness::write_plot_csvs(o.plots, cells);
  std::printf("sweep: %zu cells x %zu runs, SAA%d\n", cells.size(), o.runs, o.saa);
  try {
    std::printf("manned/UAS deviation correlation: %s\n", format_g(harness::deviation_correlation(cells), 6).c_str());
  } catch (const std::exception&) {
    std::printf("manned/UAS deviation correlation: n/a\n");
  }
  return 0;
}

// ---------------------------------------------------------------- ingest

struct IngestOptions {
  Common common;
  std::string data;
  std::string format = "canonical";
  std::size_t lanes = 0;
  bool lenient = false;
  std::string out;
  std::string headway;
  std::string accel;
  double headway_bin = 1.0;
  double accel_bin = 0.1;
  std::map<std::string, CLI::Option*> opts;
};

io::TrajectorySet read_data(const std::string& path, const std::string& format, const io::ParseOptions& po) {
  if (format == "canonical") return io::load_trajectories(path, po);
  if (format != "ngsim") throw ConfigError("unknown data format '" + format + "' (expected canonical or ngsim)");
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::stringstream converted;
  io::convert_ngsim(in, converted);
  return io::parse_trajectories(converted, po);
}

int run_ingest(IngestOptions& o) {
  Config cfg;
  cfg.load(o.common.config, "ingest");
  apply_common(cfg, o.common);
  cfg.apply(o.opts["data"], "data", o.data);
  cfg.apply(o.opts["format"], "format", o.format);
  cfg.apply(o.opts["lanes"], "lanes", o.lanes);
  cfg.apply(o.opts["lenient"], "lenient", o.lenient);
  cfg.apply(o.opts["out"], "out", o.out);
  cfg.apply(o.opts["headway"], "headway", o.headway);
  cfg.apply(o.opts["accel"], "accel", o.accel);
  cfg.apply(o.opts["headway-bin"], "headway_bin", o.headway_bin);
  cfg.apply(o.opts["accel-bin"], "accel_bin", o.accel_bin);
  cfg.finish();
  if (o.data.empty()) throw ConfigError("ingest needs --data");
  if (!(o.headway_bin > 0.0) || !(o.accel_bin > 0.0)) throw ConfigError("bin widths must be positive");
  const auto set = read_data(o.data, o.format, {!o.lenient, o.lanes});
  for (const auto& w : set.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  if (!o.out.empty()) io::save_trajectories(o.out, set);
  if (!o.headway.empty()) {
    auto out = open_out(o.headway);
    io::write_histogram_csv(out, io::headway_histogram(set, o.headway_bin));
  }
  if (!o.accel.empty()) {
    auto out = open_out(o.accel);
    io::write_histogram_csv(out, io::acceleration_histogram(set, o.accel_bin));
  }
  const auto gaps = io::headway_histogram(set, o.headway_bin);
  std::printf("ingest: %zu vehicles, %zu records, %zu skipped rows\n", set.vehicles.size(), set.record_count(),
              set.skipped_rows);
  std::printf("front gaps in [11, 27] m: %s\n", format_g(gaps.band_fraction(11.0, 27.0), 4).c_str());
  return 0;
}

// ---------------------------------------------------------------- validate

struct ValidateOptions {
  Common common;
  std::string data;
  std::string policies;
  std::vector<std::size_t> nlimit{1, 3, 5};
  std::string out;
  std::string detail;
  std::string scenario;
  bool straight = false;
  bool lenient = false;
  long long stride = 10;
  std::map<std::string, CLI::Option*> opts;
};

int run_validate(ValidateOptions& o) {
  Config cfg;
  cfg.load(o.common.config, "validate");
  apply_common(cfg, o.common);
  cfg.apply(o.opts["data"], "data", o.data);
  cfg.apply(o.opts["policies"], "policies", o.policies);
  cfg.apply(o.opts["nlimit"], "nlimit", o.nlimit);
  cfg.apply(o.opts["out"], "out", o.out);
  cfg.apply(o.opts["detail"], "detail", o.detail);
  cfg.apply(o.opts["straight"], "straight", o.straight);
  cfg.apply(o.opts["lenient"], "lenient", o.lenient);
  cfg.apply(o.opts["stride"], "stride", o.stride);
  if (o.data.empty() || o.policies.empty() || o.out.empty()) {
    throw ConfigError("validate needs --data, --policies and --out");
  }
  for (auto n : o.nlimit) {
    if (n == 0) throw ConfigError("--nlimit values must be at least 1");
  }
  if (o.stride <= 0) throw ConfigError("--stride must be positive");
  const auto reg = load_registry("traffic", o.policies);
  const fs::path saved = fs::path(o.policies) / "traffic" / "scenario.json";
  auto fallback = fs::exists(saved) ? traffic::load_traffic_scenario(saved) : traffic::default_traffic_scenario();
  const auto s = traffic_scenario(cfg, o.opts["scenario"], o.scenario, fallback);
  cfg.finish();
  if (reg.top_level("traffic") == 0) {
    throw RegistryError("no trained traffic levels in '" + (fs::path(o.policies) / "traffic").string() + "'");
  }

  const auto data = io::load_trajectories(o.data, {!o.lenient, s.road.lanes});
  for (const auto& w : data.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  validation::EmpiricalOptions eo;
  eo.road = traffic::effective_road(s);
  eo.ring = !o.straight;
  eo.stride = o.stride;
  const auto drivers = validation::build_empirical(data, eo);

  std::vector<std::string> names;
  std::vector<validation::NamedModel> models;
  for (std::size_t k = 1; k <= reg.top_level("traffic"); ++k) names.push_back("level" + std::to_string(k));
  names.push_back("UD");
  const auto uniform = validation::uniform_traffic_policy();
  for (std::size_t k = 1; k <= reg.top_level("traffic"); ++k) {
    const auto& visits = reg.visits("traffic", k);
    models.push_back({names[k - 1], &reg.get("traffic", k), visits.empty() ? nullptr : &visits});
  }
  models.push_back({"UD", &uniform, nullptr});

  auto out = open_out(o.out);
  validation::write_ks_csv_header(out);
  std::optional<std::ofstream> detail;
  if (!o.detail.empty()) {
    detail.emplace(open_out(o.detail));
    validation::write_ks_detail_header(*detail);
  }
  for (std::size_t n : o.nlimit) {
    const auto all = validation::validate_all(drivers, models, n, o.common.jobs);
    for (std::size_t m = 0; m < models.size(); ++m) {
      validation::write_ks_rows(out, names[m], all[m]);
      if (detail) validation::write_ks_detail_rows(*detail, names[m], all[m]);
    }
    const std::vector<std::vector<validation::KsReport>> lv(all.begin(), all.end() - 1);
    const auto summary = validation::best_level_summary(lv, all.back());
    std::printf("n_limit %zu: %zu drivers, %zu without compared states, level-k above UD for %s%%, mean gap %s\n", n,
                drivers.size(), summary.undefined, format_g(100.0 * summary.share_above_uniform(), 4).c_str(),
                format_g(summary.mean_gap(), 4).c_str());
  }
  return 0;
}

// ---------------------------------------------------------------- report

struct ReportOptions {
  Common common;
  std::string ks;
  std::string out;
  std::size_t nlimit = 0;
  std::string summary;
  std::string hist;
  std::size_t bins = 10;
  std::map<std::string, CLI::Option*> opts;
};

// n_limit -> model -> reports in file order.
using KsTable = std::map<std::size_t, std::map<std::string, std::vector<validation::KsReport>>>;

KsTable read_ks_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || trim(line) != "driver_id,model,n_limit,n_comp,n_success,percentage") {
    throw SchemaError("not a KS report: unexpected header", 1);
  }
  KsTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split(trim(line), ',');
    if (f.size() != 6) throw SchemaError("expected 6 columns", line_no);
    validation::KsReport r;
    try {
      r.driver_id = static_cast<int>(parse_int(f[0]));
      r.n_limit = static_cast<std::size_t>(parse_int(f[2]));
      r.n_comp = static_cast<std::size_t>(parse_int(f[3]));
      r.n_success = static_cast<std::size_t>(parse_int(f[4]));
    } catch (const std::invalid_argument& e) {
      throw SchemaError(e.what(), line_no);
    }
    if (r.n_success > r.n_comp) throw IntegrityError("n_success exceeds n_comp", line_no);
    table[r.n_limit][std::string(f[1])].push_back(r);
  }
  return table;
}

int run_report(ReportOptions& o) {
  Config cfg;
  cfg.load(o.common.config, "report");
  apply_common(cfg, o.common);
  cfg.apply(o.opts["ks"], "ks", o.ks);
  cfg.apply(o.opts["out"], "out", o.out);
  cfg.apply(o.opts["nlimit"], "nlimit", o.nlimit);
  cfg.apply(o.opts["summary"], "summary", o.summary);
  cfg.apply(o.opts["hist"], "hist", o.hist);
  cfg.apply(o.opts["bins"], "bins", o.bins);
  cfg.finish();
  if (o.ks.empty()) throw ConfigError("report needs --ks");
  if (o.bins == 0) throw ConfigError("--bins must be positive");
  if ((!o.summary.empty() || !o.hist.empty()) && o.nlimit == 0) {
    throw ConfigError("--summary and --hist need --nlimit");
  }
  const auto table = read_ks_csv(o.ks);
  std::ostringstream overview;
  overview << "n_limit,drivers,undefined,share_above_uniform,mean_gap\n";
  bool found = false;
  for (const auto& [n, models] : table) {
    const auto ud = models.find("UD");
    if (ud == models.end()) throw DataError("KS report has no UD rows for n_limit " + std::to_string(n));
    std::vector<std::vector<validation::KsReport>> lv;
    for (const auto& [name, reports] : models) {
      if (name.rfind("level", 0) == 0) lv.push_back(reports);
    }
    validation::LevelSummary s;
    try {
      s = validation::best_level_summary(lv, ud->second, o.bins);
    } catch (const std::invalid_argument& e) {
      throw DataError(std::string("KS report: ") + e.what());
    }
    overview << n << ',' << s.drivers.size() << ',' << s.undefined << ',' << format_g(s.share_above_uniform()) << ','
             << format_g(s.mean_gap()) << '\n';
    if (n == o.nlimit) {
      found = true;
      if (!o.summary.empty()) {
        auto out = open_out(o.summary);
        validation::write_summary_csv(out, s);
      }
      if (!o.hist.empty()) {
        auto out = open_out(o.hist);
        validation::write_summary_histogram_csv(out, s);
      }
    }
  }
  if (o.nlimit != 0 && !found) throw DataError("KS report has no rows for n_limit " + std::to_string(o.nlimit));
  if (!o.out.empty()) open_out(o.out) << overview.str();
  std::fputs(overview.str().c_str(), stdout);
  return 0;
}

// ---------------------------------------------------------------- mem-estimate

struct MemOptions {
  Common common;
  std::uint64_t states = 421875;
  std::uint64_t columns = 16;
  std::uint64_t bytes = 8;
  std::map<std::string, CLI::Option*> opts;
};

int run_mem(MemOptions& o) {
  Config cfg;
  cfg.load(o.common.config, "mem-estimate");
  apply_common(cfg, o.common);
  cfg.apply(o.opts["states"], "states", o.states);
  cfg.apply(o.opts["columns"], "columns", o.columns);
  cfg.apply(o.opts["bytes"], "bytes", o.bytes);
  cfg.finish();
  std::uint64_t total = 0;
  try {
    total = harness::memory_estimate(o.states, o.columns, o.bytes);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  std::printf("%llu bytes (%s MB)\n", static_cast<unsigned long long>(total),
              format_g(static_cast<double>(total) / 1e6, 12).c_str());
  return 0;
}

int main_impl(int argc, char** argv) {
  CLI::App app{"Level-k reinforcement learning for airspace and highway traffic"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "levelk 1.0");

  TrainOptions train;
  auto* t = app.add_subcommand("train", "Train level-k policies for one domain");
  add_common(t, train.common);
  train.opts["domain"] = t->add_option("--domain", train.domain, "airspace or traffic (default traffic)");
  train.opts["levels"] = t->add_option("--levels", train.levels, "Highest level k to train (default 3)");
  train.opts["algo"] = t->add_option("--algo", train.algo, "jaakkola, q or nfq (default jaakkola)");
  train.opts["episodes"] = t->add_option("--episodes", train.episodes, "Training episodes per level (default 200)");
  train.opts["alpha"] = t->add_option("--alpha", train.alpha, "Q-learning step size (default 0.1)");
  train.opts["gamma"] = t->add_option("--gamma", train.gamma, "Q-learning and NFQ discount (default 0.9)");
  train.opts["epsilon"] = t->add_option("--epsilon", train.epsilon, "Policy improvement rate (default 0.1)");
  train.opts["tau"] = t->add_option("--tau", train.tau, "Time scale of the t/(t+tau) discount schedule (default 1000)");
  train.opts["floor"] = t->add_option("--floor", train.floor, "Exploration floor on policy rows (default 0.01)");
  train.opts["q-explore"] = t->add_option("--q-explore", train.q_explore, "Epsilon-greedy rate for q (default 0.1)");
  train.opts["nfq-iterations"] =
      t->add_option("--nfq-iterations", train.nfq_iterations, "NFQ iterations after each episode (default 3)");
  train.opts["nfq-epochs"] = t->add_option("--nfq-epochs", train.nfq_epochs, "Rprop epochs per NFQ iteration (default 30)");
  train.opts["respond-all"] =
      t->add_flag("--respond-all", train.respond_all, "Level k responds to a uniform mix of levels 0..k-1");
  train.opts["mix"] = t->add_option("--mix", train.mix, "Opponent fraction per level, e.g. --mix 0.5 0.5");
  train.opts["scenario"] = t->add_option("--scenario", train.scenario, "Training scenario JSON (default: built-in scene)");
  train.opts["out"] = t->add_option("--out", train.out, "Output root; files go to <out>/<domain>/ (default out)");

  SimulateOptions sim;
  auto* s = app.add_subcommand("simulate", "Run episodes with trained policies and log trajectories");
  add_common(s, sim.common);
  sim.opts["domain"] = s->add_option("--domain", sim.domain, "airspace or traffic (default traffic)");
  sim.opts["policies"] = s->add_option("--policies", sim.policies, "Policy root written by train (default: level 0 only)");
  sim.opts["scenario"] = s->add_option("--scenario", sim.scenario, "Scenario JSON (default: built-in scene)");
  sim.opts["runs"] = s->add_option("--runs", sim.runs, "Independent runs, seeded from --seed (default 1)");
  sim.opts["level"] = s->add_option("--level", sim.level, "Level every driver or pilot plays (default: from the scenario)");
  sim.opts["duration"] = s->add_option("--duration", sim.duration, "Episode length in seconds (default: from the scenario)");
  sim.opts["out"] = s->add_option("--out", sim.out, "Trajectory CSV (required)");
  sim.opts["stats"] = s->add_option("--stats", sim.stats, "Per-run statistics CSV");

  SweepOptions sw;
  auto* w = app.add_subcommand("sweep", "SAA time and distance horizon sweep");
  add_common(w, sw.common);
  sw.opts["saa"] = w->add_option("--saa", sw.saa, "SAA algorithm, 1 or 2 (default 2)");
  sw.opts["dh"] = w->add_option("--dh", sw.dh, "Distance horizons in km (default 30 40 50)");
  sw.opts["th"] = w->add_option("--th", sw.th, "Time horizons in s (default 120 180 240)");
  sw.opts["runs"] = w->add_option("--runs", sw.runs, "Runs per cell (default 100)");
  sw.opts["scenario"] = w->add_option("--scenario", sw.scenario, "Airspace scenario JSON (default: encounter scene)");
  sw.opts["policies"] = w->add_option("--policies", sw.policies, "Policy root written by train (default: level 0 only)");
  sw.opts["control"] = w->add_flag("--control", sw.control, "Add an SAA-disabled control row");
  sw.opts["out"] = w->add_option("--out", sw.out, "Report CSV (required)");
  sw.opts["plots"] = w->add_option("--plots", sw.plots, "Directory for per-metric plot CSVs");

  IngestOptions in;
  auto* g = app.add_subcommand("ingest", "Read trajectory data and emit canonical CSV and histograms");
  add_common(g, in.common);
  in.opts["data"] = g->add_option("--data", in.data, "Input trajectory file (required)");
  in.opts["format"] = g->add_option("--format", in.format, "canonical or ngsim (default canonical)");
  in.opts["lanes"] = g->add_option("--lanes", in.lanes, "Lane count for bounds checks; 0 disables (default 0)");
  in.opts["lenient"] = g->add_flag("--lenient", in.lenient, "Skip and count bad rows instead of failing");
  in.opts["out"] = g->add_option("--out", in.out, "Canonical trajectory CSV");
  in.opts["headway"] = g->add_option("--headway", in.headway, "Front-gap histogram CSV");
  in.opts["accel"] = g->add_option("--accel", in.accel, "Acceleration histogram CSV");
  in.opts["headway-bin"] = g->add_option("--headway-bin", in.headway_bin, "Front-gap bin width in m (default 1)");
  in.opts["accel-bin"] = g->add_option("--accel-bin", in.accel_bin, "Acceleration bin width in m/s^2 (default 0.1)");

  ValidateOptions va;
  auto* v = app.add_subcommand("validate", "KS validation of traffic policies against trajectory data");
  add_common(v, va.common);
  va.opts["data"] = v->add_option("--data", va.data, "Canonical trajectory CSV (required)");
  va.opts["policies"] = v->add_option("--policies", va.policies, "Policy root written by train (required)");
  va.opts["nlimit"] = v->add_option("--nlimit", va.nlimit, "Minimum visits per compared state (default 1 3 5)");
  va.opts["out"] = v->add_option("--out", va.out, "KS report CSV (required)");
  va.opts["detail"] = v->add_option("--detail", va.detail, "Per-state KS detail CSV");
  va.opts["scenario"] = v->add_option("--scenario", va.scenario,
                                      "Traffic scenario for the road layout (default: the one saved by train)");
  va.opts["straight"] = v->add_flag("--straight", va.straight, "Road is straight, not a ring");
  va.opts["lenient"] = v->add_flag("--lenient", va.lenient, "Skip and count bad data rows");
  va.opts["stride"] = v->add_option("--stride", va.stride, "Frames between decisions (default 10)");

  ReportOptions re;
  auto* r = app.add_subcommand("report", "Summarize a KS report: best level versus the uniform baseline");
  add_common(r, re.common);
  re.opts["ks"] = r->add_option("--ks", re.ks, "KS report CSV from validate (required)");
  re.opts["out"] = r->add_option("--out", re.out, "Overview CSV, one row per n_limit");
  re.opts["nlimit"] = r->add_option("--nlimit", re.nlimit, "n_limit for --summary and --hist");
  re.opts["summary"] = r->add_option("--summary", re.summary, "Per-driver combined versus UD CSV");
  re.opts["hist"] = r->add_option("--hist", re.hist, "Histogram of drivers over combined percentage");
  re.opts["bins"] = r->add_option("--bins", re.bins, "Histogram bins over 0-100% (default 10)");

  MemOptions me;
  auto* m = app.add_subcommand("mem-estimate", "Memory for a dense learner table");
  add_common(m, me.common);
  me.opts["states"] = m->add_option("--states", me.states, "Number of states (default 421875)");
  me.opts["columns"] = m->add_option("--columns", me.columns, "Stored values per state (default 16)");
  me.opts["bytes"] = m->add_option("--bytes", me.bytes, "Bytes per value (default 8)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (t->parsed()) return run_train(train);
  if (s->parsed()) return run_simulate(sim);
  if (w->parsed()) return run_sweep(sw);
  if (g->parsed()) return run_ingest(in);
  if (v->parsed()) return run_validate(va);
  if (r->parsed()) return run_report(re);
  return run_mem(me);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return main_impl(argc, argv);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const RegistryError& e) {
    std::fprintf(stderr, "registry error: %s\n", e.what());
    return 3;
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
