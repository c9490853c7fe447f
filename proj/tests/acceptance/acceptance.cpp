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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli_runner.hpp"
#include "ks_oracle.hpp"
#include "levelk/airspace/domain.hpp"
#include "levelk/airspace/observation.hpp"
#include "levelk/common/random.hpp"
#include "levelk/common/text.hpp"
#include "levelk/harness/harness.hpp"
#include "levelk/io/trajectory.hpp"
#include "levelk/levels/training.hpp"
#include "levelk/rl/learner.hpp"
#include "levelk/rl/nfq.hpp"
#include "levelk/traffic/domain.hpp"
#include "levelk/validation/empirical.hpp"
#include "levelk/validation/ks.hpp"
#include "levelk/validation/synthetic.hpp"
#include "levelk/validation/validate.hpp"
#include "toy_mdp.hpp"

namespace fs = std::filesystem;
using namespace levelk;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Clock {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double x, int digits = 4) { return format_g(x, digits); }

Outcome state_space() {
  Clock clock;
  const std::size_t states = airspace::kNumPilotStates;
  const std::size_t pairs = states * airspace::kNumPilotActions;
  const auto bytes = harness::memory_estimate(states, 16, 8);
  const double t = clock.seconds();
  return {states == 421875 && pairs == 1265625 && bytes == 54000000 && t < 1.0,
          std::to_string(states) + " states, " + std::to_string(pairs) + " pairs, " + fmt(bytes / 1e6) + " MB"};
}

Outcome rl_correctness() {
  Clock clock;
  testing::ToyMdp mdp;
  const double gamma = 0.9;
  const auto q_star = mdp.q_star(gamma);
  rl::LearnerState tab(3, 2);
  for (int sweep = 0; sweep < 3000; ++sweep) {
    for (std::size_t s = 0; s < 3; ++s) {
      for (std::size_t a = 0; a < 2; ++a) rl::q_update(tab, s, a, mdp.reward[s][a], mdp.next[s][a], 0.5, gamma);
    }
  }
  double err = 0.0;
  for (std::size_t s = 0; s < 3; ++s) {
    for (std::size_t a = 0; a < 2; ++a) err = std::max(err, std::abs(tab.q(s, a) - q_star[s][a]));
  }
  const double t_q = clock.seconds();

  Clock nfq_clock;
  const auto one_hot = [](std::size_t s) {
    std::vector<double> x(3, 0.0);
    x[s] = 1.0;
    return x;
  };
  rl::NfqModel model(3, 2, 3, one_hot, 5);
  std::vector<rl::Experience> e;
  for (std::size_t s = 0; s < 3; ++s) {
    // NFQ minimizes cost, so rewards enter negated.
    for (std::size_t a = 0; a < 2; ++a) e.push_back({s, a, -mdp.reward[s][a], mdp.next[s][a]});
  }
  rl::nfq_train(e, model, {gamma, 150, 50});
  int agree = 0;
  for (std::size_t s = 0; s < 3; ++s) {
    const std::size_t tab_greedy = tab.q(s, 1) > tab.q(s, 0) ? 1 : 0;
    agree += model.greedy_action(s) == tab_greedy ? 1 : 0;
  }
  const double share = agree / 3.0;
  const double t_nfq = nfq_clock.seconds();
  return {err <= 1e-4 && t_q < 10.0 && share >= 0.9 && t_nfq < 60.0,
          "max |Q - Q*| " + fmt(err, 3) + " in " + fmt(t_q, 2) + " s; NFQ greedy agreement " + fmt(100 * share, 3) +
              "% in " + fmt(t_nfq, 2) + " s"};
}

// One training sweep: every state visited K times, each visit followed by a
// full-table policy improvement.
std::uint64_t instrumented_sweep(std::size_t S, std::size_t A, std::size_t K) {
  rl::LearnerState L(S, A);
  rl::LearningConfig cfg;
  rl::StochasticPolicy pi(S, A);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t s = 0; s < S; ++s) {
      rl::jaakkola_update(L, s, (s + k) % A, static_cast<double>(s % 3), cfg);
      pi = rl::jaakkola_improve(pi, L, cfg.epsilon);
    }
  }
  return L.op_counter();
}

std::uint64_t closed_form(std::uint64_t S, std::uint64_t A, std::uint64_t K) {
  return K * S * ((24 + (A - 1) * 4) + (S - 1) * A * 8 + S * A * 4);
}

Outcome sweep_arithmetic() {
  Clock clock;
  const auto a = instrumented_sweep(10, 3, 2);
  const auto b = instrumented_sweep(50, 7, 1);
  const double ratio = static_cast<double>(instrumented_sweep(400, 3, 1)) / static_cast<double>(instrumented_sweep(200, 3, 1));
  const bool exact = a == closed_form(10, 3, 2) && b == closed_form(50, 7, 1) && a == rl::op_count_sweep(10, 3, 2) &&
                     b == rl::op_count_sweep(50, 7, 1);
  const double t = clock.seconds();
  return {exact && std::abs(ratio - 4.0) <= 0.4 && t < 10.0,
          "(10,3,2) " + std::to_string(a) + ", (50,7,1) " + std::to_string(b) + ", S 200->400 ratio " + fmt(ratio) +
              " in " + fmt(t, 2) + " s"};
}

Outcome training_dynamics() {
  Clock clock;
  traffic::TrafficDomain domain(traffic::random_traffic_scenario(15, 3));
  levels::PolicyRegistry reg;
  reg.set_anchor("traffic", domain.anchor_policy());
  rl::LearningConfig cfg;
  cfg.episodes = 500;
  cfg.seed = 1;
  const auto t = levels::train_level(reg, domain, 0, cfg, {}, levels::Algorithm::kJaakkola).telemetry;
  const std::size_t tenth = t.size() / 10;
  double first = 0.0, last = 0.0;
  for (std::size_t e = 0; e < tenth; ++e) {
    first += t[e].avg_reward / tenth;
    last += t[t.size() - 1 - e].avg_reward / tenth;
  }
  std::vector<double> ma;
  for (std::size_t e = 49; e < t.size(); ++e) {
    double m = 0.0;
    for (std::size_t k = e - 49; k <= e; ++k) m += t[k].entropy / 50.0;
    ma.push_back(m);
  }
  bool nonincreasing = true;
  for (std::size_t i = 1; i < ma.size(); ++i) nonincreasing = nonincreasing && ma[i] <= ma[i - 1] + 1e-12;
  const double secs = clock.seconds();
  return {last > first && nonincreasing && ma.back() < ma.front() && secs < 300.0,
          "avg reward " + fmt(first) + " -> " + fmt(last) + ", MA entropy " + fmt(ma.front(), 6) + " -> " +
              fmt(ma.back(), 6) + (nonincreasing ? " (nonincreasing)" : " (rises)") + " in " + fmt(secs, 3) + " s"};
}

Outcome airspace_reproduction() {
  Clock clock;
  airspace::AirspaceDomain domain(airspace::encounter_airspace_scenario());
  levels::PolicyRegistry reg;
  rl::LearningConfig cfg;
  cfg.episodes = 5000;
  levels::LevelKConfig lk;
  lk.max_level = 1;
  levels::train_levels(reg, domain, cfg, lk, levels::Algorithm::kJaakkola);

  auto scenario = airspace::encounter_airspace_scenario();
  scenario.pilot_mix = {0.5, 0.5};
  harness::SweepGrid grid{{30.0, 40.0, 50.0}, {120.0, 180.0, 240.0}, 100, 5, true};
  const auto cells = harness::sweep(grid, scenario, reg, airspace::SaaAlgorithm::kSaa2, 1);
  const double control = cells.front().violations.mean * cells.front().runs;
  double worst = 0.0;
  for (std::size_t i = 1; i < cells.size(); ++i) worst = std::max(worst, cells[i].violations.mean * cells[i].runs);
  const double corr = harness::deviation_correlation(cells);

  const auto saa1 = harness::sweep(grid, scenario, reg, airspace::SaaAlgorithm::kSaa1, 1);
  double worst1 = 0.0;
  for (std::size_t i = 1; i < saa1.size(); ++i) worst1 = std::max(worst1, saa1[i].violations.mean * saa1[i].runs);
  std::printf("  info: SAA1 on the same grid: worst enabled cell %s violations, correlation %s\n",
              fmt(worst1).c_str(), fmt(harness::deviation_correlation(saa1), 3).c_str());
  const double secs = clock.seconds();
  return {worst < control && corr < 0.0 && secs < 900.0,
          "SAA2: control " + fmt(control) + " violations, worst enabled cell " + fmt(worst) +
              "; manned/UAS deviation correlation " + fmt(corr, 3) + " in " + fmt(secs, 3) + " s"};
}

Outcome ks_engine() {
  Clock clock;
  Rng rng(2024);
  const std::size_t sizes[] = {1, 2, 3, 5, 8, 10, 15, 20, 30, 50};
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const auto model = testing::random_pmf(rng, 7, t % 2 ? 0.01 : 0.3);
    const std::size_t n = sizes[t % 10];
    const auto source = t % 3 == 0 ? testing::random_pmf(rng, 7) : model;
    std::vector<double> empirical(7, 0.0);
    for (std::size_t i = 0; i < n; ++i) empirical[testing::draw(source, rng)] += 1.0 / static_cast<double>(n);
    const auto r = validation::ks_discrete(model, empirical, n);
    worst = std::max(worst, std::abs(r.p_value - testing::monte_carlo_p(model, n, r.d, 100000, rng)));
  }
  const auto same = testing::random_pmf(rng, 7);
  const auto id = validation::ks_discrete(same, same, 40);
  const double secs = clock.seconds();
  return {worst <= 0.02 && id.p_value == 1.0 && !id.rejected && secs < 120.0,
          "worst |p - Monte Carlo| " + fmt(worst, 3) + " over 20 cases; identical p = " + fmt(id.p_value) + " in " +
              fmt(secs, 3) + " s"};
}

Outcome validation_pipeline(const fs::path& work) {
  Clock clock;
  const auto scenario = traffic::random_traffic_scenario(20, 4);
  traffic::TrafficDomain domain(scenario);
  levels::PolicyRegistry reg;
  rl::LearningConfig cfg;
  cfg.episodes = 2000;
  cfg.seed = 1;
  levels::LevelKConfig lk;
  lk.max_level = 3;
  levels::train_levels(reg, domain, cfg, lk, levels::Algorithm::kJaakkola);

  // 10 scenes x 20 level-1 drivers.
  auto gen = scenario;
  gen.driver_level = 1;
  gen.duration = 2000.0;
  const std::vector<const rl::StochasticPolicy*> policies{&reg.get("traffic", 0), &reg.get("traffic", 1)};
  const auto generated = validation::generate_drivers(gen, policies, 10, derive_seed(1, 99));
  const fs::path csv = work / "synthetic.csv";
  io::save_trajectories(csv, generated);
  const auto data = io::load_trajectories(csv, {true, scenario.road.lanes});

  validation::EmpiricalOptions eo;
  eo.road = traffic::effective_road(scenario);
  const auto drivers = validation::build_empirical(data, eo);
  const auto uniform = validation::uniform_traffic_policy();
  std::vector<validation::NamedModel> models;
  const std::string names[] = {"level1", "level2", "level3"};
  for (std::size_t k = 1; k <= 3; ++k) models.push_back({names[k - 1], &reg.get("traffic", k), &reg.visits("traffic", k)});
  models.push_back({"UD", &uniform, nullptr});

  std::string detail = std::to_string(drivers.size()) + " drivers;";
  std::vector<double> gaps;
  double share5 = 0.0;
  for (std::size_t n : {1, 3, 5}) {
    const auto all = validation::validate_all(drivers, models, n, 1);
    const std::vector<std::vector<validation::KsReport>> lv(all.begin(), all.begin() + 3);
    const auto s = validation::best_level_summary(lv, all.back());
    gaps.push_back(s.mean_gap());
    if (n == 5) share5 = s.share_above_uniform();
    detail += " n_limit " + std::to_string(n) + ": above UD " + fmt(100 * s.share_above_uniform(), 3) + "%, gap " +
              fmt(s.mean_gap(), 3) + ";";
  }
  const double secs = clock.seconds();
  const bool nondecreasing = gaps[0] <= gaps[1] && gaps[1] <= gaps[2];
  return {drivers.size() == 200 && share5 >= 0.95 && nondecreasing && secs < 600.0,
          detail + " " + fmt(secs, 3) + " s"};
}

// Runs `args` twice with --jobs 1 and --jobs 4, each into its own output
// directory, and compares stdout and every produced file.
bool same_outputs(const fs::path& work, const std::string& name, const std::string& args, std::string& why) {
  std::string stdout_text[2];
  for (int i = 0; i < 2; ++i) {
    const fs::path dir = work / name / (i == 0 ? "j1" : "j4");
    fs::create_directories(dir);
    std::string cmd = args;
    for (std::size_t p; (p = cmd.find("{out}")) != std::string::npos;) cmd.replace(p, 5, dir.string());
    const auto r = testing::run_cli(cmd + (i == 0 ? " --jobs 1" : " --jobs 4"));
    if (r.exit_code != 0) {
      why = name + " exited " + std::to_string(r.exit_code) + ": " + r.output;
      return false;
    }
    stdout_text[i] = r.output;
  }
  if (stdout_text[0] != stdout_text[1]) {
    why = name + ": stdout differs";
    return false;
  }
  const fs::path a = work / name / "j1", b = work / name / "j4";
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), a);
    if (testing::read_file(entry.path()) != testing::read_file(b / rel)) {
      why = name + ": " + rel.string() + " differs";
      return false;
    }
    ++files;
  }
  if (files == 0 && name != "mem-estimate") {
    why = name + ": no output files";
    return false;
  }
  return true;
}

Outcome determinism(const fs::path& work) {
  Clock clock;
  const fs::path pol = work / "policies";
  const std::string air = (pol / "air").string(), road = (pol / "road").string();
  // Shared inputs for the downstream commands.
  if (testing::run_cli("train --domain traffic --levels 2 --episodes 40 --seed 3 --out " + road).exit_code != 0 ||
      testing::run_cli("train --domain airspace --levels 1 --episodes 20 --seed 3 --out " + air).exit_code != 0 ||
      testing::run_cli("simulate --policies " + road + " --level 1 --runs 3 --duration 120 --seed 3 --out " +
                       (work / "data.csv").string())
              .exit_code != 0 ||
      testing::run_cli("validate --data " + (work / "data.csv").string() + " --policies " + road + " --out " +
                       (work / "ks.csv").string())
              .exit_code != 0) {
    return {false, "could not prepare inputs"};
  }
  const std::string data = (work / "data.csv").string();
  const std::vector<std::pair<std::string, std::string>> commands{
      {"train", "train --domain traffic --levels 2 --episodes 30 --seed 7 --out {out}"},
      {"train-nfq", "train --domain airspace --levels 1 --episodes 3 --algo nfq --seed 7 --out {out}"},
      {"simulate", "simulate --policies " + road + " --runs 4 --duration 100 --seed 7 --out {out}/t.csv --stats {out}/s.csv"},
      {"simulate-air", "simulate --domain airspace --policies " + air +
                           " --runs 4 --duration 300 --seed 7 --out {out}/t.csv --stats {out}/s.csv"},
      {"sweep", "sweep --policies " + air + " --dh 30 50 --th 120 240 --runs 6 --control --seed 7 --out {out}/r.csv --plots {out}/p"},
      {"ingest", "ingest --data " + data + " --out {out}/c.csv --headway {out}/h.csv --accel {out}/a.csv"},
      {"validate", "validate --data " + data + " --policies " + road + " --out {out}/ks.csv --detail {out}/d.csv"},
      {"report", "report --ks " + (work / "ks.csv").string() + " --nlimit 3 --out {out}/o.csv --summary {out}/s.csv --hist {out}/h.csv"},
      {"mem-estimate", "mem-estimate --states 1000 --columns 3 --bytes 8"},
  };
  for (const auto& [name, args] : commands) {
    std::string why;
    if (!same_outputs(work, name, args, why)) return {false, why};
  }
  return {true, std::to_string(commands.size()) + " invocations byte-identical across --jobs 1 and 4 in " +
                    fmt(clock.seconds(), 3) + " s"};
}

}  // namespace

int main() {
  const fs::path work = testing::scratch_dir("acceptance");
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 state-space arithmetic", state_space},
      {"2 RL correctness", rl_correctness},
      {"3 sweep operation count", sweep_arithmetic},
      {"4 level-k training dynamics", training_dynamics},
      {"5 airspace SAA reproduction", airspace_reproduction},
      {"6 KS engine", ks_engine},
      {"7 validation pipeline", [&] { return validation_pipeline(work); }},
      {"8 CLI determinism", [&] { return determinism(work); }},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
