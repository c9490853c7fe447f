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

#include "levelk/levels/training.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "levelk/common/error.hpp"
#include "levelk/common/random.hpp"
#include "levelk/rl/nfq.hpp"
#include "levelk/validation/entropy.hpp"

namespace levelk::levels {
namespace {

// Keeps sum over states of row entropy so the table mean is O(1) per update.
class EntropyTracker {
 public:
  explicit EntropyTracker(const rl::StochasticPolicy& pi) : rows_(pi.num_states()) {
    for (std::size_t s = 0; s < rows_.size(); ++s) {
      rows_[s] = validation::entropy(pi.row(s));
      total_ += rows_[s];
    }
  }
  void update(const rl::StochasticPolicy& pi, std::size_t s) {
    const double h = validation::entropy(pi.row(s));
    total_ += h - rows_[s];
    rows_[s] = h;
  }
  double mean() const { return total_ / static_cast<double>(rows_.size()); }

 private:
  std::vector<double> rows_;
  double total_ = 0.0;
};

// (1 - eps) greedy + eps uniform, ties in the greedy part split evenly.
void soft_greedy_row(std::span<double> row, std::span<const double> scores, bool minimize, double eps,
                     double floor) {
  const std::size_t A = row.size();
  double best = scores[0];
  for (double v : scores) best = minimize ? std::min(best, v) : std::max(best, v);
  std::size_t ties = 0;
  for (double v : scores) ties += (v == best);
  for (std::size_t a = 0; a < A; ++a) {
    row[a] = eps / static_cast<double>(A) + (scores[a] == best ? (1.0 - eps) / static_cast<double>(ties) : 0.0);
  }
  rl::apply_exploration_floor(row, floor);
}

std::size_t argbest_random_tie(std::span<const double> scores, bool minimize, Rng& rng) {
  double best = scores[0];
  for (double v : scores) best = minimize ? std::min(best, v) : std::max(best, v);
  std::vector<std::size_t> ties;
  for (std::size_t a = 0; a < scores.size(); ++a) {
    if (scores[a] == best) ties.push_back(a);
  }
  return ties.size() == 1 ? ties[0] : ties[rng() % ties.size()];
}

class JaakkolaLearner final : public Learner {
 public:
  JaakkolaLearner(std::size_t S, std::size_t A, const rl::LearningConfig& cfg)
      : cfg_(cfg), pi_(S, A), tables_(S, A), entropy_(pi_) {}

  std::size_t act(std::size_t state, Rng& rng) override { return rl::sample_action(pi_, state, rng); }
  void observe(std::size_t s, std::size_t a, double r, std::size_t, bool) override {
    rl::jaakkola_update(tables_, s, a, r, cfg_);
    rl::improve_state(pi_, tables_, s, cfg_.epsilon, cfg_.exploration_floor);
    entropy_.update(pi_, s);
  }
  void end_episode(std::size_t) override {}
  rl::StochasticPolicy policy() const override { return pi_; }
  double mean_entropy() const override { return entropy_.mean(); }
  const rl::LearnerState& tables() const override { return tables_; }

 private:
  rl::LearningConfig cfg_;
  rl::StochasticPolicy pi_;
  rl::LearnerState tables_;
  EntropyTracker entropy_;
};

class QLearner final : public Learner {
 public:
  QLearner(std::size_t S, std::size_t A, const rl::LearningConfig& cfg)
      : cfg_(cfg), pi_(S, A), tables_(S, A), entropy_(pi_), scores_(A) {}

  std::size_t act(std::size_t state, Rng& rng) override {
    if (uniform01(rng) < cfg_.q_explore) return rng() % tables_.num_actions();
    load_scores(state);
    return argbest_random_tie(scores_, false, rng);
  }
  void observe(std::size_t s, std::size_t a, double r, std::size_t next, bool done) override {
    rl::q_update(tables_, s, a, r, next, cfg_.alpha, cfg_.gamma, done);
    load_scores(s);
    soft_greedy_row(pi_.mutable_row(s), scores_, false, cfg_.q_explore, cfg_.exploration_floor);
    entropy_.update(pi_, s);
  }
  void end_episode(std::size_t) override {}
  rl::StochasticPolicy policy() const override { return pi_; }
  double mean_entropy() const override { return entropy_.mean(); }
  const rl::LearnerState& tables() const override { return tables_; }

 private:
  void load_scores(std::size_t s) {
    for (std::size_t a = 0; a < scores_.size(); ++a) scores_[a] = tables_.q(s, a);
  }

  rl::LearningConfig cfg_;
  rl::StochasticPolicy pi_;
  rl::LearnerState tables_;
  EntropyTracker entropy_;
  std::vector<double> scores_;
};

class NfqLearner final : public Learner {
 public:
  NfqLearner(const Domain& domain, const rl::LearningConfig& cfg, const NfqSettings& nfq)
      : cfg_(cfg),
        nfq_(nfq),
        model_(domain.num_states(), domain.num_actions(), domain.feature_width(),
               [&domain](std::size_t s) { return domain.features(s); }, derive_seed(cfg.seed, 0x4e4651)),
        pi_(domain.num_states(), domain.num_actions()),
        tables_(domain.num_states(), domain.num_actions()),
        entropy_(pi_),
        scores_(domain.num_actions()) {}

  std::size_t act(std::size_t state, Rng& rng) override {
    const bool random_episode = nfq_.random_episode_every > 0 && episode_ % nfq_.random_episode_every ==
                                                                    nfq_.random_episode_every - 1;
    if (random_episode || uniform01(rng) < nfq_.greedy_epsilon) return rng() % tables_.num_actions();
    load_scores(state);
    return argbest_random_tie(scores_, true, rng);
  }
  void observe(std::size_t s, std::size_t a, double r, std::size_t next, bool done) override {
    tables_.record_visit(s, a);
    buffer_.push_back({s, a, -r, next, done});
    if (buffer_.size() > nfq_.max_experiences) buffer_.pop_front();
  }
  void end_episode(std::size_t) override {
    ++episode_;
    if (buffer_.empty()) return;
    const std::vector<rl::Experience> batch(buffer_.begin(), buffer_.end());
    rl::nfq_train(batch, model_, {cfg_.gamma, nfq_.iterations, nfq_.epochs});
    for (std::uint32_t s : tables_.visited_states()) {
      load_scores(s);
      soft_greedy_row(pi_.mutable_row(s), scores_, true, nfq_.greedy_epsilon, cfg_.exploration_floor);
      entropy_.update(pi_, s);
    }
  }
  rl::StochasticPolicy policy() const override { return pi_; }
  double mean_entropy() const override { return entropy_.mean(); }
  const rl::LearnerState& tables() const override { return tables_; }

 private:
  void load_scores(std::size_t s) {
    for (std::size_t a = 0; a < scores_.size(); ++a) scores_[a] = model_.q(s, a);
  }

  rl::LearningConfig cfg_;
  NfqSettings nfq_;
  rl::NfqModel model_;
  rl::StochasticPolicy pi_;
  rl::LearnerState tables_;
  EntropyTracker entropy_;
  std::vector<double> scores_;
  std::deque<rl::Experience> buffer_;
  std::size_t episode_ = 0;
};

class FrozenLearner final : public Learner {
 public:
  explicit FrozenLearner(const rl::StochasticPolicy& pi)
      : pi_(pi), tables_(pi.num_states(), pi.num_actions()), entropy_(pi_) {}
  std::size_t act(std::size_t state, Rng& rng) override { return rl::sample_action(pi_, state, rng); }
  void observe(std::size_t s, std::size_t a, double, std::size_t, bool) override { tables_.record_visit(s, a); }
  void end_episode(std::size_t) override {}
  rl::StochasticPolicy policy() const override { return pi_; }
  double mean_entropy() const override { return entropy_.mean(); }
  const rl::LearnerState& tables() const override { return tables_; }

 private:
  rl::StochasticPolicy pi_;
  rl::LearnerState tables_;
  EntropyTracker entropy_;
};

}  // namespace

Algorithm parse_algorithm(const std::string& name) {
  if (name == "jaakkola") return Algorithm::kJaakkola;
  if (name == "q") return Algorithm::kQ;
  if (name == "nfq") return Algorithm::kNfq;
  throw ConfigError("unknown algorithm '" + name + "' (expected jaakkola, q or nfq)");
}

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kJaakkola:
      return "jaakkola";
    case Algorithm::kQ:
      return "q";
    case Algorithm::kNfq:
      return "nfq";
  }
  return "?";
}

void LevelKConfig::validate() const {
  if (max_level == 0) throw ConfigError("max level must be at least 1");
}

std::unique_ptr<Learner> make_learner(Algorithm algorithm, const Domain& domain, const rl::LearningConfig& cfg,
                                      const NfqSettings& nfq) {
  cfg.validate();
  switch (algorithm) {
    case Algorithm::kJaakkola:
      return std::make_unique<JaakkolaLearner>(domain.num_states(), domain.num_actions(), cfg);
    case Algorithm::kQ:
      return std::make_unique<QLearner>(domain.num_states(), domain.num_actions(), cfg);
    case Algorithm::kNfq:
      return std::make_unique<NfqLearner>(domain, cfg, nfq);
  }
  throw ConfigError("unknown algorithm");
}

std::unique_ptr<Learner> make_frozen_learner(const rl::StochasticPolicy& policy) {
  return std::make_unique<FrozenLearner>(policy);
}

std::vector<EpisodeTelemetry> run_training_episodes(Learner& learner, Environment& env, std::size_t level,
                                                    std::size_t episodes, std::uint64_t seed) {
  Rng rng(derive_seed(seed, std::numeric_limits<std::uint64_t>::max()));
  std::vector<EpisodeTelemetry> telemetry;
  telemetry.reserve(episodes);
  for (std::size_t e = 0; e < episodes; ++e) {
    std::size_t s = env.reset(derive_seed(seed, e));
    EpisodeTelemetry t;
    t.level = level;
    t.episode = e;
    while (true) {
      const std::size_t a = learner.act(s, rng);
      const StepResult r = env.step(a);
      learner.observe(s, a, r.reward, r.next_state, r.done);
      t.total_reward += r.reward;
      ++t.steps;
      s = r.next_state;
      if (r.done) break;
    }
    learner.end_episode(e);
    t.avg_reward = t.steps ? t.total_reward / static_cast<double>(t.steps) : 0.0;
    t.entropy = learner.mean_entropy();
    telemetry.push_back(t);
  }
  return telemetry;
}

OpponentSetup opponents_for_level(const PolicyRegistry& registry, const std::string& domain, std::size_t level,
                                  const LevelKConfig& lk, ActionTap tap) {
  OpponentSetup setup;
  for (std::size_t l = 0; l <= level; ++l) setup.level_policies.push_back(&registry.get(domain, l));
  setup.level = level;
  setup.respond_to_all_lower = lk.respond_to_all_lower;
  setup.mix = lk.population_mix;
  setup.tap = std::move(tap);
  return setup;
}

TrainedLevel train_level(PolicyRegistry& registry, const Domain& domain, std::size_t level,
                         const rl::LearningConfig& cfg, const LevelKConfig& lk, Algorithm algorithm,
                         const NfqSettings& nfq, ActionTap tap) {
  if (!registry.has(domain.name(), level)) {
    throw RegistryError("cannot train level " + std::to_string(level + 1) + ": level " + std::to_string(level) +
                        " is missing for '" + domain.name() + "'");
  }
  rl::LearningConfig level_cfg = cfg;
  level_cfg.seed = derive_seed(cfg.seed, level);
  auto learner = make_learner(algorithm, domain, level_cfg, nfq);
  auto env = domain.make_environment(opponents_for_level(registry, domain.name(), level, lk, std::move(tap)));
  auto telemetry = run_training_episodes(*learner, *env, level, cfg.episodes, level_cfg.seed);
  TrainedLevel out{learner->policy(), learner->tables(), std::move(telemetry)};
  std::vector<std::uint64_t> visits(out.tables.num_states());
  for (std::size_t s = 0; s < visits.size(); ++s) visits[s] = out.tables.count(s);
  registry.put(domain.name(), level + 1, out.policy, std::move(visits));
  return out;
}

std::vector<TrainedLevel> train_levels(PolicyRegistry& registry, const Domain& domain,
                                       const rl::LearningConfig& cfg, const LevelKConfig& lk, Algorithm algorithm,
                                       const NfqSettings& nfq) {
  lk.validate();
  if (!registry.has(domain.name(), 0)) registry.set_anchor(domain.name(), domain.anchor_policy());
  std::vector<TrainedLevel> out;
  for (std::size_t level = 0; level < lk.max_level; ++level) {
    out.push_back(train_level(registry, domain, level, cfg, lk, algorithm, nfq));
  }
  return out;
}

}  // namespace levelk::levels
