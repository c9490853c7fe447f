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

#include "levelk/rl/learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "levelk/common/error.hpp"

namespace levelk::rl {
namespace {

// Rebase the lazy accumulators before the global decay product falls below
// this, which bounds cancellation in (sum - stamp) to about 1e-12 relative.
constexpr double kRebaseDecay = 1e-4;
constexpr std::uint64_t kRebaseSteps = 4096;
// Below this gamma_t the decay is applied densely (gamma_t = 0 zeroes traces).
constexpr double kDenseGamma = 1e-12;

}  // namespace

double GammaSchedule::at(std::uint64_t step) const {
  switch (kind) {
    case Kind::kConstant:
      return value;
    case Kind::kHarmonic: {
      const double t = static_cast<double>(step);
      return 1.0 - 1.0 / (1.0 + t / tau);
    }
  }
  return value;
}

void LearningConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must be in (0, 1]");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must be in [0, 1]");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must be in [0, 1]");
  if (!(exploration_floor >= 0.0 && exploration_floor < 1.0)) {
    throw ConfigError("exploration_floor must be in [0, 1)");
  }
  if (!(q_explore >= 0.0 && q_explore <= 1.0)) throw ConfigError("q_explore must be in [0, 1]");
  if (episodes == 0) throw ConfigError("episodes must be positive");
  if (gamma_schedule.kind == GammaSchedule::Kind::kHarmonic && !(gamma_schedule.tau > 0.0)) {
    throw ConfigError("gamma schedule tau must be positive");
  }
  if (gamma_schedule.kind == GammaSchedule::Kind::kConstant &&
      !(gamma_schedule.value >= 0.0 && gamma_schedule.value < 1.0)) {
    throw ConfigError("constant gamma schedule value must be in [0, 1)");
  }
}

LearnerState::LearnerState(std::size_t num_states, std::size_t num_actions)
    : states_(num_states), actions_(num_actions) {
  if (num_states == 0 || num_actions == 0) {
    throw std::invalid_argument("learner needs at least one state and one action");
  }
  q_.assign(states_ * actions_, 0.0);
  beta_sa_.assign(states_ * actions_, 0.0);
  count_sa_.assign(states_ * actions_, 0);
  v_.assign(states_, 0.0);
  beta_s_.assign(states_, 0.0);
  count_s_.assign(states_, 0);
  stamp_decay_.assign(states_, 1.0);
  stamp_sum_.assign(states_, 0.0);
  touched_flag_.assign(states_, 0);
}

void LearnerState::check(std::size_t s) const {
  if (s >= states_) throw std::out_of_range("state " + std::to_string(s) + " >= " + std::to_string(states_));
}

void LearnerState::check(std::size_t s, std::size_t a) const {
  check(s);
  if (a >= actions_) throw std::out_of_range("action " + std::to_string(a) + " >= " + std::to_string(actions_));
}

double LearnerState::q(std::size_t s, std::size_t a) const {
  check(s, a);
  const std::size_t i = s * actions_ + a;
  return q_[i] + beta_sa_[i] / stamp_decay_[s] * (sum_ - stamp_sum_[s]);
}

double LearnerState::v(std::size_t s) const {
  check(s);
  return v_[s] + beta_s_[s] / stamp_decay_[s] * (sum_ - stamp_sum_[s]);
}

double LearnerState::beta(std::size_t s, std::size_t a) const {
  check(s, a);
  return beta_sa_[s * actions_ + a] * (decay_ / stamp_decay_[s]);
}

double LearnerState::beta_state(std::size_t s) const {
  check(s);
  return beta_s_[s] * (decay_ / stamp_decay_[s]);
}

std::uint64_t LearnerState::count(std::size_t s, std::size_t a) const {
  check(s, a);
  return count_sa_[s * actions_ + a];
}

std::uint64_t LearnerState::count(std::size_t s) const {
  check(s);
  return count_s_[s];
}

void LearnerState::touch(std::size_t s) {
  if (!touched_flag_[s]) {
    touched_flag_[s] = 1;
    touched_.push_back(static_cast<std::uint32_t>(s));
  }
}

void LearnerState::materialize(std::size_t s) {
  const double scale = 1.0 / stamp_decay_[s];
  const double accumulated = sum_ - stamp_sum_[s];
  const double decay = decay_ * scale;
  for (std::size_t a = 0; a < actions_; ++a) {
    const std::size_t i = s * actions_ + a;
    q_[i] += beta_sa_[i] * scale * accumulated;
    beta_sa_[i] *= decay;
  }
  v_[s] += beta_s_[s] * scale * accumulated;
  beta_s_[s] *= decay;
  stamp_decay_[s] = decay_;
  stamp_sum_[s] = sum_;
}

void LearnerState::rebase() {
  for (std::uint32_t s : touched_) materialize(s);
  decay_ = 1.0;
  sum_ = 0.0;
  steps_since_rebase_ = 0;
  for (std::uint32_t s : touched_) {
    stamp_decay_[s] = 1.0;
    stamp_sum_[s] = 0.0;
  }
}

void LearnerState::set_q(std::size_t s, std::size_t a, double value) {
  check(s, a);
  touch(s);
  materialize(s);
  q_[s * actions_ + a] = value;
  ++op_counter_;
}

void LearnerState::restore_state(std::size_t s, double v, double beta_s, std::uint64_t count_s,
                                 std::span<const double> q, std::span<const double> beta_sa,
                                 std::span<const std::uint64_t> count_sa) {
  check(s);
  if (q.size() != actions_ || beta_sa.size() != actions_ || count_sa.size() != actions_) {
    throw std::invalid_argument("restore_state: row width mismatch");
  }
  touch(s);
  stamp_decay_[s] = decay_;
  stamp_sum_[s] = sum_;
  v_[s] = v;
  beta_s_[s] = beta_s;
  count_s_[s] = count_s;
  for (std::size_t a = 0; a < actions_; ++a) {
    q_[s * actions_ + a] = q[a];
    beta_sa_[s * actions_ + a] = beta_sa[a];
    count_sa_[s * actions_ + a] = count_sa[a];
  }
}

void LearnerState::record_visit(std::size_t s, std::size_t a) {
  check(s, a);
  touch(s);
  ++count_sa_[s * actions_ + a];
  ++count_s_[s];
}

void LearnerState::restore_globals(std::uint64_t steps, double avg_reward) {
  steps_ = steps;
  avg_reward_ = avg_reward;
}

void q_update(LearnerState& L, std::size_t s, std::size_t a, double reward, std::size_t s_next,
              double alpha, double gamma, bool terminal) {
  L.check(s, a);
  L.check(s_next);
  double target = reward;
  if (!terminal) {
    double best = L.q(s_next, 0);
    for (std::size_t b = 1; b < L.actions_; ++b) best = std::max(best, L.q(s_next, b));
    target += gamma * best;
  }
  L.touch(s);
  L.materialize(s);
  const std::size_t i = s * L.actions_ + a;
  L.q_[i] += alpha * (target - L.q_[i]);
  ++L.count_sa_[i];
  ++L.count_s_[s];
  ++L.steps_;
  ++L.op_counter_;
}

void q_update(LearnerState& L, std::size_t s, std::size_t a, double reward, std::size_t s_next,
              const LearningConfig& cfg) {
  q_update(L, s, a, reward, s_next, cfg.alpha, cfg.gamma);
}

void jaakkola_update(LearnerState& L, std::size_t s, std::size_t a, double reward,
                     const LearningConfig& cfg) {
  L.check(s, a);
  const std::size_t A = L.actions_;
  ++L.steps_;
  const double gamma = cfg.gamma_schedule.at(L.steps_);
  const double delta = reward - L.avg_reward_;

  L.touch(s);
  L.materialize(s);
  const std::size_t base = s * A;
  std::vector<double> q_prev(L.q_.begin() + static_cast<std::ptrdiff_t>(base),
                             L.q_.begin() + static_cast<std::ptrdiff_t>(base + A));
  std::vector<double> beta_prev(L.beta_sa_.begin() + static_cast<std::ptrdiff_t>(base),
                                L.beta_sa_.begin() + static_cast<std::ptrdiff_t>(base + A));
  const double v_prev = L.v_[s];
  const double beta_s_prev = L.beta_s_[s];

  if (gamma < kDenseGamma) {
    L.rebase();
    for (std::uint32_t u : L.touched_) {
      for (std::size_t b = 0; b < A; ++b) {
        const std::size_t i = u * A + b;
        L.beta_sa_[i] *= gamma;
        L.q_[i] += L.beta_sa_[i] * delta;
      }
      L.beta_s_[u] *= gamma;
      L.v_[u] += L.beta_s_[u] * delta;
    }
  } else {
    if (L.decay_ * gamma < kRebaseDecay || L.steps_since_rebase_ >= kRebaseSteps) L.rebase();
    L.decay_ *= gamma;
    L.sum_ += L.decay_ * delta;
    ++L.steps_since_rebase_;
  }

  const std::uint64_t k_sa = ++L.count_sa_[base + a];
  const std::uint64_t k_s = ++L.count_s_[s];
  for (std::size_t b = 0; b < A; ++b) {
    double beta_new = gamma * beta_prev[b];
    double q_new = q_prev[b];
    if (b == a) {
      const double w = 1.0 / static_cast<double>(k_sa);
      beta_new = (1.0 - w) * gamma * beta_prev[b] + w;
      q_new = (1.0 - w) * q_prev[b];
    }
    L.beta_sa_[base + b] = beta_new;
    L.q_[base + b] = q_new + beta_new * delta;
  }
  const double w_s = 1.0 / static_cast<double>(k_s);
  const double beta_s_new = (1.0 - w_s) * gamma * beta_s_prev + w_s;
  L.beta_s_[s] = beta_s_new;
  L.v_[s] = (1.0 - w_s) * v_prev + beta_s_new * delta;
  L.stamp_decay_[s] = L.decay_;
  L.stamp_sum_[s] = L.sum_;

  L.avg_reward_ += (reward - L.avg_reward_) / static_cast<double>(L.steps_);
  L.op_counter_ += op_count_visit_update(L.states_, A);
}

namespace {

void improve_row(std::span<double> row, const LearnerState& L, std::size_t s, double epsilon,
                 double floor) {
  const std::size_t A = row.size();
  std::vector<double> q(A);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < A; ++a) {
    q[a] = L.q(s, a);
    best = std::max(best, q[a]);
  }
  const double tol = 1e-12 * std::max(1.0, std::abs(best));
  std::size_t ties = 0;
  for (double value : q) ties += (best - value <= tol) ? 1 : 0;
  const double greedy_mass = 1.0 / static_cast<double>(ties);
  for (std::size_t a = 0; a < A; ++a) {
    const double greedy = (best - q[a] <= tol) ? greedy_mass : 0.0;
    row[a] = (1.0 - epsilon) * row[a] + epsilon * greedy;
  }
  apply_exploration_floor(row, floor);
}

void check_epsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must be in [0, 1]");
}

}  // namespace

StochasticPolicy jaakkola_improve(const StochasticPolicy& pi, LearnerState& L, double epsilon,
                                  double exploration_floor) {
  check_epsilon(epsilon);
  if (pi.num_states() != L.num_states() || pi.num_actions() != L.num_actions()) {
    throw std::invalid_argument("policy and learner shapes differ");
  }
  StochasticPolicy out = pi;
  for (std::size_t s = 0; s < out.num_states(); ++s) {
    improve_row(out.mutable_row(s), L, s, epsilon, exploration_floor);
  }
  L.add_ops(4 * static_cast<std::uint64_t>(L.num_states()) * L.num_actions());
  return out;
}

void improve_state(StochasticPolicy& pi, LearnerState& L, std::size_t s, double epsilon,
                   double exploration_floor) {
  check_epsilon(epsilon);
  improve_row(pi.mutable_row(s), L, s, epsilon, exploration_floor);
  L.add_ops(4 * static_cast<std::uint64_t>(L.num_actions()));
}

bool local_max_reached(const LearnerState& L, std::size_t s) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < L.num_actions(); ++a) best = std::max(best, L.q(s, a) - L.v(s));
  return best <= 0.0;
}

std::uint64_t op_count_visit_update(std::uint64_t S, std::uint64_t A) {
  return (24 + (A - 1) * 4) + (S - 1) * A * 8;
}

std::uint64_t op_count_sweep(std::uint64_t S, std::uint64_t A, std::uint64_t K) {
  return K * S * (op_count_visit_update(S, A) + S * A * 4);
}

}  // namespace levelk::rl
