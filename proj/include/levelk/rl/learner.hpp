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
#include <span>
#include <string>
#include <vector>

#include "levelk/rl/policy.hpp"

namespace levelk::rl {

/// Discount schedule gamma_t for the average-reward POMDP learner. Values
/// lie in [0, 1); the harmonic schedule t / (t + tau) rises toward 1.
struct GammaSchedule {
  enum class Kind { kHarmonic, kConstant };

  Kind kind = Kind::kHarmonic;
  double tau = 1000.0;   // harmonic time scale, in update steps
  double value = 0.0;    // constant schedule value

  double at(std::uint64_t step) const;

  static GammaSchedule harmonic(double tau) { return {Kind::kHarmonic, tau, 0.0}; }
  static GammaSchedule constant(double value) { return {Kind::kConstant, 1000.0, value}; }
};

/// Hyperparameters shared by the tabular and fitted learners.
struct LearningConfig {
  double alpha = 0.1;             // Q-learning step size, (0, 1]
  double gamma = 0.9;             // Q-learning / NFQ discount, [0, 1]
  double epsilon = 0.1;           // policy update rate, [0, 1]
  GammaSchedule gamma_schedule{};
  double exploration_floor = 0.01;
  double q_explore = 0.1;         // epsilon-greedy rate for the Q-learning backend
  std::size_t episodes = 200;
  std::uint64_t seed = 1;

  /// Throws ConfigError for any value outside its documented range.
  void validate() const;
};

/// Tabular learner tables: Q, V, eligibility traces, visit counts, the
/// running average reward and an operation counter.
///
/// The trace/value decay that the average-reward update applies to every
/// non-visited cell is evaluated lazily: stored cells carry the global
/// (decay product, discounted reward sum) at the time they were last
/// written, and reads reconstruct the current value. The observable values
/// are the same as a dense sweep over every cell; the dense transcription in
/// the tests checks this.
class LearnerState {
 public:
  LearnerState(std::size_t num_states, std::size_t num_actions);

  std::size_t num_states() const noexcept { return states_; }
  std::size_t num_actions() const noexcept { return actions_; }

  double q(std::size_t s, std::size_t a) const;
  double v(std::size_t s) const;
  double beta(std::size_t s, std::size_t a) const;
  double beta_state(std::size_t s) const;
  std::uint64_t count(std::size_t s, std::size_t a) const;
  std::uint64_t count(std::size_t s) const;

  double avg_reward() const noexcept { return avg_reward_; }
  std::uint64_t steps() const noexcept { return steps_; }
  std::uint64_t op_counter() const noexcept { return op_counter_; }

  /// States with at least one recorded visit, in first-visit order.
  const std::vector<std::uint32_t>& visited_states() const noexcept { return touched_; }

  /// Direct Q write (Q-learning and tests). Counts as one operation.
  void set_q(std::size_t s, std::size_t a, double value);

  /// Restores a full state row (used when reading checkpoints).
  void restore_state(std::size_t s, double v, double beta_s, std::uint64_t count_s,
                     std::span<const double> q, std::span<const double> beta_sa,
                     std::span<const std::uint64_t> count_sa);
  void restore_globals(std::uint64_t steps, double avg_reward);

  void add_ops(std::uint64_t n) noexcept { op_counter_ += n; }

  /// Counts a visit of (s, a) without touching values (learners that keep
  /// their estimates elsewhere, e.g. NFQ).
  void record_visit(std::size_t s, std::size_t a);

 private:
  friend void jaakkola_update(LearnerState&, std::size_t, std::size_t, double, const LearningConfig&);
  friend void q_update(LearnerState&, std::size_t, std::size_t, double, std::size_t, double, double, bool);

  void check(std::size_t s, std::size_t a) const;
  void check(std::size_t s) const;
  void touch(std::size_t s);
  void materialize(std::size_t s);
  void rebase();

  std::size_t states_;
  std::size_t actions_;
  // Per (s, a), stored at the state's stamp.
  std::vector<double> q_;
  std::vector<double> beta_sa_;
  std::vector<std::uint64_t> count_sa_;
  // Per s.
  std::vector<double> v_;
  std::vector<double> beta_s_;
  std::vector<std::uint64_t> count_s_;
  std::vector<double> stamp_decay_;
  std::vector<double> stamp_sum_;
  std::vector<std::uint8_t> touched_flag_;
  std::vector<std::uint32_t> touched_;
  // Global lazy-decay accumulators since the last rebase.
  double decay_ = 1.0;
  double sum_ = 0.0;
  std::uint64_t steps_since_rebase_ = 0;

  double avg_reward_ = 0.0;
  std::uint64_t steps_ = 0;
  std::uint64_t op_counter_ = 0;
};

/// One-step Q-learning update
///   Q[s][a] += alpha * (r + gamma * max_b Q[s_next][b] - Q[s][a]).
/// A terminal transition drops the bootstrap term. Throws std::out_of_range
/// on bad indices.
void q_update(LearnerState& L, std::size_t s, std::size_t a, double reward, std::size_t s_next,
              double alpha, double gamma, bool terminal = false);
void q_update(LearnerState& L, std::size_t s, std::size_t a, double reward, std::size_t s_next,
              const LearningConfig& cfg);

/// Average-reward POMDP update for one visit of (s, a) with reward R_t.
///
/// Visit counts are incremented first, so K >= 1. For the visited pair and
/// state the traces become (1 - 1/K) gamma_t beta + 1/K and the values
/// (1 - 1/K) old + beta (R_t - R). Every other trace decays by gamma_t and
/// every other value accumulates beta (R_t - R). R is the running mean of
/// all previous rewards; it is updated after the step.
void jaakkola_update(LearnerState& L, std::size_t s, std::size_t a, double reward,
                     const LearningConfig& cfg);

/// Policy improvement on every state:
///   pi(a|s) <- (1 - eps) pi(a|s) + eps pi1(a|s),
/// pi1 greedy on Q with ties split uniformly, then the exploration floor.
/// Throws ConfigError if eps is outside [0, 1].
StochasticPolicy jaakkola_improve(const StochasticPolicy& pi, LearnerState& L, double epsilon,
                                  double exploration_floor = 0.0);

/// Same update restricted to one state, in place.
void improve_state(StochasticPolicy& pi, LearnerState& L, std::size_t s, double epsilon,
                   double exploration_floor = 0.0);

/// True iff max_a [Q(s,a) - V(s)] <= 0, i.e. improvement has stalled at s.
bool local_max_reached(const LearnerState& L, std::size_t s);

/// Operation total of one sweep that visits each of S states K times:
///   K * S * ((24 + (A-1)*4) + (S-1)*A*8 + S*A*4).
std::uint64_t op_count_sweep(std::uint64_t S, std::uint64_t A, std::uint64_t K);

/// Per-visit share of op_count_sweep charged by jaakkola_update
/// (the policy-improvement share is charged by jaakkola_improve).
std::uint64_t op_count_visit_update(std::uint64_t S, std::uint64_t A);

}  // namespace levelk::rl
