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

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "levelk/common/error.hpp"
#include "levelk/rl/learner.hpp"
#include "levelk/rl/policy.hpp"
#include "toy_mdp.hpp"

namespace levelk::rl {
namespace {

// Straight-line transcription of the average-reward update over every cell.
struct DenseJaakkola {
  std::size_t S, A;
  std::vector<double> q, beta_sa, v, beta_s;
  std::vector<double> k_sa, k_s;
  double r_bar = 0.0;
  double t = 0.0;

  DenseJaakkola(std::size_t s, std::size_t a)
      : S(s), A(a), q(s * a), beta_sa(s * a), v(s), beta_s(s), k_sa(s * a), k_s(s) {}

  void step(std::size_t s, std::size_t a, double r, double g) {
    t += 1.0;
    k_sa[s * A + a] += 1.0;
    k_s[s] += 1.0;
    for (std::size_t u = 0; u < S; ++u) {
      for (std::size_t b = 0; b < A; ++b) {
        const std::size_t i = u * A + b;
        const double chi = (u == s && b == a) ? 1.0 : 0.0;
        const double w = chi == 0.0 ? 0.0 : chi / k_sa[i];
        beta_sa[i] = (1.0 - w) * g * beta_sa[i] + w;
        q[i] = (1.0 - w) * q[i] + beta_sa[i] * (r - r_bar);
      }
      const double chi = (u == s) ? 1.0 : 0.0;
      const double w = chi == 0.0 ? 0.0 : chi / k_s[u];
      beta_s[u] = (1.0 - w) * g * beta_s[u] + w;
      v[u] = (1.0 - w) * v[u] + beta_s[u] * (r - r_bar);
    }
    r_bar = r_bar + (r - r_bar) / t;
  }
};

void expect_close(double got, double want, const char* what) {
  EXPECT_NEAR(got, want, 1e-9 * std::max(1.0, std::abs(want))) << what;
}

void compare(const LearnerState& L, const DenseJaakkola& d) {
  for (std::size_t s = 0; s < d.S; ++s) {
    for (std::size_t a = 0; a < d.A; ++a) {
      expect_close(L.q(s, a), d.q[s * d.A + a], "Q");
      expect_close(L.beta(s, a), d.beta_sa[s * d.A + a], "beta(s,a)");
    }
    expect_close(L.v(s), d.v[s], "V");
    expect_close(L.beta_state(s), d.beta_s[s], "beta(s)");
  }
  expect_close(L.avg_reward(), d.r_bar, "R");
}

void run_against_dense(GammaSchedule schedule, std::size_t steps, std::uint64_t seed) {
  constexpr std::size_t S = 4, A = 2;
  LearningConfig cfg;
  cfg.gamma_schedule = schedule;
  LearnerState L(S, A);
  DenseJaakkola dense(S, A);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_s(0, S - 1), pick_a(0, A - 1);
  std::normal_distribution<double> reward(0.3, 1.0);
  for (std::size_t t = 1; t <= steps; ++t) {
    const std::size_t s = pick_s(rng), a = pick_a(rng);
    const double r = reward(rng);
    jaakkola_update(L, s, a, r, cfg);
    dense.step(s, a, r, schedule.at(t));
    if (t % 97 == 0 || t == steps) compare(L, dense);
  }
}

TEST(StochasticPolicy, FreshPolicyIsUniform) {
  StochasticPolicy pi(5, 4);
  for (std::size_t s = 0; s < 5; ++s) {
    for (std::size_t a = 0; a < 4; ++a) EXPECT_DOUBLE_EQ(pi.prob(s, a), 0.25);
  }
  EXPECT_THROW(StochasticPolicy(0, 3), std::invalid_argument);
}

TEST(StochasticPolicy, SetRowValidates) {
  StochasticPolicy pi(2, 3);
  const std::array<double, 3> bad{0.5, 0.6, -0.1};
  EXPECT_THROW(pi.set_row(0, bad), std::invalid_argument);
  const std::array<double, 3> short_sum{0.2, 0.2, 0.2};
  EXPECT_THROW(pi.set_row(0, short_sum), std::invalid_argument);
  EXPECT_THROW(pi.prob(2, 0), std::out_of_range);
}

TEST(SampleAction, DegenerateRowAlwaysPicksItsAction) {
  StochasticPolicy pi(1, 3);
  const std::array<double, 3> row{1.0, 0.0, 0.0};
  pi.set_row(0, row);
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_action(pi, 0, rng), 0u);
}

TEST(SampleAction, UniformSevenFrequencies) {
  StochasticPolicy pi(1, 7);
  Rng rng(11);
  std::array<int, 7> counts{};
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) ++counts[sample_action(pi, 0, rng)];
  for (int c : counts) EXPECT_NEAR(static_cast<double>(c) / kDraws, 1.0 / 7.0, 0.01);
}

TEST(SampleAction, SameSeedSameSequence) {
  StochasticPolicy pi(1, 7);
  Rng a(42), b(42);
  for (int i = 0; i < 200; ++i) EXPECT_EQ(sample_action(pi, 0, a), sample_action(pi, 0, b));
}

TEST(ExplorationFloor, MinimumProbabilityBound) {
  std::mt19937_64 rng(5);
  std::gamma_distribution<double> g(0.3, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const double f = 0.001 * (1 + trial % 50);
    std::vector<double> row(n);
    double sum = 0.0;
    for (double& p : row) sum += (p = g(rng));
    for (double& p : row) p /= sum;
    row[trial % n] = 0.0;
    apply_exploration_floor(row, f);
    double total = 0.0;
    for (double p : row) {
      EXPECT_GE(p, f / (1.0 + static_cast<double>(n) * f) - 1e-15);
      total += p;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(GammaSchedule, HarmonicRisesTowardOne) {
  const auto g = GammaSchedule::harmonic(1000.0);
  EXPECT_DOUBLE_EQ(g.at(0), 0.0);
  EXPECT_NEAR(g.at(1000), 0.5, 1e-15);
  double prev = -1.0;
  for (std::uint64_t t : {1u, 10u, 100u, 10000u, 1000000u}) {
    const double v = g.at(t);
    EXPECT_GT(v, prev);
    EXPECT_LT(v, 1.0);
    prev = v;
  }
  EXPECT_GT(g.at(100000000), 0.9999);
}

TEST(LearningConfig, RejectsOutOfRange) {
  LearningConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.alpha = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.epsilon = 1.5;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.gamma = -0.1;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(QUpdate, CollapsesToRewardWithUnitStepAndNoDiscount) {
  LearnerState L(2, 2);
  q_update(L, 0, 1, 5.0, 1, 1.0, 0.0);
  EXPECT_DOUBLE_EQ(L.q(0, 1), 5.0);
}

TEST(QUpdate, HandComputedStep) {
  LearnerState L(2, 2);
  L.set_q(1, 0, 1.0);
  L.set_q(1, 1, 2.0);
  const auto before = L.op_counter();
  q_update(L, 0, 0, 1.0, 1, 0.5, 0.9);
  EXPECT_NEAR(L.q(0, 0), 1.4, 1e-15);
  EXPECT_EQ(L.q(0, 1), 0.0);
  EXPECT_EQ(L.q(1, 0), 1.0);
  EXPECT_EQ(L.q(1, 1), 2.0);
  EXPECT_GT(L.op_counter(), before);
}

TEST(QUpdate, BoundsChecked) {
  LearnerState L(2, 2);
  EXPECT_THROW(q_update(L, 2, 0, 0.0, 0, 0.5, 0.9), std::out_of_range);
  EXPECT_THROW(q_update(L, 0, 2, 0.0, 0, 0.5, 0.9), std::out_of_range);
  EXPECT_THROW(q_update(L, 0, 0, 0.0, 3, 0.5, 0.9), std::out_of_range);
}

TEST(QUpdate, ConvergesToValueIterationWithConstantStep) {
  testing::ToyMdp mdp;
  const double gamma = 0.9;
  const auto q_star = mdp.q_star(gamma);
  LearnerState L(3, 2);
  for (int sweep = 0; sweep < 3000; ++sweep) {
    for (std::size_t s = 0; s < 3; ++s) {
      for (std::size_t a = 0; a < 2; ++a) {
        q_update(L, s, a, mdp.reward[s][a], mdp.next[s][a], 0.5, gamma);
      }
    }
  }
  for (std::size_t s = 0; s < 3; ++s) {
    for (std::size_t a = 0; a < 2; ++a) EXPECT_NEAR(L.q(s, a), q_star[s][a], 1e-6);
  }
}

TEST(QUpdate, ConvergesUnderRobbinsMonroSteps) {
  // Visits drawn at random; per-pair step 1/n^0.7 (sum diverges, squares converge).
  testing::ToyMdp mdp;
  const double gamma = 0.5;
  const auto q_star = mdp.q_star(gamma);
  LearnerState L(3, 2);
  std::mt19937_64 rng(9);
  std::size_t s = 0;
  for (int t = 0; t < 400000; ++t) {
    const std::size_t a = rng() % 2;
    const double n = static_cast<double>(L.count(s, a) + 1);
    q_update(L, s, a, mdp.reward[s][a], mdp.next[s][a], std::pow(n, -0.7), gamma);
    s = (rng() % 10 == 0) ? rng() % 3 : mdp.next[s][a];
  }
  for (std::size_t u = 0; u < 3; ++u) {
    for (std::size_t a = 0; a < 2; ++a) EXPECT_NEAR(L.q(u, a), q_star[u][a], 1e-4);
  }
}

TEST(QUpdate, TerminalDropsBootstrap) {
  LearnerState L(2, 1);
  L.set_q(1, 0, 10.0);
  q_update(L, 0, 0, 1.0, 1, 1.0, 0.9, true);
  EXPECT_DOUBLE_EQ(L.q(0, 0), 1.0);
}

TEST(JaakkolaUpdate, FirstVisit) {
  LearnerState L(3, 2);
  LearningConfig cfg;
  jaakkola_update(L, 1, 0, 2.5, cfg);
  EXPECT_DOUBLE_EQ(L.beta(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(L.q(1, 0), 2.5);  // R was 0 before the step
  EXPECT_DOUBLE_EQ(L.beta_state(1), 1.0);
  EXPECT_DOUBLE_EQ(L.v(1), 2.5);
  EXPECT_DOUBLE_EQ(L.avg_reward(), 2.5);
  EXPECT_EQ(L.count(1, 0), 1u);
  EXPECT_EQ(L.count(1), 1u);
}

TEST(JaakkolaUpdate, ZeroGammaClearsOtherTraces) {
  LearnerState L(4, 2);
  LearningConfig cfg;
  cfg.gamma_schedule = GammaSchedule::constant(0.7);
  for (std::size_t s = 0; s < 4; ++s) jaakkola_update(L, s, s % 2, 1.0 + s, cfg);
  cfg.gamma_schedule = GammaSchedule::constant(0.0);
  jaakkola_update(L, 2, 1, 3.0, cfg);
  for (std::size_t s = 0; s < 4; ++s) {
    for (std::size_t a = 0; a < 2; ++a) {
      if (s == 2 && a == 1) continue;
      EXPECT_EQ(L.beta(s, a), 0.0) << s << "," << a;
    }
    if (s != 2) EXPECT_EQ(L.beta_state(s), 0.0);
  }
}

TEST(JaakkolaUpdate, MatchesDenseTranscriptionHarmonic) {
  run_against_dense(GammaSchedule::harmonic(10.0), 20000, 1);
}

TEST(JaakkolaUpdate, MatchesDenseTranscriptionDefaultSchedule) {
  run_against_dense(GammaSchedule::harmonic(1000.0), 10000, 2);
}

TEST(JaakkolaUpdate, MatchesDenseTranscriptionFastDecay) {
  run_against_dense(GammaSchedule::constant(0.3), 3000, 3);
}

TEST(JaakkolaUpdate, MatchesDenseTranscriptionZeroGamma) {
  run_against_dense(GammaSchedule::constant(0.0), 500, 4);
}

TEST(JaakkolaUpdate, CountsStayConsistent) {
  LearnerState L(5, 3);
  LearningConfig cfg;
  std::mt19937_64 rng(8);
  for (int t = 0; t < 1000; ++t) jaakkola_update(L, rng() % 5, rng() % 3, 1.0, cfg);
  for (std::size_t s = 0; s < 5; ++s) {
    std::uint64_t total = 0;
    for (std::size_t a = 0; a < 3; ++a) total += L.count(s, a);
    EXPECT_EQ(total, L.count(s));
  }
}

TEST(JaakkolaImprove, ZeroEpsilonIsIdentity) {
  LearnerState L(3, 2);
  L.set_q(0, 1, 4.0);
  StochasticPolicy pi(3, 2);
  const std::array<double, 2> row{0.3, 0.7};
  pi.set_row(2, row);
  EXPECT_EQ(jaakkola_improve(pi, L, 0.0), pi);
}

TEST(JaakkolaImprove, FullStepGoesGreedy) {
  LearnerState L(1, 3);
  L.set_q(0, 2, 1.0);
  StochasticPolicy pi(1, 3);
  const auto out = jaakkola_improve(pi, L, 1.0);
  EXPECT_DOUBLE_EQ(out.prob(0, 2), 1.0);
  EXPECT_DOUBLE_EQ(out.prob(0, 0), 0.0);
}

TEST(JaakkolaImprove, HalfStepHandComputed) {
  LearnerState L(1, 2);
  L.set_q(0, 0, 1.0);
  StochasticPolicy pi(1, 2);
  const auto out = jaakkola_improve(pi, L, 0.5);
  EXPECT_DOUBLE_EQ(out.prob(0, 0), 0.75);
  EXPECT_DOUBLE_EQ(out.prob(0, 1), 0.25);
}

TEST(JaakkolaImprove, TiesSplitUniformly) {
  LearnerState L(1, 3);
  L.set_q(0, 0, 2.0);
  L.set_q(0, 2, 2.0);
  StochasticPolicy pi(1, 3);
  const auto out = jaakkola_improve(pi, L, 1.0);
  EXPECT_DOUBLE_EQ(out.prob(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(out.prob(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(out.prob(0, 2), 0.5);
}

TEST(JaakkolaImprove, RejectsBadEpsilon) {
  LearnerState L(1, 2);
  StochasticPolicy pi(1, 2);
  EXPECT_THROW(jaakkola_improve(pi, L, -0.1), ConfigError);
  EXPECT_THROW(jaakkola_improve(pi, L, 1.1), ConfigError);
}

TEST(JaakkolaImprove, RowsStayStochasticAndGreedyMassNeverDrops) {
  constexpr std::size_t S = 6, A = 4;
  LearnerState L(S, A);
  LearningConfig cfg;
  StochasticPolicy pi(S, A);
  std::mt19937_64 rng(21);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int round = 0; round < 300; ++round) {
    for (int k = 0; k < 5; ++k) jaakkola_update(L, rng() % S, rng() % A, noise(rng), cfg);
    const double eps = 0.05 + 0.9 * static_cast<double>(rng() % 100) / 100.0;
    const auto next = jaakkola_improve(pi, L, eps, round % 2 ? 0.01 : 0.0);
    for (std::size_t s = 0; s < S; ++s) {
      double sum = 0.0;
      for (std::size_t a = 0; a < A; ++a) sum += next.prob(s, a);
      EXPECT_NEAR(sum, 1.0, 1e-9);
      std::size_t best = 0, ties = 0;
      for (std::size_t a = 0; a < A; ++a) {
        if (L.q(s, a) > L.q(s, best)) best = a;
      }
      for (std::size_t a = 0; a < A; ++a) ties += (L.q(s, a) == L.q(s, best));
      if (ties == 1 && round % 2 == 0) EXPECT_GE(next.prob(s, best), pi.prob(s, best) - 1e-15);
    }
    pi = next;
  }
}

TEST(LocalMax, StopCondition) {
  LearnerState L(3, 2);
  EXPECT_TRUE(local_max_reached(L, 0));
  L.set_q(1, 0, 0.1);
  EXPECT_FALSE(local_max_reached(L, 1));
  // Q(s,.) = (0.2, 0.1) with V(s) = 0.3.
  const std::array<double, 2> q{0.2, 0.1}, beta{0.0, 0.0};
  const std::array<std::uint64_t, 2> counts{0, 0};
  L.restore_state(2, 0.3, 0.0, 0, q, beta, counts);
  EXPECT_TRUE(local_max_reached(L, 2));
}

// One training sweep: every state visited K times, each visit followed by a
// full-table policy improvement.
std::uint64_t instrumented_sweep(std::size_t S, std::size_t A, std::size_t K) {
  LearnerState L(S, A);
  LearningConfig cfg;
  StochasticPolicy pi(S, A);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t s = 0; s < S; ++s) {
      jaakkola_update(L, s, (s + k) % A, static_cast<double>(s % 3), cfg);
      pi = jaakkola_improve(pi, L, cfg.epsilon);
    }
  }
  return L.op_counter();
}

TEST(OpCount, ClosedFormSmallestCase) { EXPECT_EQ(op_count_sweep(1, 1, 1), 28u); }

TEST(OpCount, InstrumentedMatchesClosedForm) {
  EXPECT_EQ(instrumented_sweep(10, 3, 2), op_count_sweep(10, 3, 2));
  EXPECT_EQ(instrumented_sweep(50, 7, 1), op_count_sweep(50, 7, 1));
  EXPECT_EQ(instrumented_sweep(4, 2, 1), op_count_sweep(4, 2, 1));
}

TEST(OpCount, QuadraticInStates) {
  const double ratio = static_cast<double>(op_count_sweep(400, 3, 1)) /
                       static_cast<double>(op_count_sweep(200, 3, 1));
  EXPECT_NEAR(ratio, 4.0, 0.4);
}

}  // namespace
}  // namespace levelk::rl
