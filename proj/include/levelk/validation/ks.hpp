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
#include <span>
#include <vector>

namespace levelk::validation {

struct KsResult {
  double d = 0.0;        // sup |H - S|
  double d_plus = 0.0;   // sup (S - H)
  double d_minus = 0.0;  // sup (H - S)
  double p_plus = 1.0;   // P(D+ >= d)
  double p_minus = 1.0;  // P(D- >= d)
  double p_value = 1.0;  // P(D >= d)
  bool rejected = false;
};

/// Exact P(D- >= d) for n draws from the discrete model with probability
/// mass `pmf`, where D- = sup_x (H(x) - S_n(x)). Small n uses the Conover
/// first-crossing recursion; larger n (where the alternating recursion loses
/// precision) uses a dynamic program over cumulative counts.
double ks_lower_tail(std::span<const double> pmf, std::size_t n, double d);
/// Exact P(D+ >= d), D+ = sup_x (S_n(x) - H(x)).
double ks_upper_tail(std::span<const double> pmf, std::size_t n, double d);

/// Exact P(D >= d), D = max(D+, D-), by the dynamic program.
double ks_two_sided_tail(std::span<const double> pmf, std::size_t n, double d);

/// Same one-sided tails, always via the recursion or always via the dynamic program.
/// Exposed for cross-checking.
double conover_lower_tail(std::span<const double> pmf, std::size_t n, double d);
double dp_lower_tail(std::span<const double> pmf, std::size_t n, double d);

/// Discrete one-sample KS test of an empirical distribution with n samples
/// against a model. Both arguments are probability mass vectors over the
/// same support points (CDFs are their running sums). Both one-sided tails
/// are reported at the observed d. Their sum over-counts samples that cross
/// on both sides, so p is the exact two-sided P(D >= d), which lies between
/// max(p_plus, p_minus) and p_plus + p_minus. The null hypothesis is
/// rejected iff p <= alpha. Throws
/// std::invalid_argument on a support mismatch, an empty support or n = 0.
KsResult ks_discrete(std::span<const double> model_pmf, std::span<const double> empirical_pmf, std::size_t n,
                     double alpha = 0.05);

}  // namespace levelk::validation
