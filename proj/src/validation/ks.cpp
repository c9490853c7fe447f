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

#include "levelk/validation/ks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levelk::validation {
namespace {

constexpr double kTol = 1e-12;
// Above this sample count the recursion's alternating sums cancel badly.
constexpr std::size_t kRecursionLimit = 30;

std::vector<double> cdf_of(std::span<const double> pmf) {
  std::vector<double> cdf(pmf.size());
  double run = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    if (!(pmf[i] >= 0.0)) throw std::invalid_argument("negative probability mass");
    run += pmf[i];
    cdf[i] = run;
  }
  if (pmf.empty() || std::abs(run - 1.0) > 1e-9) throw std::invalid_argument("probability mass does not sum to 1");
  cdf.back() = 1.0;
  return cdf;
}

double log_choose(std::size_t n, std::size_t k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binom_pmf(std::size_t n, std::size_t k, double q) {
  if (q <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (q >= 1.0) return k == n ? 1.0 : 0.0;
  return std::exp(log_choose(n, k) + k * std::log(q) + (n - k) * std::log1p(-q));
}

}  // namespace

double conover_lower_tail(std::span<const double> pmf, std::size_t n, double d) {
  const auto cdf = cdf_of(pmf);
  if (n == 0) throw std::invalid_argument("sample count must be positive");
  if (d <= kTol) return 1.0;
  if (d > 1.0 + kTol) return 0.0;
  const double nn = static_cast<double>(n);
  const auto jmax = static_cast<std::size_t>(std::floor(nn * (1.0 - d) + 1e-9));
  // f[j] = P(X > x_j), x_j the first support point with H >= d + j / n. A
  // crossing at j means at most j samples fall at or below x_j.
  std::vector<double> f(jmax + 1, 0.0);
  for (std::size_t j = 0; j <= jmax; ++j) {
    const double level = d + static_cast<double>(j) / nn - kTol;
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), level);
    f[j] = it == cdf.end() ? 0.0 : 1.0 - *it;
  }
  // e[k]: k samples whose first crossing is at k.
  std::vector<double> e(jmax + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t k = 1; k <= jmax; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += std::exp(log_choose(k, j)) * std::pow(f[j], double(k - j)) * e[j];
    e[k] = 1.0 - s;
  }
  double p = 0.0;
  for (std::size_t j = 0; j <= jmax; ++j) p += std::exp(log_choose(n, j)) * std::pow(f[j], double(n - j)) * e[j];
  return std::clamp(p, 0.0, 1.0);
}

namespace {

// Probability that the cumulative counts leave the band
//   n (H - d) < count < n (H + d)
// at some support point; either side can be switched off.
double dp_escape(std::span<const double> pmf, std::size_t n, double d, bool lower, bool upper) {
  const auto cdf = cdf_of(pmf);
  if (n == 0) throw std::invalid_argument("sample count must be positive");
  if (d <= kTol) return 1.0;
  const double nn = static_cast<double>(n);
  // prob[c]: still inside the band with c samples at or below the current point.
  std::vector<double> prob(n + 1, 0.0), next(n + 1);
  prob[0] = 1.0;
  double below = 0.0;
  for (std::size_t k = 0; k < cdf.size(); ++k) {
    const double rest = 1.0 - below;
    const double q = rest > 0.0 ? std::min(1.0, pmf[k] / rest) : 0.0;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t c = 0; c <= n; ++c) {
      if (prob[c] == 0.0) continue;
      const std::size_t left = n - c;
      for (std::size_t m = 0; m <= left; ++m) next[c + m] += prob[c] * binom_pmf(left, m, q);
    }
    const double lo = nn * (cdf[k] - d) + 1e-9 * nn;
    const double hi = nn * (cdf[k] + d) - 1e-9 * nn;
    for (std::size_t c = 0; c <= n; ++c) {
      const double x = static_cast<double>(c);
      if ((lower && x <= lo) || (upper && x >= hi)) next[c] = 0.0;
    }
    prob.swap(next);
    below = cdf[k];
  }
  double stay = 0.0;
  for (double v : prob) stay += v;
  return std::clamp(1.0 - stay, 0.0, 1.0);
}

}  // namespace

double dp_lower_tail(std::span<const double> pmf, std::size_t n, double d) {
  return dp_escape(pmf, n, d, true, false);
}

double ks_two_sided_tail(std::span<const double> pmf, std::size_t n, double d) {
  return dp_escape(pmf, n, d, true, true);
}

double ks_lower_tail(std::span<const double> pmf, std::size_t n, double d) {
  return n <= kRecursionLimit ? conover_lower_tail(pmf, n, d) : dp_lower_tail(pmf, n, d);
}

double ks_upper_tail(std::span<const double> pmf, std::size_t n, double d) {
  // Reversing the support turns sup(S - H) into sup(H - S).
  std::vector<double> rev(pmf.rbegin(), pmf.rend());
  return ks_lower_tail(rev, n, d);
}

KsResult ks_discrete(std::span<const double> model_pmf, std::span<const double> empirical_pmf, std::size_t n,
                     double alpha) {
  if (model_pmf.size() != empirical_pmf.size()) throw std::invalid_argument("supports differ");
  if (n == 0) throw std::invalid_argument("sample count must be positive");
  const auto h = cdf_of(model_pmf);
  const auto s = cdf_of(empirical_pmf);
  KsResult r;
  for (std::size_t k = 0; k < h.size(); ++k) {
    r.d_plus = std::max(r.d_plus, s[k] - h[k]);
    r.d_minus = std::max(r.d_minus, h[k] - s[k]);
  }
  r.d = std::max(r.d_plus, r.d_minus);
  r.p_plus = ks_upper_tail(model_pmf, n, r.d);
  r.p_minus = ks_lower_tail(model_pmf, n, r.d);
  r.p_value = ks_two_sided_tail(model_pmf, n, r.d);
  r.rejected = r.p_value <= alpha;
  return r;
}

}  // namespace levelk::validation
