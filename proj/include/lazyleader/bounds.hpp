// Copyright 2026 The lazyleader Authors.
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

// Closed-form evaluators for the regret and switch-count guarantees. All
// logarithms are natural. Every function is pure.

#include <cstddef>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

namespace lazyleader {

struct BoundReport {
  std::string name;
  std::map<std::string, double> parameters;
  double value = 0.0;

  nlohmann::json to_json() const;
};

// Expected-regret bound of the random-walk forecaster:
//   8 sqrt(2 n ln N) + 16 ln n + 16.
double thm1_bound(std::size_t n, std::size_t actions);

// Expected switch-count bound:
//   4 sqrt(2 n ln N) + 4 ln n + 4.
double thm1_switch_bound(std::size_t n, std::size_t actions);

// P{|A_t| > 1} <= 4 sqrt(2 ln N / t) + 8 / t. Values above 1 are returned
// unchanged.
double lemma2_bound(std::size_t t, std::size_t actions);

// p_t(k-4) / p_t(k) for the +-1/2 walk, p_t(k) = P{Z_t = k/2}, via
//   1 + 4 (t+1)(k-2) / ((t-k+2)(t-k+4)).
// Requires -t+4 <= k <= t and k = t (mod 2).
double pmf_ratio(long long t, long long k);

// General-eta combinatorial regret bound:
//   m sqrt(n) (2d/eta + eta sqrt(2 ln d)) + m d (ln n + 1) / eta^2.
double thm2_regret_bound(std::size_t n, std::size_t d, std::size_t m, double eta);

// Simplified display at eta = default_eta(d):
//   4 m sqrt(d n) (ln d)^{1/4} + m (ln n + 1) sqrt(ln d).
// This dominates thm2_regret_bound(n, d, m, default_eta(d)); it is not equal
// to it (the ratio tends to 2^{-1/4}).
double thm2_regret_bound_tuned(std::size_t n, std::size_t d, std::size_t m);

// Explicit switch-count sum with a = 2 ln d + sqrt(2 ln d) + 1:
//   sum_t m (1 + 2 eta a + eta^2 a^2) / (4 eta^2 t)
//   + sum_t m (1 + eta a) sqrt(2 ln d) / (eta sqrt t).
// Both sums are evaluated term by term up to kDirectSumLimit rounds; above
// that, sum 1/t <= ln n + 1 and sum 1/sqrt(t) <= 2 sqrt(n) are used.
double thm2_switch_bound(std::size_t n, std::size_t d, std::size_t m, double eta);

inline constexpr std::size_t kDirectSumLimit = 10'000'000;

// sqrt(2d / sqrt(2 ln d)); requires d >= 2.
double default_eta(std::size_t d);

// sqrt((n/2) ln N). Asymptotic minimax lower bound, for context only.
double lower_bound(std::size_t n, std::size_t actions);

// Harmonic-type sums used by thm2_switch_bound.
double harmonic_sum(std::size_t n);
double inverse_sqrt_sum(std::size_t n);

}  // namespace lazyleader
