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

#include "lazyleader/bounds.hpp"

#include <cmath>

#include <fmt/format.h>

#include "lazyleader/core.hpp"

namespace lazyleader {

namespace {

void require_actions(std::size_t actions, const char* what) {
  if (actions < 2) {
    throw DomainError(fmt::format("{} needs at least 2 actions (got {})", what, actions));
  }
}

void require_combinatorial(std::size_t d, double eta, const char* what) {
  if (d < 2) throw DomainError(fmt::format("{} needs d >= 2 (got {})", what, d));
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw DomainError(fmt::format("{} needs a positive finite eta (got {})", what, eta));
  }
}

// ln n with the n = 0 convention ln 0 := 0, which only matters for the empty
// game.
double log_rounds(std::size_t n) { return n == 0 ? 0.0 : std::log(static_cast<double>(n)); }

}  // namespace

nlohmann::json BoundReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["parameters"] = parameters;
  j["value"] = value;
  return j;
}

double thm1_switch_bound(std::size_t n, std::size_t actions) {
  require_actions(actions, "thm1_switch_bound");
  const double nd = static_cast<double>(n);
  return 4.0 * std::sqrt(2.0 * nd * std::log(static_cast<double>(actions))) +
         4.0 * log_rounds(n) + 4.0;
}

double thm1_bound(std::size_t n, std::size_t actions) {
  require_actions(actions, "thm1_bound");
  const double nd = static_cast<double>(n);
  return 8.0 * std::sqrt(2.0 * nd * std::log(static_cast<double>(actions))) +
         16.0 * log_rounds(n) + 16.0;
}

double lemma2_bound(std::size_t t, std::size_t actions) {
  require_actions(actions, "lemma2_bound");
  if (t == 0) throw DomainError("lemma2_bound needs t >= 1");
  const double td = static_cast<double>(t);
  return 4.0 * std::sqrt(2.0 * std::log(static_cast<double>(actions)) / td) + 8.0 / td;
}

double pmf_ratio(long long t, long long k) {
  if (t < 0) throw DomainError(fmt::format("pmf_ratio needs t >= 0 (got {})", t));
  if (k < -t + 4 || k > t) {
    throw DomainError(fmt::format("pmf_ratio needs -t+4 <= k <= t (t={}, k={})", t, k));
  }
  if ((t - k) % 2 != 0) {
    throw DomainError(fmt::format("pmf_ratio needs k and t of equal parity (t={}, k={})", t, k));
  }
  const double td = static_cast<double>(t);
  const double kd = static_cast<double>(k);
  return 1.0 + 4.0 * (td + 1.0) * (kd - 2.0) / ((td - kd + 2.0) * (td - kd + 4.0));
}

double default_eta(std::size_t d) {
  if (d < 2) throw DomainError(fmt::format("default_eta needs d >= 2 (got {})", d));
  const double dd = static_cast<double>(d);
  return std::sqrt(2.0 * dd / std::sqrt(2.0 * std::log(dd)));
}

double thm2_regret_bound(std::size_t n, std::size_t d, std::size_t m, double eta) {
  require_combinatorial(d, eta, "thm2_regret_bound");
  const double md = static_cast<double>(m);
  const double dd = static_cast<double>(d);
  const double root_n = std::sqrt(static_cast<double>(n));
  return md * root_n * (2.0 * dd / eta + eta * std::sqrt(2.0 * std::log(dd))) +
         md * dd * (log_rounds(n) + 1.0) / (eta * eta);
}

double thm2_regret_bound_tuned(std::size_t n, std::size_t d, std::size_t m) {
  if (d < 2) throw DomainError(fmt::format("thm2_regret_bound_tuned needs d >= 2 (got {})", d));
  const double md = static_cast<double>(m);
  const double log_d = std::log(static_cast<double>(d));
  return 4.0 * md * std::sqrt(static_cast<double>(d) * static_cast<double>(n)) *
             std::pow(log_d, 0.25) +
         md * (log_rounds(n) + 1.0) * std::sqrt(log_d);
}

double harmonic_sum(std::size_t n) {
  if (n > kDirectSumLimit) return log_rounds(n) + 1.0;
  double sum = 0.0;
  // Smallest terms first.
  for (std::size_t t = n; t >= 1; --t) sum += 1.0 / static_cast<double>(t);
  return sum;
}

double inverse_sqrt_sum(std::size_t n) {
  if (n > kDirectSumLimit) return 2.0 * std::sqrt(static_cast<double>(n));
  double sum = 0.0;
  for (std::size_t t = n; t >= 1; --t) sum += 1.0 / std::sqrt(static_cast<double>(t));
  return sum;
}

double thm2_switch_bound(std::size_t n, std::size_t d, std::size_t m, double eta) {
  require_combinatorial(d, eta, "thm2_switch_bound");
  const double md = static_cast<double>(m);
  const double log_d = std::log(static_cast<double>(d));
  const double root = std::sqrt(2.0 * log_d);
  // Upper bound on E max_i of d squared standard normals.
  const double a = 2.0 * log_d + root + 1.0;
  const double first = md * (1.0 + 2.0 * eta * a + eta * eta * a * a) / (4.0 * eta * eta);
  const double second = md * (1.0 + eta * a) * root / eta;
  return first * harmonic_sum(n) + second * inverse_sqrt_sum(n);
}

double lower_bound(std::size_t n, std::size_t actions) {
  require_actions(actions, "lower_bound");
  return std::sqrt(static_cast<double>(n) / 2.0 * std::log(static_cast<double>(actions)));
}

}  // namespace lazyleader
