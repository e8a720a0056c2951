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

#include "lazyleader/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace lazyleader {

nlohmann::json StatSummary::to_json() const {
  return {{"count", count}, {"mean", mean}, {"std_error", std_error}, {"min", min},
          {"max", max},     {"q50", q50},   {"q90", q90},             {"q99", q99}};
}

double sorted_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

StatSummary summarize(std::span<const double> samples) {
  StatSummary s;
  s.count = samples.size();
  if (samples.empty()) return s;

  // Summation in index order keeps the result independent of how the
  // replications were scheduled.
  double total = 0.0;
  for (double x : samples) total += x;
  s.mean = total / static_cast<double>(s.count);
  if (s.count > 1) {
    double squares = 0.0;
    for (double x : samples) squares += (x - s.mean) * (x - s.mean);
    const double variance = squares / static_cast<double>(s.count - 1);
    s.std_error = std::sqrt(variance / static_cast<double>(s.count));
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  s.min = sorted.front();
  s.max = sorted.back();
  s.q50 = sorted_quantile(sorted, 0.50);
  s.q90 = sorted_quantile(sorted, 0.90);
  s.q99 = sorted_quantile(sorted, 0.99);
  return s;
}

}  // namespace lazyleader
