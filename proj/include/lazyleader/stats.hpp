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

#include <cstddef>
#include <span>

#include <nlohmann/json.hpp>

namespace lazyleader {

// Monte Carlo aggregate of one metric over R replications. The standard
// error uses the sample standard deviation (divisor R-1) and is 0 for R = 1.
// Quantiles interpolate linearly between order statistics.
struct StatSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double min = 0.0;
  double max = 0.0;
  double q50 = 0.0;
  double q90 = 0.0;
  double q99 = 0.0;

  nlohmann::json to_json() const;
};

StatSummary summarize(std::span<const double> samples);

// Linear-interpolation quantile of an ascending-sorted sample, q in [0,1].
double sorted_quantile(std::span<const double> sorted, double q);

}  // namespace lazyleader
