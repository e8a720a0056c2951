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

#include <doctest.h>

#include <sstream>

#include "lazyleader/adversaries.hpp"

using namespace lazyleader;

TEST_CASE("zeros and alternating") {
  const LossMatrix z = generate({AdversaryKind::kZeros}, 5, 3);
  CHECK(z.rounds() == 5);
  CHECK(z.totals() == std::vector<double>{0, 0, 0});

  const LossMatrix a = generate({AdversaryKind::kAlternating}, 4, 2);
  CHECK(a.at(0, 0) == 0.0);
  CHECK(a.at(0, 1) == 1.0);
  CHECK(a.at(1, 0) == 1.0);
  CHECK(a.at(3, 1) == 0.0);
  CHECK(a.totals() == std::vector<double>{2, 2});
}

TEST_CASE("bernoulli column means") {
  const LossMatrix b = generate({AdversaryKind::kBernoulli, 0.5, 100, "", 13}, 10000, 2);
  for (double total : b.totals()) CHECK(std::abs(total / 10000 - 0.5) <= 0.015);
  const LossMatrix again = generate({AdversaryKind::kBernoulli, 0.5, 100, "", 13}, 10000, 2);
  CHECK(again.totals() == b.totals());
  const LossMatrix other = generate({AdversaryKind::kBernoulli, 0.5, 100, "", 14}, 10000, 2);
  CHECK(other.totals() != b.totals());
}

TEST_CASE("drifting leader swaps the favoured action") {
  const LossMatrix d = generate({AdversaryKind::kDriftingLeader, 0.5, 3}, 12, 4);
  for (std::size_t t = 0; t < 12; ++t) {
    const std::size_t favoured = (t / 3) % 2;
    for (std::size_t i = 0; i < 4; ++i) CHECK(d.at(t, i) == (i == favoured ? 0.0 : 1.0));
  }
}

TEST_CASE("uniform vectors stay in range") {
  const LossMatrix u = generate({AdversaryKind::kUniformVectors, 0.5, 100, "", 1}, 1000, 10);
  double sum = 0.0;
  for (double t : u.totals()) sum += t;
  CHECK(std::abs(sum / 10000 - 0.5) < 0.02);
}

TEST_CASE("spec json round trip and validation") {
  const AdversarySpec spec{AdversaryKind::kBernoulli, 0.25, 100, "", 8};
  const AdversarySpec back = AdversarySpec::from_json(spec.to_json());
  CHECK(back.kind == AdversaryKind::kBernoulli);
  CHECK(back.p == 0.25);
  CHECK(back.seed == 8);
  CHECK_THROWS_AS(AdversarySpec::from_json({{"kind", "chaos"}}), ConfigError);
  CHECK_THROWS_AS(AdversarySpec::from_json({{"kind", "zeros"}, {"extra", 1}}), ConfigError);
  CHECK_THROWS_AS(AdversarySpec::from_json({{"kind", "bernoulli"}, {"p", 1.5}}), ConfigError);
  CHECK_THROWS_AS(AdversarySpec::from_json({{"kind", "custom_file"}}), ConfigError);
  CHECK_THROWS_AS(generate({AdversaryKind::kZeros}, 0, 2), ConfigError);
}

TEST_CASE("loss csv parsing") {
  std::stringstream with_header("a,b\n0,1\n0.5, 0.25\n");
  const LossMatrix m = parse_loss_csv(with_header);
  CHECK(m.rounds() == 2);
  CHECK(m.at(1, 1) == 0.25);
  std::stringstream ragged("0,1\n0\n");
  CHECK_THROWS_AS(parse_loss_csv(ragged), ConfigError);
  std::stringstream out_of_range("0,2\n");
  CHECK_THROWS_AS(parse_loss_csv(out_of_range), ConfigError);
  std::stringstream empty("");
  CHECK_THROWS_AS(parse_loss_csv(empty), ConfigError);
}
