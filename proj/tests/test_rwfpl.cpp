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

#include <algorithm>
#include <cmath>
#include <vector>

#include "lazyleader/adversaries.hpp"
#include "lazyleader/bounds.hpp"
#include "lazyleader/harness.hpp"
#include "lazyleader/rwfpl.hpp"
#include "test_support.hpp"

using namespace lazyleader;

TEST_CASE("rw_step plays a minimizer of the perturbed losses") {
  bool saw_example = false;
  for (std::uint64_t s = 0; s < 200; ++s) {
    WalkState walk(2);
    RngStream rng(s, 0);
    const std::size_t a = rw_step(walk, CumulativeLoss(2), std::nullopt, rng);
    CHECK(walk.t == 1);
    CHECK(std::abs(walk.z[0]) == 0.5);
    CHECK(std::abs(walk.z[1]) == 0.5);
    CHECK(walk.z[a] == std::min(walk.z[0], walk.z[1]));
    if (walk.z[0] == -0.5 && walk.z[1] == 0.5) {
      CHECK(a == 0);
      saw_example = true;
    }
  }
  CHECK(saw_example);
}

TEST_CASE("a gap of 5 cannot be crossed in one step") {
  CumulativeLoss cumulative(3);
  for (int k = 0; k < 5; ++k) cumulative.absorb(std::vector<double>{1, 0, 1});
  for (std::uint64_t s = 0; s < 100; ++s) {
    WalkState walk(3);
    walk.t = cumulative.rounds();
    RngStream rng(s, 0);
    CHECK(rw_step(walk, cumulative, std::nullopt, rng) == 1);
  }
  WalkState stale(3);
  RngStream rng(0, 0);
  CHECK_THROWS_AS(rw_step(stale, cumulative, std::nullopt, rng), ContractError);
}

TEST_CASE("lead pack boundary is inclusive") {
  CHECK(lead_pack(std::vector<double>{0.0, 2.0}) == std::vector<std::size_t>{0, 1});
  CHECK(lead_pack(std::vector<double>{0.0, 2.5}) == std::vector<std::size_t>{0});
  CHECK(lead_pack(std::vector<double>{3.5, 1.0, 3.0}) == std::vector<std::size_t>{1, 2});
}

TEST_CASE("walk marginal after 20 steps is binomial") {
  constexpr int kSteps = 20;
  constexpr int kSamples = 100000;
  std::vector<double> counts(kSteps + 1, 0.0);
  // The extension column of a 19-round game is Z_20.
  const LossMatrix losses = LossMatrix::zeros(kSteps - 1, 1);
  for (int r = 0; r < kSamples; ++r) {
    RngStream rng(2024, static_cast<std::uint64_t>(r));
    const RwfplRun run = run_rwfpl(losses, rng, {TieBreak::kUniform, false});
    // Z = H - 10 where H counts the +1/2 steps.
    counts[static_cast<std::size_t>(run.final_walk[0] + kSteps / 2.0)] += 1.0;
  }
  const auto c = testing::pascal(kSteps);
  std::vector<double> p(kSteps + 1);
  for (int h = 0; h <= kSteps; ++h) p[h] = static_cast<double>(c[kSteps][h]) / std::ldexp(1.0, kSteps);
  CHECK(testing::chi_square_p_value(counts, p) > 1e-3);
}

namespace {

RwfplRun hand_run(std::size_t n, std::vector<std::size_t> actions, std::vector<double> suffered,
                  std::vector<double> final_walk, std::vector<double> incumbent_steps,
                  std::vector<double> leader_steps, std::size_t extension,
                  const LossMatrix& losses) {
  RwfplRun run;
  run.record.actions = std::move(actions);
  run.record.losses_suffered = std::move(suffered);
  finalize_record(run.record, losses);
  run.final_walk = std::move(final_walk);
  run.incumbent_steps = std::move(incumbent_steps);
  run.leader_steps = std::move(leader_steps);
  run.extension_action = extension;
  REQUIRE(run.record.rounds() == n);
  return run;
}

}  // namespace

TEST_CASE("pathwise inequalities on a one-round hand trace") {
  // l_1 = (1, 0); X_1 = (-1/2, +1/2) so I_1 = 1; X_2 = (+1/2, +1/2) gives
  // L_1 + Z_2 = (1, 1) and the extension leader is taken to be action 2.
  const LossMatrix losses(1, 2, {1, 0});
  const RwfplRun run = hand_run(1, {0}, {1.0}, {0.0, 1.0}, {-0.5, 0.5}, {-0.5, 0.5}, 1, losses);

  // Lhat - L_i <= 2 C' + Z_{i,2} - (X_{I_0,1} + X_{I_1,2}) with C' = 1.
  const auto lemma = verify_pathwise_lemma1(run, losses);
  CHECK(lemma.all());
  CHECK(lemma.slack[0] == doctest::Approx(2.0 + 0.0 - 0.0 - (1.0 - 1.0)));
  CHECK(lemma.slack[1] == doctest::Approx(2.0 + 1.0 - 0.0 - (1.0 - 0.0)));

  // -1/2 + (l_{2,1} + 1/2) <= L_{i,1} + Z_{i,2}
  const auto btl = verify_be_the_leader(run, losses);
  CHECK(btl.all());
  CHECK(btl.slack[0] == doctest::Approx(1.0 - 0.0));
  CHECK(btl.slack[1] == doctest::Approx(1.0 - 0.0));
}

TEST_CASE("the switch at the extension round is needed") {
  // Zero losses, X_1 = (+1/2, +1/2) tied with I_1 = 1, X_2 = (+1/2, -1/2).
  const LossMatrix losses = LossMatrix::zeros(1, 2);
  const RwfplRun run = hand_run(1, {0}, {0.0}, {1.0, 0.0}, {0.5, 0.5}, {0.5, -0.5}, 1, losses);
  const auto lemma = verify_pathwise_lemma1(run, losses);
  CHECK(lemma.all());
  CHECK(lemma.slack[1] == doctest::Approx(1.0));
  // Using C_n = 0 alone the right-hand side would be 0 + 0 - 1 = -1.
  CHECK(lemma.switch_count_only_violations == 1);
}

TEST_CASE("pathwise checks need the extension column") {
  const LossMatrix losses = LossMatrix::zeros(3, 2);
  RngStream rng(1, 0);
  RwfplRun run = run_rwfpl(losses, rng);
  run.incumbent_steps.pop_back();
  CHECK_THROWS_AS(verify_pathwise_lemma1(run, losses), ContractError);
}

TEST_CASE("pathwise checks hold on random losses") {
  const LossMatrix losses = generate({AdversaryKind::kUniformVectors, 0.5, 100, "", 4}, 500, 5);
  const LossMatrix alternating = generate({AdversaryKind::kAlternating}, 500, 3);
  for (std::uint64_t r = 0; r < 200; ++r) {
    RngStream rng(31, r);
    const RwfplRun run = run_rwfpl(losses, rng);
    CHECK(verify_pathwise_lemma1(run, losses).all());
    CHECK(verify_be_the_leader(run, losses).all());
    RngStream rng2(32, r);
    const RwfplRun alt = run_rwfpl(alternating, rng2);
    CHECK(verify_pathwise_lemma1(alt, alternating).all());
    CHECK(verify_be_the_leader(alt, alternating).all());
  }
}

TEST_CASE("one round has no switches and nonnegative regret") {
  const LossMatrix losses(1, 3, {0.4, 0.1, 0.9});
  for (std::uint64_t r = 0; r < 50; ++r) {
    RngStream rng(5, r);
    const RwfplRun run = run_rwfpl(losses, rng);
    CHECK(run.record.switches() == 0);
    const double expected = losses.at(0, run.record.actions[0]) - 0.1;
    CHECK(run.record.regret() == doctest::Approx(expected));
    CHECK(run.record.regret() >= 0.0);
  }
}

TEST_CASE("adapter and direct runner agree") {
  const LossMatrix losses = generate({AdversaryKind::kBernoulli, 0.5, 100, "", 8}, 400, 4);
  RngStream a(3, 7), b(3, 7);
  RandomWalkFpl f;
  CHECK(play(f, losses, a).actions == run_rwfpl(losses, b).record.actions);
}

TEST_CASE("switch count grows like sqrt(n) on zero losses") {
  constexpr std::size_t n = 10000;
  const LossMatrix losses = LossMatrix::zeros(n, 2);
  std::vector<std::size_t> switches(1000);
  parallel_for(switches.size(), resolve_threads(std::nullopt), [&](std::size_t r) {
    RngStream rng(99, r);
    RwfplOptions options;
    options.track_lead_pack = false;
    const RwfplRun run = run_rwfpl(losses, rng, options);
    CHECK(run.record.regret() == 0.0);
    switches[r] = run.record.switches();
  });
  double mean = 0.0;
  for (auto s : switches) mean += static_cast<double>(s);
  mean /= static_cast<double>(switches.size());
  const double root_n = std::sqrt(static_cast<double>(n));
  CHECK(mean >= 0.3 * root_n);
  CHECK(mean <= 1.3 * root_n);
  CHECK(mean <= 4.0 * std::sqrt(2.0 * n * std::log(2.0)) + 4.0 * std::log(n) + 4.0);
}

TEST_CASE("lead pack frequency at t = 100 respects its bound") {
  const LossMatrix losses = LossMatrix::zeros(101, 2);
  const std::vector<std::size_t> ts{100};
  const LeadPackStudy study = lead_pack_study(losses, ts, 100000, 17);
  const double freq = static_cast<double>(study.points[0].pack_gt1) / 100000.0;
  CHECK(freq <= 0.5510);
  CHECK(freq > 0.0);
  CHECK(study.lemma1_violations == 0);
  CHECK(study.be_the_leader_violations == 0);
}

TEST_CASE("tie rule is selectable") {
  const LossMatrix losses = LossMatrix::zeros(2000, 2);
  std::size_t sticky = 0, uniform = 0;
  for (std::uint64_t r = 0; r < 200; ++r) {
    RngStream a(8, r), b(8, r);
    sticky += run_rwfpl(losses, a, {TieBreak::kIncumbent, false}).record.switches();
    uniform += run_rwfpl(losses, b, {TieBreak::kUniform, false}).record.switches();
  }
  CHECK(sticky < uniform);
}
