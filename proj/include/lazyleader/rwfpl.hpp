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

// Follow the perturbed leader where every action's cumulative loss is
// perturbed by its own symmetric random walk with +-1/2 steps.
//
// Round t draws X_{i,t} in {-1/2, +1/2} for every action, sets
// Z_{i,t} = Z_{i,t-1} + X_{i,t} and plays arg min_i (L_{i,t-1} + Z_{i,t}).
// Consecutive rounds share all but one step of the perturbation, so the
// leader only changes when two perturbed losses come within a step of each
// other. That keeps the number of switches at O(sqrt(n log N)).

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lazyleader/core.hpp"

namespace lazyleader {

// Z_{.,t} for every action after `t` steps. Walk values are multiples of
// 1/2 and exactly representable, so ties between them are exact.
struct WalkState {
  std::vector<double> z;
  std::size_t t = 0;

  explicit WalkState(std::size_t actions) : z(actions, 0.0) {}
};

// Plays round walk.t + 1: advances every walk by one coin step and returns
// an index minimizing L_{i,t-1} + Z_{i,t}. Requires walk.t == cumulative.rounds().
std::size_t rw_step(WalkState& walk, const CumulativeLoss& cumulative,
                    std::optional<std::size_t> incumbent, RngStream& rng,
                    TieBreak tie = TieBreak::kUniform);

// Lead pack A_t: every action whose perturbed loss is within 2 of the
// minimum (boundary inclusive). Expects the walk already advanced for round
// t, i.e. walk.t == cumulative.rounds() + 1.
std::vector<std::size_t> lead_pack(const WalkState& walk, const CumulativeLoss& cumulative);
std::vector<std::size_t> lead_pack(std::span<const double> perturbed);
std::size_t lead_pack_size(const WalkState& walk, const CumulativeLoss& cumulative);

struct RwfplOptions {
  TieBreak tie = TieBreak::kUniform;
  bool track_lead_pack = true;
};

// A played game plus the extra (n+1)-th perturbation column that the
// pathwise regret decomposition needs. The extension never affects play.
struct RwfplRun {
  RunRecord record;
  std::vector<double> final_walk;       // Z_{.,n+1}
  std::vector<double> incumbent_steps;  // X_{I_{t-1},t}, t = 1..n+1, I_0 := I_1
  std::vector<double> leader_steps;     // X_{I_t,t}, t = 1..n+1
  std::size_t extension_action = 0;     // I_{n+1} = argmin (L_n + Z_{n+1})
};

RwfplRun run_rwfpl(const LossMatrix& losses, RngStream& rng, const RwfplOptions& options = {});

// Pathwise regret decomposition against each comparator i:
//   Lhat_n - L_{i,n} <= 2 C' + Z_{i,n+1} - sum_{t=1}^{n+1} X_{I_{t-1},t}
// where C' counts switches over rounds 2..n+1, i.e. C_n plus one if the
// extension round's leader differs from I_n. Using only C_n is not enough:
// with n = 1, a tie at t = 1 and opposite steps at t = 2 the right-hand
// side drops to -1.
struct PathwiseCheck {
  std::vector<bool> holds;     // per comparator, with tolerance 1e-9
  std::vector<double> slack;   // rhs - lhs
  std::size_t switch_count_only_violations = 0;  // same inequality with C_n alone
  bool all() const;
};

PathwiseCheck verify_pathwise_lemma1(const RwfplRun& run, const LossMatrix& losses);

// Be-the-leader on the perturbed sequence (l_{.,t-1} + X_{.,t}), t = 1..n+1:
//   sum_t (l_{I_t,t-1} + X_{I_t,t}) <= L_{i,n} + Z_{i,n+1}  for every i.
PathwiseCheck verify_be_the_leader(const RwfplRun& run, const LossMatrix& losses);

// Forecaster-interface adapter, for harness code that treats all
// algorithms alike.
class RandomWalkFpl final : public Forecaster {
 public:
  explicit RandomWalkFpl(TieBreak tie = TieBreak::kUniform) : tie_(tie), walk_(0) {}

  std::string_view name() const override { return "rwfpl"; }
  void reset(std::size_t actions, std::size_t horizon) override;
  std::size_t actions() const override { return walk_.z.size(); }
  std::size_t choose(const CumulativeLoss& cumulative, RngStream& rng) override;

  const WalkState& walk() const { return walk_; }

 private:
  TieBreak tie_;
  WalkState walk_;
  std::optional<std::size_t> incumbent_;
};

}  // namespace lazyleader
