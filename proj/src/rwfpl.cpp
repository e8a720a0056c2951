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

#include "lazyleader/rwfpl.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>

namespace lazyleader {

namespace {

constexpr double kLeadPackWidth = 2.0;
constexpr double kPathwiseTolerance = 1e-9;

}  // namespace

std::size_t rw_step(WalkState& walk, const CumulativeLoss& cumulative,
                    std::optional<std::size_t> incumbent, RngStream& rng, TieBreak tie) {
  const std::size_t n_actions = walk.z.size();
  if (cumulative.size() != n_actions) {
    throw ContractError(fmt::format("walk has {} actions, cumulative loss has {}", n_actions,
                                    cumulative.size()));
  }
  if (walk.t != cumulative.rounds()) {
    throw ContractError(fmt::format("walk is at step {} but cumulative loss covers {} rounds",
                                    walk.t, cumulative.rounds()));
  }
  const auto L = cumulative.values();
  double best_value = std::numeric_limits<double>::infinity();
  std::size_t best = 0;
  std::size_t ties = 0;
  for (std::size_t i = 0; i < n_actions; ++i) {
    walk.z[i] += rng.coin() ? 0.5 : -0.5;
    const double v = L[i] + walk.z[i];
    if (v < best_value) {
      best_value = v;
      best = i;
      ties = 1;
    } else if (v == best_value) {
      ++ties;
    }
  }
  ++walk.t;
  if (ties <= 1) return best;

  auto is_min = [&](std::size_t i) { return L[i] + walk.z[i] == best_value; };
  switch (tie) {
    case TieBreak::kLowestIndex:
      return best;
    case TieBreak::kIncumbent:
      return incumbent && *incumbent < n_actions && is_min(*incumbent) ? *incumbent : best;
    case TieBreak::kUniform: {
      std::size_t pick = rng.uniform_index(ties);
      for (std::size_t i = best; i < n_actions; ++i) {
        if (is_min(i) && pick-- == 0) return i;
      }
      return best;
    }
  }
  return best;
}

std::vector<std::size_t> lead_pack(std::span<const double> perturbed) {
  std::vector<std::size_t> pack;
  if (perturbed.empty()) return pack;
  const double threshold = *std::min_element(perturbed.begin(), perturbed.end()) + kLeadPackWidth;
  for (std::size_t i = 0; i < perturbed.size(); ++i) {
    if (perturbed[i] <= threshold) pack.push_back(i);
  }
  return pack;
}

namespace {

void check_pack_alignment(const WalkState& walk, const CumulativeLoss& cumulative) {
  if (walk.z.size() != cumulative.size() || walk.t != cumulative.rounds() + 1) {
    throw ContractError(fmt::format(
        "lead pack needs the walk one step ahead of the losses (walk t={}, losses t={})",
        walk.t, cumulative.rounds()));
  }
}

}  // namespace

std::vector<std::size_t> lead_pack(const WalkState& walk, const CumulativeLoss& cumulative) {
  check_pack_alignment(walk, cumulative);
  std::vector<double> perturbed(walk.z.size());
  for (std::size_t i = 0; i < perturbed.size(); ++i) perturbed[i] = cumulative[i] + walk.z[i];
  return lead_pack(perturbed);
}

std::size_t lead_pack_size(const WalkState& walk, const CumulativeLoss& cumulative) {
  check_pack_alignment(walk, cumulative);
  const auto L = cumulative.values();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < L.size(); ++i) best = std::min(best, L[i] + walk.z[i]);
  const double threshold = best + kLeadPackWidth;
  std::size_t count = 0;
  for (std::size_t i = 0; i < L.size(); ++i) count += (L[i] + walk.z[i] <= threshold);
  return count;
}

RwfplRun run_rwfpl(const LossMatrix& losses, RngStream& rng, const RwfplOptions& options) {
  const std::size_t n = losses.rounds();
  const std::size_t n_actions = losses.actions();
  RwfplRun run;
  RunRecord& record = run.record;
  record.actions.reserve(n);
  record.losses_suffered.reserve(n);
  if (options.track_lead_pack) record.lead_pack_sizes.reserve(n);
  run.incumbent_steps.reserve(n + 1);
  run.leader_steps.reserve(n + 1);

  WalkState walk(n_actions);
  CumulativeLoss cumulative(n_actions);
  std::optional<std::size_t> previous;
  std::vector<double> before(n_actions);

  // Rounds 1..n are played; round n+1 only extends the walks.
  for (std::size_t t = 0; t <= n; ++t) {
    std::copy(walk.z.begin(), walk.z.end(), before.begin());
    const std::size_t action = rw_step(walk, cumulative, previous, rng, options.tie);
    const std::size_t incumbent = previous.value_or(action);
    run.incumbent_steps.push_back(walk.z[incumbent] - before[incumbent]);
    run.leader_steps.push_back(walk.z[action] - before[action]);
    if (t == n) {
      run.extension_action = action;
      break;
    }
    if (options.track_lead_pack) record.lead_pack_sizes.push_back(lead_pack_size(walk, cumulative));
    record.actions.push_back(action);
    record.losses_suffered.push_back(losses.at(t, action));
    cumulative.absorb(losses.row(t));
    previous = action;
  }
  run.final_walk = walk.z;
  finalize_record(record, losses);
  return run;
}

bool PathwiseCheck::all() const {
  return std::all_of(holds.begin(), holds.end(), [](bool b) { return b; });
}

namespace {

void check_extension(const RwfplRun& run, const LossMatrix& losses) {
  const std::size_t n = losses.rounds();
  if (run.record.actions.size() != n || run.final_walk.size() != losses.actions() ||
      run.incumbent_steps.size() != n + 1 || run.leader_steps.size() != n + 1) {
    throw ContractError("run is missing the extension data for the pathwise check");
  }
}

}  // namespace

PathwiseCheck verify_pathwise_lemma1(const RwfplRun& run, const LossMatrix& losses) {
  check_extension(run, losses);
  const auto& record = run.record;
  const std::size_t n = losses.rounds();
  const auto totals = losses.totals();
  const double forecaster_loss = record.cumulative_loss();

  double incumbent_sum = 0.0;
  for (double x : run.incumbent_steps) incumbent_sum += x;
  const std::size_t switches = record.switches();
  const std::size_t extended =
      switches + (run.extension_action != record.actions[n - 1] ? 1 : 0);

  PathwiseCheck check;
  check.holds.resize(totals.size());
  check.slack.resize(totals.size());
  for (std::size_t i = 0; i < totals.size(); ++i) {
    const double lhs = forecaster_loss - totals[i];
    const double tail = run.final_walk[i] - incumbent_sum;
    const double rhs = 2.0 * static_cast<double>(extended) + tail;
    check.slack[i] = rhs - lhs;
    check.holds[i] = lhs <= rhs + kPathwiseTolerance;
    if (lhs > 2.0 * static_cast<double>(switches) + tail + kPathwiseTolerance) {
      ++check.switch_count_only_violations;
    }
  }
  return check;
}

PathwiseCheck verify_be_the_leader(const RwfplRun& run, const LossMatrix& losses) {
  check_extension(run, losses);
  const auto& actions = run.record.actions;
  const std::size_t n = losses.rounds();

  // Round t's leader is charged l_{I_t,t-1}; l_{.,0} = 0.
  double lhs = run.leader_steps[0];
  for (std::size_t t = 1; t <= n; ++t) {
    const std::size_t leader = t < n ? actions[t] : run.extension_action;
    lhs += losses.at(t - 1, leader) + run.leader_steps[t];
  }
  const auto totals = losses.totals();
  PathwiseCheck check;
  check.holds.resize(totals.size());
  check.slack.resize(totals.size());
  for (std::size_t i = 0; i < totals.size(); ++i) {
    const double rhs = totals[i] + run.final_walk[i];
    check.slack[i] = rhs - lhs;
    check.holds[i] = lhs <= rhs + kPathwiseTolerance;
  }
  return check;
}

void RandomWalkFpl::reset(std::size_t actions, std::size_t /*horizon*/) {
  walk_ = WalkState(actions);
  incumbent_.reset();
}

std::size_t RandomWalkFpl::choose(const CumulativeLoss& cumulative, RngStream& rng) {
  const std::size_t action = rw_step(walk_, cumulative, incumbent_, rng, tie_);
  incumbent_ = action;
  return action;
}

}  // namespace lazyleader
