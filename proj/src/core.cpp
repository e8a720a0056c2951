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

#include "lazyleader/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace lazyleader {

LossMatrix::LossMatrix(std::size_t rounds, std::size_t actions, std::vector<double> values)
    : rounds_(rounds), actions_(actions), values_(std::move(values)) {
  if (rounds_ == 0 || actions_ == 0) {
    throw ConfigError(fmt::format("loss matrix needs at least one round and one action "
                                  "(got {} x {})", rounds_, actions_));
  }
  if (values_.size() != rounds_ * actions_) {
    throw ConfigError(fmt::format("loss matrix declared {} x {} but holds {} entries",
                                  rounds_, actions_, values_.size()));
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const double v = values_[k];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ConfigError(fmt::format("loss at round {}, action {} is {}; losses must lie in [0,1]",
                                    k / actions_ + 1, k % actions_ + 1, v));
    }
  }
}

LossMatrix LossMatrix::zeros(std::size_t rounds, std::size_t actions) {
  return LossMatrix(rounds, actions, std::vector<double>(rounds * actions, 0.0));
}

std::vector<double> LossMatrix::totals() const {
  std::vector<double> sums(actions_, 0.0);
  for (std::size_t t = 0; t < rounds_; ++t) {
    const auto r = row(t);
    for (std::size_t i = 0; i < actions_; ++i) sums[i] += r[i];
  }
  return sums;
}

void CumulativeLoss::absorb(std::span<const double> losses) {
  if (losses.size() != values_.size()) {
    throw ContractError(fmt::format("loss row has {} entries, cumulative tracks {}",
                                    losses.size(), values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += losses[i];
  ++rounds_;
}

double CumulativeLoss::min() const {
  return *std::min_element(values_.begin(), values_.end());
}

namespace {

std::seed_seq make_seed(std::uint64_t master_seed, std::uint64_t stream_id,
                        RngStream::Family family) {
  return std::seed_seq{static_cast<std::uint32_t>(family),
                       static_cast<std::uint32_t>(master_seed),
                       static_cast<std::uint32_t>(master_seed >> 32),
                       static_cast<std::uint32_t>(stream_id),
                       static_cast<std::uint32_t>(stream_id >> 32)};
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id, Family family)
    : master_seed_(master_seed), stream_id_(stream_id) {
  auto seq = make_seed(master_seed, stream_id, family);
  engine_.seed(seq);
}

double RngStream::uniform01() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double RngStream::normal() { return normal_(engine_); }

double RngStream::exponential(double rate) {
  return std::exponential_distribution<double>(rate)(engine_);
}

std::size_t RngStream::uniform_index(std::size_t count) {
  return std::uniform_int_distribution<std::size_t>(0, count - 1)(engine_);
}

TieBreak parse_tie_break(std::string_view name) {
  if (name == "uniform") return TieBreak::kUniform;
  if (name == "incumbent") return TieBreak::kIncumbent;
  if (name == "lowest") return TieBreak::kLowestIndex;
  throw ConfigError(fmt::format("unknown tie_break '{}' (expected uniform|incumbent|lowest)",
                                name));
}

std::string_view to_string(TieBreak tie) {
  switch (tie) {
    case TieBreak::kUniform: return "uniform";
    case TieBreak::kIncumbent: return "incumbent";
    case TieBreak::kLowestIndex: return "lowest";
  }
  return "uniform";
}

std::size_t argmin(std::span<const double> values, TieBreak tie,
                   std::optional<std::size_t> incumbent, RngStream* rng) {
  std::size_t best = 0;
  std::size_t ties = 1;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) {
      best = i;
      ties = 1;
    } else if (values[i] == values[best]) {
      ++ties;
    }
  }
  if (ties == 1) return best;

  switch (tie) {
    case TieBreak::kLowestIndex:
      return best;
    case TieBreak::kIncumbent:
      if (incumbent && *incumbent < values.size() && values[*incumbent] == values[best]) {
        return *incumbent;
      }
      return best;
    case TieBreak::kUniform: {
      if (rng == nullptr) throw ContractError("uniform tie-breaking needs a random stream");
      std::size_t pick = rng->uniform_index(ties);
      for (std::size_t i = best;; ++i) {
        if (values[i] == values[best] && pick-- == 0) return i;
      }
    }
  }
  return best;
}

double RunRecord::cumulative_loss() const {
  return std::accumulate(losses_suffered.begin(), losses_suffered.end(), 0.0);
}

std::size_t RunRecord::switches() const {
  return static_cast<std::size_t>(std::count(switch_flags.begin(), switch_flags.end(), 1));
}

double RunRecord::regret() const {
  if (regret_vs.empty()) return 0.0;
  return *std::max_element(regret_vs.begin(), regret_vs.end());
}

void finalize_record(RunRecord& record, const LossMatrix& losses) {
  const std::size_t n = record.actions.size();
  if (n != losses.rounds() || record.losses_suffered.size() != n) {
    throw ContractError(fmt::format("record covers {} rounds, loss matrix has {}", n,
                                    losses.rounds()));
  }
  record.switch_flags.assign(n > 0 ? n - 1 : 0, 0);
  for (std::size_t t = 0; t + 1 < n; ++t) {
    record.switch_flags[t] = record.actions[t] != record.actions[t + 1];
  }
  const double total = record.cumulative_loss();
  const auto best = losses.totals();
  record.regret_vs.resize(best.size());
  for (std::size_t i = 0; i < best.size(); ++i) record.regret_vs[i] = total - best[i];
}

double regret(const RunRecord& record, const LossMatrix& losses) {
  if (record.actions.size() != losses.rounds()) {
    throw ContractError(fmt::format("record covers {} rounds, loss matrix has {}",
                                    record.actions.size(), losses.rounds()));
  }
  double suffered = 0.0;
  for (std::size_t t = 0; t < losses.rounds(); ++t) {
    const std::size_t a = record.actions[t];
    if (a >= losses.actions()) throw ContractError("record holds an out-of-range action");
    suffered += losses.at(t, a);
  }
  const auto totals = losses.totals();
  return suffered - *std::min_element(totals.begin(), totals.end());
}

std::size_t forecaster_round(Forecaster& forecaster, const CumulativeLoss& cumulative,
                             RngStream& rng) {
  if (cumulative.size() != forecaster.actions()) {
    throw ContractError(fmt::format("forecaster set up for {} actions, cumulative loss has {}",
                                    forecaster.actions(), cumulative.size()));
  }
  return forecaster.choose(cumulative, rng);
}

RunRecord play(Forecaster& forecaster, const LossMatrix& losses, RngStream& rng) {
  forecaster.reset(losses.actions(), losses.rounds());
  CumulativeLoss cumulative(losses.actions());
  RunRecord record;
  record.actions.reserve(losses.rounds());
  record.losses_suffered.reserve(losses.rounds());
  for (std::size_t t = 0; t < losses.rounds(); ++t) {
    const std::size_t a = forecaster_round(forecaster, cumulative, rng);
    record.actions.push_back(a);
    record.losses_suffered.push_back(losses.at(t, a));
    cumulative.absorb(losses.row(t));
  }
  finalize_record(record, losses);
  return record;
}

}  // namespace lazyleader
