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

// Shared domain types for prediction with expert advice: the oblivious loss
// matrix, running cumulative losses, seeded random streams, per-run records
// and the forecaster interface every algorithm implements.
//
// Actions are 0-based in code. Files written for humans (CSV, replay logs)
// use 1-based action numbers.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lazyleader {

// A caller broke a documented precondition (mismatched dimensions, missing
// run data).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A closed-form evaluator was called outside its mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Bad user input: config files, CLI flags, loss/DAG files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reading or writing an output file failed; the message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Losses l[t][i] in [0,1] for rounds t = 0..n-1 and actions i = 0..N-1,
// fixed before play starts. Also used for the n x d loss-vector sequences of
// the combinatorial setting.
class LossMatrix {
 public:
  LossMatrix() = default;
  // `values` is row-major, one row per round. Throws ConfigError on a size
  // mismatch or an entry outside [0,1].
  LossMatrix(std::size_t rounds, std::size_t actions, std::vector<double> values);

  static LossMatrix zeros(std::size_t rounds, std::size_t actions);

  std::size_t rounds() const { return rounds_; }
  std::size_t actions() const { return actions_; }

  double at(std::size_t round, std::size_t action) const {
    return values_[round * actions_ + action];
  }
  std::span<const double> row(std::size_t round) const {
    return {values_.data() + round * actions_, actions_};
  }

  // Column sums over all rounds, i.e. L_{i,n}.
  std::vector<double> totals() const;

 private:
  std::size_t rounds_ = 0;
  std::size_t actions_ = 0;
  std::vector<double> values_;
};

using LossVectorSequence = LossMatrix;

// L_{i,t}: per-action loss accumulated over the first t rounds.
class CumulativeLoss {
 public:
  explicit CumulativeLoss(std::size_t actions) : values_(actions, 0.0) {}

  std::size_t size() const { return values_.size(); }
  std::size_t rounds() const { return rounds_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  void absorb(std::span<const double> losses);
  double min() const;

 private:
  std::vector<double> values_;
  std::size_t rounds_ = 0;
};

// Seeded pseudo-random stream. (master_seed, stream_id, family) fully
// determines the draw sequence. The engine is std::mt19937_64 seeded through
// std::seed_seq over the family tag and both 64-bit halves split into 32-bit
// words, so distinct ids never share engine state.
class RngStream {
 public:
  enum class Family : std::uint32_t { kForecaster = 0x46u, kAdversary = 0x41u };

  RngStream(std::uint64_t master_seed, std::uint64_t stream_id,
            Family family = Family::kForecaster);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  // Fair coin; 64 flips are sliced out of each engine word.
  bool coin() {
    if (bits_left_ == 0) {
      bits_ = engine_();
      bits_left_ = 64;
    }
    const bool bit = bits_ & 1u;
    bits_ >>= 1;
    --bits_left_;
    return bit;
  }

  double uniform01();
  double normal();
  double exponential(double rate);
  std::size_t uniform_index(std::size_t count);

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::uint64_t bits_ = 0;
  int bits_left_ = 0;
  std::normal_distribution<double> normal_;
};

// How an arg min picks among exactly tied minimizers.
enum class TieBreak {
  kUniform,      // uniformly at random among minimizers
  kIncumbent,    // keep the previous action if it is a minimizer, else lowest
  kLowestIndex,  // lowest action index
};

TieBreak parse_tie_break(std::string_view name);
std::string_view to_string(TieBreak tie);

// Index of a minimizer of `values` under `tie`. kUniform draws from `rng`
// only when there is an actual tie.
std::size_t argmin(std::span<const double> values, TieBreak tie,
                   std::optional<std::size_t> incumbent, RngStream* rng);

// One trajectory of an experts game.
struct RunRecord {
  std::vector<std::size_t> actions;        // I_t, 0-based
  std::vector<double> losses_suffered;     // l_{I_t,t}
  std::vector<std::uint8_t> switch_flags;  // [t] = actions[t] != actions[t+1]
  std::vector<std::size_t> lead_pack_sizes;  // |A_t|; empty if not tracked
  std::vector<double> regret_vs;           // sum_t (l_{I_t,t} - l_{i,t})

  std::size_t rounds() const { return actions.size(); }
  double cumulative_loss() const;
  std::size_t switches() const;
  // max_i regret_vs[i]
  double regret() const;
};

// Fills switch_flags and regret_vs from actions/losses_suffered.
void finalize_record(RunRecord& record, const LossMatrix& losses);

// sum_t l_{I_t,t} - min_i L_{i,n}, recomputed from the loss matrix. May be
// negative.
double regret(const RunRecord& record, const LossMatrix& losses);

// Sequential decision maker for the experts protocol. choose() is called
// once per round with L_{.,t-1} and returns I_t.
class Forecaster {
 public:
  virtual ~Forecaster() = default;
  virtual std::string_view name() const = 0;
  // Prepares a fresh game over `actions` actions and `horizon` rounds.
  virtual void reset(std::size_t actions, std::size_t horizon) = 0;
  virtual std::size_t actions() const = 0;
  virtual std::size_t choose(const CumulativeLoss& cumulative, RngStream& rng) = 0;
};

// Advances `forecaster` by exactly one round. Throws ContractError if the
// forecaster was reset for a different number of actions.
std::size_t forecaster_round(Forecaster& forecaster, const CumulativeLoss& cumulative,
                             RngStream& rng);

// Plays the full game and returns the finalized record.
RunRecord play(Forecaster& forecaster, const LossMatrix& losses, RngStream& rng);

}  // namespace lazyleader
