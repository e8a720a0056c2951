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

// Comparison forecasters: exponentially weighted average (Hedge), FPL with
// fresh double-exponential perturbations every round, FPL with a single
// perturbation drawn at the start, and Shrinking Dartboard.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lazyleader/core.hpp"

namespace lazyleader {

// sqrt(ln N / n), the default learning rate / perturbation scale.
double default_learning_rate(std::size_t actions, std::size_t horizon);

// Exponential weights kept in log space: log w_i = -eta * L_i.
struct HedgeState {
  std::vector<double> log_weights;
  double eta = 1.0;

  HedgeState(std::size_t actions, double eta);
  void sync(const CumulativeLoss& cumulative);
  // p_i proportional to exp(log w_i), shifted by the max log-weight.
  std::vector<double> probabilities() const;
};

std::vector<double> hedge_probabilities(const CumulativeLoss& cumulative, double eta);
std::size_t hedge_step(HedgeState& state, const CumulativeLoss& cumulative, RngStream& rng);

// Draw from the two-sided exponential density (eta/2) exp(-eta |z|).
double sample_laplace(double eta, RngStream& rng);

std::size_t fpl_iid_step(const CumulativeLoss& cumulative, double eta, RngStream& rng,
                         std::optional<std::size_t> incumbent = std::nullopt);

struct StaticPerturbation {
  std::vector<double> z;
  double eta = 1.0;

  static StaticPerturbation draw(std::size_t actions, double eta, RngStream& rng);
};

std::size_t fpl_static_step(const CumulativeLoss& cumulative, const StaticPerturbation& pert,
                            std::optional<std::size_t> incumbent = std::nullopt);

// Keeps the incumbent with probability w_{inc,t} / w_{inc,t-1} and otherwise
// resamples from the current exponential-weights distribution, so the
// marginal law of the returned action is exactly the Hedge distribution.
// `state` must hold the weights of the previous round; it is synced to
// `cumulative` on return. With no incumbent (first round) this samples
// from the Hedge distribution.
std::size_t shrinking_dartboard_step(HedgeState& state, std::optional<std::size_t> incumbent,
                                     const CumulativeLoss& cumulative, RngStream& rng);

// Forecaster-interface wrappers. An unset eta resolves to
// default_learning_rate(N, n) at reset().
class HedgeForecaster final : public Forecaster {
 public:
  explicit HedgeForecaster(std::optional<double> eta = std::nullopt) : eta_(eta), state_(0, 1.0) {}
  std::string_view name() const override { return "hedge"; }
  void reset(std::size_t actions, std::size_t horizon) override;
  std::size_t actions() const override { return state_.log_weights.size(); }
  std::size_t choose(const CumulativeLoss& cumulative, RngStream& rng) override;

 private:
  std::optional<double> eta_;
  HedgeState state_;
};

class FplIidForecaster final : public Forecaster {
 public:
  explicit FplIidForecaster(std::optional<double> eta = std::nullopt) : eta_(eta) {}
  std::string_view name() const override { return "fpl_iid"; }
  void reset(std::size_t actions, std::size_t horizon) override;
  std::size_t actions() const override { return actions_; }
  std::size_t choose(const CumulativeLoss& cumulative, RngStream& rng) override;

 private:
  std::optional<double> eta_;
  double resolved_eta_ = 1.0;
  std::size_t actions_ = 0;
  std::optional<std::size_t> incumbent_;
};

class FplStaticForecaster final : public Forecaster {
 public:
  explicit FplStaticForecaster(std::optional<double> eta = std::nullopt) : eta_(eta) {}
  std::string_view name() const override { return "fpl_static"; }
  void reset(std::size_t actions, std::size_t horizon) override;
  std::size_t actions() const override { return actions_; }
  // The perturbation is drawn from `rng` on the first round.
  std::size_t choose(const CumulativeLoss& cumulative, RngStream& rng) override;

 private:
  std::optional<double> eta_;
  double resolved_eta_ = 1.0;
  std::size_t actions_ = 0;
  std::optional<StaticPerturbation> pert_;
  std::optional<std::size_t> incumbent_;
};

class ShrinkingDartboardForecaster final : public Forecaster {
 public:
  explicit ShrinkingDartboardForecaster(std::optional<double> eta = std::nullopt)
      : eta_(eta), state_(0, 1.0) {}
  std::string_view name() const override { return "shrinking_dartboard"; }
  void reset(std::size_t actions, std::size_t horizon) override;
  std::size_t actions() const override { return state_.log_weights.size(); }
  std::size_t choose(const CumulativeLoss& cumulative, RngStream& rng) override;

 private:
  std::optional<double> eta_;
  HedgeState state_;
  std::optional<std::size_t> incumbent_;
};

// Uniformly random action every round. Reference point for sanity checks.
class UniformForecaster final : public Forecaster {
 public:
  std::string_view name() const override { return "uniform"; }
  void reset(std::size_t actions, std::size_t /*horizon*/) override { actions_ = actions; }
  std::size_t actions() const override { return actions_; }
  std::size_t choose(const CumulativeLoss& /*cumulative*/, RngStream& rng) override {
    return rng.uniform_index(actions_);
  }

 private:
  std::size_t actions_ = 0;
};

}  // namespace lazyleader
