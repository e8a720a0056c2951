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

#include "lazyleader/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace lazyleader {

double default_learning_rate(std::size_t actions, std::size_t horizon) {
  const double n = static_cast<double>(std::max<std::size_t>(horizon, 1));
  const double log_n_actions = std::log(static_cast<double>(std::max<std::size_t>(actions, 2)));
  return std::sqrt(log_n_actions / n);
}

HedgeState::HedgeState(std::size_t actions, double eta) : log_weights(actions, 0.0), eta(eta) {
  if (!(eta > 0.0)) throw ConfigError(fmt::format("hedge eta must be positive, got {}", eta));
}

void HedgeState::sync(const CumulativeLoss& cumulative) {
  if (cumulative.size() != log_weights.size()) {
    throw ContractError(fmt::format("hedge tracks {} actions, cumulative loss has {}",
                                    log_weights.size(), cumulative.size()));
  }
  for (std::size_t i = 0; i < log_weights.size(); ++i) log_weights[i] = -eta * cumulative[i];
}

std::vector<double> HedgeState::probabilities() const {
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  std::vector<double> p(log_weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(log_weights[i] - top);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

std::vector<double> hedge_probabilities(const CumulativeLoss& cumulative, double eta) {
  HedgeState state(cumulative.size(), eta);
  state.sync(cumulative);
  return state.probabilities();
}

namespace {

std::size_t sample_index(std::span<const double> p, RngStream& rng) {
  const double u = rng.uniform01();
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return i;
  }
  // u landed in the rounding gap above the final partial sum.
  for (std::size_t i = p.size(); i-- > 0;) {
    if (p[i] > 0.0) return i;
  }
  return p.size() - 1;
}

}  // namespace

std::size_t hedge_step(HedgeState& state, const CumulativeLoss& cumulative, RngStream& rng) {
  state.sync(cumulative);
  const auto p = state.probabilities();
  return sample_index(p, rng);
}

double sample_laplace(double eta, RngStream& rng) {
  const double magnitude = rng.exponential(eta);
  return rng.coin() ? magnitude : -magnitude;
}

std::size_t fpl_iid_step(const CumulativeLoss& cumulative, double eta, RngStream& rng,
                         std::optional<std::size_t> incumbent) {
  if (!(eta > 0.0)) throw ConfigError(fmt::format("fpl_iid eta must be positive, got {}", eta));
  std::vector<double> perturbed(cumulative.size());
  for (std::size_t i = 0; i < perturbed.size(); ++i) {
    perturbed[i] = cumulative[i] + sample_laplace(eta, rng);
  }
  return argmin(perturbed, TieBreak::kIncumbent, incumbent, nullptr);
}

StaticPerturbation StaticPerturbation::draw(std::size_t actions, double eta, RngStream& rng) {
  if (!(eta > 0.0)) throw ConfigError(fmt::format("fpl_static eta must be positive, got {}", eta));
  StaticPerturbation pert;
  pert.eta = eta;
  pert.z.resize(actions);
  for (double& v : pert.z) v = sample_laplace(eta, rng);
  return pert;
}

std::size_t fpl_static_step(const CumulativeLoss& cumulative, const StaticPerturbation& pert,
                            std::optional<std::size_t> incumbent) {
  if (pert.z.size() != cumulative.size()) {
    throw ContractError(fmt::format("perturbation has {} actions, cumulative loss has {}",
                                    pert.z.size(), cumulative.size()));
  }
  std::vector<double> perturbed(cumulative.size());
  for (std::size_t i = 0; i < perturbed.size(); ++i) perturbed[i] = cumulative[i] + pert.z[i];
  return argmin(perturbed, TieBreak::kIncumbent, incumbent, nullptr);
}

std::size_t shrinking_dartboard_step(HedgeState& state, std::optional<std::size_t> incumbent,
                                     const CumulativeLoss& cumulative, RngStream& rng) {
  if (!incumbent) return hedge_step(state, cumulative, rng);
  if (*incumbent >= state.log_weights.size()) {
    throw ContractError("shrinking dartboard incumbent is out of range");
  }
  const double previous = state.log_weights[*incumbent];
  state.sync(cumulative);
  // Non-negative losses make the ratio at most 1.
  const double keep = std::exp(std::min(0.0, state.log_weights[*incumbent] - previous));
  if (keep >= 1.0 || rng.uniform01() < keep) return *incumbent;
  const auto p = state.probabilities();
  return sample_index(p, rng);
}

void HedgeForecaster::reset(std::size_t actions, std::size_t horizon) {
  state_ = HedgeState(actions, eta_.value_or(default_learning_rate(actions, horizon)));
}

std::size_t HedgeForecaster::choose(const CumulativeLoss& cumulative, RngStream& rng) {
  return hedge_step(state_, cumulative, rng);
}

void FplIidForecaster::reset(std::size_t actions, std::size_t horizon) {
  actions_ = actions;
  resolved_eta_ = eta_.value_or(default_learning_rate(actions, horizon));
  incumbent_.reset();
}

std::size_t FplIidForecaster::choose(const CumulativeLoss& cumulative, RngStream& rng) {
  incumbent_ = fpl_iid_step(cumulative, resolved_eta_, rng, incumbent_);
  return *incumbent_;
}

void FplStaticForecaster::reset(std::size_t actions, std::size_t horizon) {
  actions_ = actions;
  resolved_eta_ = eta_.value_or(default_learning_rate(actions, horizon));
  pert_.reset();
  incumbent_.reset();
}

std::size_t FplStaticForecaster::choose(const CumulativeLoss& cumulative, RngStream& rng) {
  if (!pert_) pert_ = StaticPerturbation::draw(actions_, resolved_eta_, rng);
  incumbent_ = fpl_static_step(cumulative, *pert_, incumbent_);
  return *incumbent_;
}

void ShrinkingDartboardForecaster::reset(std::size_t actions, std::size_t horizon) {
  state_ = HedgeState(actions, eta_.value_or(default_learning_rate(actions, horizon)));
  incumbent_.reset();
}

std::size_t ShrinkingDartboardForecaster::choose(const CumulativeLoss& cumulative,
                                                 RngStream& rng) {
  incumbent_ = shrinking_dartboard_step(state_, incumbent_, cumulative, rng);
  return *incumbent_;
}

}  // namespace lazyleader
