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

// Oblivious loss generators. Every generator finishes the whole n x N (or
// n x d) matrix before any forecaster runs. Stochastic kinds draw from the
// adversary stream family, so changing forecaster seeds never changes the
// losses.

#include <cstddef>
#include <cstdint>
#include <istream>
#include <string>

#include <nlohmann/json.hpp>

#include "lazyleader/core.hpp"

namespace lazyleader {

enum class AdversaryKind {
  kZeros,
  kBernoulli,       // i.i.d. {0,1} entries with P{1} = p
  kDriftingLeader,  // favoured action alternates between actions 1 and 2
  kAlternating,     // action 1: 0,1,0,1,...; every other action: 1,0,1,0,...
  kUniformVectors,  // i.i.d. uniform [0,1] entries
  kCustomFile,      // CSV file
};

struct AdversarySpec {
  AdversaryKind kind = AdversaryKind::kZeros;
  double p = 0.5;
  std::size_t gap_period = 100;
  std::string path;
  std::uint64_t seed = 0;

  std::string label() const;
  nlohmann::json to_json() const;
  static AdversarySpec from_json(const nlohmann::json& j);
};

AdversaryKind parse_adversary_kind(const std::string& name);
std::string to_string(AdversaryKind kind);

// Builds the loss matrix for `rounds` rounds over `width` actions (or
// coordinates). Deterministic given `spec`. For custom_file the CSV must hold
// exactly `rounds` rows of `width` columns.
LossMatrix generate(const AdversarySpec& spec, std::size_t rounds, std::size_t width);

// Comma-separated losses, one row per round. A first line that does not
// parse as numbers is treated as a header.
LossMatrix parse_loss_csv(std::istream& in);
LossMatrix load_loss_csv(const std::string& path);

}  // namespace lazyleader
