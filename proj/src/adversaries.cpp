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

#include "lazyleader/adversaries.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include <fmt/format.h>

namespace lazyleader {

AdversaryKind parse_adversary_kind(const std::string& name) {
  if (name == "zeros") return AdversaryKind::kZeros;
  if (name == "bernoulli") return AdversaryKind::kBernoulli;
  if (name == "drifting_leader") return AdversaryKind::kDriftingLeader;
  if (name == "alternating") return AdversaryKind::kAlternating;
  if (name == "uniform_vectors") return AdversaryKind::kUniformVectors;
  if (name == "custom_file") return AdversaryKind::kCustomFile;
  throw ConfigError(fmt::format(
      "unknown adversary kind '{}' (expected zeros|bernoulli|drifting_leader|alternating|"
      "uniform_vectors|custom_file)",
      name));
}

std::string to_string(AdversaryKind kind) {
  switch (kind) {
    case AdversaryKind::kZeros: return "zeros";
    case AdversaryKind::kBernoulli: return "bernoulli";
    case AdversaryKind::kDriftingLeader: return "drifting_leader";
    case AdversaryKind::kAlternating: return "alternating";
    case AdversaryKind::kUniformVectors: return "uniform_vectors";
    case AdversaryKind::kCustomFile: return "custom_file";
  }
  return "zeros";
}

std::string AdversarySpec::label() const {
  switch (kind) {
    case AdversaryKind::kBernoulli: return fmt::format("bernoulli({})", p);
    case AdversaryKind::kDriftingLeader: return fmt::format("drifting_leader({})", gap_period);
    default: return to_string(kind);
  }
}

nlohmann::json AdversarySpec::to_json() const {
  nlohmann::json j;
  j["kind"] = to_string(kind);
  if (kind == AdversaryKind::kBernoulli) j["p"] = p;
  if (kind == AdversaryKind::kDriftingLeader) j["gap_period"] = gap_period;
  if (kind == AdversaryKind::kCustomFile) j["path"] = path;
  j["seed"] = seed;
  return j;
}

AdversarySpec AdversarySpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("adversary must be a JSON object");
  static const char* kKnown[] = {"kind", "p", "gap_period", "path", "seed"};
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : kKnown) known |= key == k;
    if (!known) throw ConfigError(fmt::format("unknown adversary field '{}'", key));
  }
  AdversarySpec spec;
  try {
    spec.kind = parse_adversary_kind(j.at("kind").get<std::string>());
    spec.p = j.value("p", 0.5);
    spec.gap_period = j.value("gap_period", std::size_t{100});
    spec.path = j.value("path", std::string{});
    spec.seed = j.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("bad adversary spec: {}", e.what()));
  }
  if (!(spec.p >= 0.0 && spec.p <= 1.0)) {
    throw ConfigError(fmt::format("bernoulli p must lie in [0,1] (got {})", spec.p));
  }
  if (spec.gap_period == 0) throw ConfigError("drifting_leader gap_period must be positive");
  if (spec.kind == AdversaryKind::kCustomFile && spec.path.empty()) {
    throw ConfigError("custom_file adversary needs a path");
  }
  return spec;
}

LossMatrix generate(const AdversarySpec& spec, std::size_t rounds, std::size_t width) {
  if (rounds == 0 || width == 0) {
    throw ConfigError(fmt::format("adversary needs positive dimensions (got {} x {})", rounds,
                                  width));
  }
  std::vector<double> values(rounds * width, 0.0);
  RngStream rng(spec.seed, 0, RngStream::Family::kAdversary);
  auto at = [&](std::size_t t, std::size_t i) -> double& { return values[t * width + i]; };

  switch (spec.kind) {
    case AdversaryKind::kZeros:
      break;
    case AdversaryKind::kBernoulli:
      for (double& v : values) v = rng.uniform01() < spec.p ? 1.0 : 0.0;
      break;
    case AdversaryKind::kUniformVectors:
      for (double& v : values) v = rng.uniform01();
      break;
    case AdversaryKind::kAlternating:
      for (std::size_t t = 0; t < rounds; ++t) {
        const double first = t % 2 == 0 ? 0.0 : 1.0;
        at(t, 0) = first;
        for (std::size_t i = 1; i < width; ++i) at(t, i) = 1.0 - first;
      }
      break;
    case AdversaryKind::kDriftingLeader:
      if (spec.gap_period == 0) throw ConfigError("drifting_leader gap_period must be positive");
      for (std::size_t t = 0; t < rounds; ++t) {
        const std::size_t favoured = (t / spec.gap_period) % std::min<std::size_t>(width, 2);
        for (std::size_t i = 0; i < width; ++i) at(t, i) = i == favoured ? 0.0 : 1.0;
      }
      break;
    case AdversaryKind::kCustomFile: {
      LossMatrix loaded = load_loss_csv(spec.path);
      if (loaded.rounds() != rounds || loaded.actions() != width) {
        throw ConfigError(fmt::format("{} holds a {} x {} matrix, config expects {} x {}",
                                      spec.path, loaded.rounds(), loaded.actions(), rounds,
                                      width));
      }
      return loaded;
    }
  }
  return LossMatrix(rounds, width, std::move(values));
}

namespace {

bool parse_row(const std::string& line, std::vector<double>& row) {
  row.clear();
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t end = line.find(',', pos);
    if (end == std::string::npos) end = line.size();
    std::size_t b = pos, e = end;
    while (b < e && (line[b] == ' ' || line[b] == '\t')) ++b;
    while (e > b && (line[e - 1] == ' ' || line[e - 1] == '\t' || line[e - 1] == '\r')) --e;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(line.data() + b, line.data() + e, v);
    if (ec != std::errc() || ptr != line.data() + e || b == e) return false;
    row.push_back(v);
    pos = end + 1;
  }
  return true;
}

}  // namespace

LossMatrix parse_loss_csv(std::istream& in) {
  std::string line;
  std::vector<double> values;
  std::vector<double> row;
  std::size_t width = 0;
  std::size_t rounds = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!parse_row(line, row)) {
      if (rounds == 0 && line_no == 1) continue;  // header
      throw ConfigError(fmt::format("loss CSV line {} is not a list of numbers", line_no));
    }
    if (width == 0) width = row.size();
    if (row.size() != width) {
      throw ConfigError(fmt::format("loss CSV line {} has {} columns, expected {}", line_no,
                                    row.size(), width));
    }
    values.insert(values.end(), row.begin(), row.end());
    ++rounds;
  }
  if (rounds == 0) throw ConfigError("loss CSV holds no rows");
  return LossMatrix(rounds, width, std::move(values));
}

LossMatrix load_loss_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open loss file '{}'", path));
  try {
    return parse_loss_csv(in);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
}

}  // namespace lazyleader
