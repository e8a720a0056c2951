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

#include "lazyleader/combinatorial.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

namespace lazyleader {

double dot(const Incidence& v, std::span<const double> z) {
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i]) sum += z[i];
  }
  return sum;
}

namespace {

void check_cost(std::span<const double> z, std::size_t d) {
  if (z.size() != d) {
    throw ContractError(fmt::format("cost vector has {} entries, decision set has dimension {}",
                                    z.size(), d));
  }
}

}  // namespace

// ---- MSetFamily -----------------------------------------------------------

MSetFamily::MSetFamily(std::size_t d, std::size_t m) : d_(d), m_(m) {
  if (d == 0 || m == 0 || m > d) {
    throw ConfigError(fmt::format("m-set family needs 1 <= m <= d (got d={}, m={})", d, m));
  }
}

Incidence MSetFamily::oracle(std::span<const double> z) const {
  check_cost(z, d_);
  std::vector<std::size_t> order(d_);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m_), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return z[a] < z[b] || (z[a] == z[b] && a < b);
                    });
  Incidence v(d_, 0);
  for (std::size_t k = 0; k < m_; ++k) v[order[k]] = 1;
  return v;
}

std::optional<std::vector<Incidence>> MSetFamily::enumerate() const {
  // C(d, m), stopping once it passes the cap.
  double count = 1.0;
  for (std::size_t k = 0; k < m_; ++k) {
    count = count * static_cast<double>(d_ - k) / static_cast<double>(k + 1);
    if (count > static_cast<double>(kMaxEnumerated)) return std::nullopt;
  }
  std::vector<Incidence> members;
  Incidence mask(d_, 0);
  std::fill(mask.end() - static_cast<std::ptrdiff_t>(m_), mask.end(), 1);
  do {
    members.push_back(mask);
  } while (std::next_permutation(mask.begin(), mask.end()));
  return members;
}

std::string MSetFamily::describe() const { return fmt::format("msets(d={},m={})", d_, m_); }

// ---- ExplicitSet -----------------------------------------------------------

ExplicitSet::ExplicitSet(std::vector<Incidence> members) : members_(std::move(members)) {
  if (members_.empty()) throw ConfigError("explicit decision set is empty");
  const std::size_t d = members_.front().size();
  weight_ = static_cast<std::size_t>(std::count(members_.front().begin(), members_.front().end(), 1));
  for (const auto& v : members_) {
    if (v.size() != d) throw ConfigError("explicit decision set mixes dimensions");
    std::size_t ones = 0;
    for (auto bit : v) {
      if (bit > 1) throw ConfigError("explicit decision set member is not a 0/1 vector");
      ones += bit;
    }
    if (ones != weight_) throw ConfigError("explicit decision set members differ in weight");
  }
}

Incidence ExplicitSet::oracle(std::span<const double> z) const {
  check_cost(z, dimension());
  std::size_t best = 0;
  double best_value = dot(members_[0], z);
  for (std::size_t k = 1; k < members_.size(); ++k) {
    const double v = dot(members_[k], z);
    if (v < best_value) {
      best_value = v;
      best = k;
    }
  }
  return members_[best];
}

std::string ExplicitSet::describe() const {
  return fmt::format("explicit(size={},d={},m={})", members_.size(), dimension(), weight_);
}

// ---- DagPathSet -------------------------------------------------------------

DagPathSet::DagPathSet(std::size_t vertices, std::vector<DagEdge> edges, std::size_t source,
                       std::size_t sink)
    : vertices_(vertices), edges_(std::move(edges)), source_(source), sink_(sink) {
  if (vertices_ < 2) throw ConfigError("DAG needs at least two vertices");
  if (source_ >= vertices_ || sink_ >= vertices_ || source_ == sink_) {
    throw ConfigError(fmt::format("DAG endpoints u={} w={} invalid for {} vertices", source_,
                                  sink_, vertices_));
  }
  if (edges_.empty()) throw ConfigError("DAG has no edges");

  out_edges_.assign(vertices_, {});
  std::vector<std::vector<std::size_t>> in_edges(vertices_);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto [a, b] = edges_[e];
    if (a >= vertices_ || b >= vertices_) {
      throw ConfigError(fmt::format("edge {} ({} -> {}) references a missing vertex", e + 1, a, b));
    }
    if (a == b) throw ConfigError(fmt::format("edge {} is a self-loop on vertex {}", e + 1, a));
    out_edges_[a].push_back(e);
    in_edges[b].push_back(e);
  }

  // Kahn's algorithm.
  std::vector<std::size_t> indegree(vertices_);
  for (std::size_t v = 0; v < vertices_; ++v) indegree[v] = in_edges[v].size();
  std::vector<std::size_t> ready;
  for (std::size_t v = vertices_; v-- > 0;) {
    if (indegree[v] == 0) ready.push_back(v);
  }
  while (!ready.empty()) {
    const std::size_t v = ready.back();
    ready.pop_back();
    topo_order_.push_back(v);
    for (std::size_t e : out_edges_[v]) {
      if (--indegree[edges_[e].target] == 0) ready.push_back(edges_[e].target);
    }
  }
  if (topo_order_.size() != vertices_) throw ConfigError("graph contains a directed cycle");

  std::vector<bool> from_source(vertices_, false);
  std::vector<bool> to_sink(vertices_, false);
  from_source[source_] = true;
  for (std::size_t v : topo_order_) {
    if (!from_source[v]) continue;
    for (std::size_t e : out_edges_[v]) from_source[edges_[e].target] = true;
  }
  to_sink[sink_] = true;
  for (auto it = topo_order_.rbegin(); it != topo_order_.rend(); ++it) {
    for (std::size_t e : out_edges_[*it]) {
      if (to_sink[edges_[e].target]) to_sink[*it] = true;
    }
  }
  if (!from_source[sink_]) {
    throw ConfigError(fmt::format("no path from u={} to w={}", source_, sink_));
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (!from_source[edges_[e].source] || !to_sink[edges_[e].target]) {
      throw ConfigError(fmt::format("edge {} ({} -> {}) lies on no u -> w path", e + 1,
                                    edges_[e].source, edges_[e].target));
    }
  }

  // Every vertex on a u -> w path must sit at a single depth.
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> depth(vertices_, kUnset);
  depth[source_] = 0;
  for (std::size_t v : topo_order_) {
    if (depth[v] == kUnset) continue;
    for (std::size_t e : out_edges_[v]) {
      const std::size_t b = edges_[e].target;
      if (depth[b] == kUnset) {
        depth[b] = depth[v] + 1;
      } else if (depth[b] != depth[v] + 1) {
        throw ConfigError(fmt::format(
            "u -> w paths have different lengths (vertex {} reached at depths {} and {}); "
            "only layered DAGs are supported",
            b, depth[b], depth[v] + 1));
      }
    }
  }
  path_length_ = depth[sink_];
}

Incidence DagPathSet::oracle(std::span<const double> z) const {
  check_cost(z, edges_.size());
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<double> dist(vertices_, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> via(vertices_, kNone);
  dist[source_] = 0.0;
  for (std::size_t v : topo_order_) {
    if (!std::isfinite(dist[v])) continue;
    for (std::size_t e : out_edges_[v]) {
      const std::size_t b = edges_[e].target;
      const double candidate = dist[v] + z[e];
      if (candidate < dist[b] || (candidate == dist[b] && e < via[b])) {
        dist[b] = candidate;
        via[b] = e;
      }
    }
  }
  Incidence path(edges_.size(), 0);
  for (std::size_t v = sink_; v != source_;) {
    const std::size_t e = via[v];
    path[e] = 1;
    v = edges_[e].source;
  }
  return path;
}

std::optional<std::vector<Incidence>> DagPathSet::enumerate() const {
  std::vector<Incidence> paths;
  Incidence current(edges_.size(), 0);
  bool overflow = false;
  auto walk = [&](auto&& self, std::size_t v) -> void {
    if (overflow) return;
    if (v == sink_) {
      if (paths.size() == kMaxEnumerated) {
        overflow = true;
        return;
      }
      paths.push_back(current);
      return;
    }
    for (std::size_t e : out_edges_[v]) {
      current[e] = 1;
      self(self, edges_[e].target);
      current[e] = 0;
    }
  };
  walk(walk, source_);
  if (overflow) return std::nullopt;
  return paths;
}

std::string DagPathSet::describe() const {
  return fmt::format("dag(V={},E={},u={},w={},m={})", vertices_, edges_.size(), source_, sink_,
                     path_length_);
}

namespace {

bool next_data_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

DagPathSet parse_dag(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_data_line(in, line, line_no)) throw ConfigError("DAG file is empty");
  std::istringstream header(line);
  long long vertices = -1, n_edges = -1, u = -1, w = -1;
  if (!(header >> vertices >> n_edges >> u >> w) || vertices < 0 || n_edges < 0 || u < 0 ||
      w < 0) {
    throw ConfigError(fmt::format("DAG header (line {}) must be `vertices E u w`", line_no));
  }
  std::vector<DagEdge> edges;
  edges.reserve(static_cast<std::size_t>(n_edges));
  for (long long k = 0; k < n_edges; ++k) {
    if (!next_data_line(in, line, line_no)) {
      throw ConfigError(fmt::format("DAG file ends after {} of {} edges", k, n_edges));
    }
    std::istringstream row(line);
    long long a = -1, b = -1;
    std::string extra;
    if (!(row >> a >> b) || a < 0 || b < 0 || (row >> extra)) {
      throw ConfigError(fmt::format("DAG edge on line {} must be `src dst`", line_no));
    }
    edges.push_back({static_cast<std::size_t>(a), static_cast<std::size_t>(b)});
  }
  if (next_data_line(in, line, line_no)) {
    throw ConfigError(fmt::format("DAG file has more than {} edges (line {})", n_edges, line_no));
  }
  return DagPathSet(static_cast<std::size_t>(vertices), std::move(edges),
                    static_cast<std::size_t>(u), static_cast<std::size_t>(w));
}

DagPathSet load_dag(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open DAG file '{}'", path));
  try {
    return parse_dag(in);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
}

void write_dag(std::ostream& out, const DagPathSet& dag) {
  out << dag.vertices() << ' ' << dag.edges().size() << ' ' << dag.source() << ' ' << dag.sink()
      << '\n';
  for (const auto& e : dag.edges()) out << e.source << ' ' << e.target << '\n';
}

DagPathSet random_layered_dag(RngStream& rng, std::size_t layers, std::size_t max_width,
                              std::size_t max_edges) {
  if (layers == 0 || max_width == 0) throw ConfigError("layered DAG needs layers, width >= 1");
  if (max_edges < layers) throw ConfigError("edge budget below the path length");
  for (;;) {
    // Layer 0 is {u}, layer `layers` is {w}.
    std::vector<std::vector<std::size_t>> layer(layers + 1);
    std::size_t next_vertex = 0;
    layer[0].push_back(next_vertex++);
    for (std::size_t k = 1; k < layers; ++k) {
      const std::size_t width = 1 + rng.uniform_index(max_width);
      for (std::size_t j = 0; j < width; ++j) layer[k].push_back(next_vertex++);
    }
    layer[layers].push_back(next_vertex++);

    std::vector<DagEdge> edges;
    for (std::size_t k = 0; k < layers; ++k) {
      std::vector<bool> has_out(layer[k].size(), false);
      std::vector<bool> has_in(layer[k + 1].size(), false);
      for (std::size_t a = 0; a < layer[k].size(); ++a) {
        for (std::size_t b = 0; b < layer[k + 1].size(); ++b) {
          if (rng.coin()) {
            edges.push_back({layer[k][a], layer[k + 1][b]});
            has_out[a] = has_in[b] = true;
          }
        }
      }
      for (std::size_t a = 0; a < layer[k].size(); ++a) {
        if (has_out[a]) continue;
        const std::size_t b = rng.uniform_index(layer[k + 1].size());
        edges.push_back({layer[k][a], layer[k + 1][b]});
        has_in[b] = true;
      }
      for (std::size_t b = 0; b < layer[k + 1].size(); ++b) {
        if (has_in[b]) continue;
        edges.push_back({layer[k][rng.uniform_index(layer[k].size())], layer[k + 1][b]});
      }
    }
    if (edges.size() > max_edges) continue;
    for (std::size_t i = edges.size(); i > 1; --i) {
      std::swap(edges[i - 1], edges[rng.uniform_index(i)]);
    }
    return DagPathSet(next_vertex, std::move(edges), layer[0][0], layer[layers][0]);
  }
}

// ---- Gaussian random-walk forecaster -----------------------------------------

GaussianWalkState::GaussianWalkState(std::size_t d, double eta) : z(d, 0.0), eta(eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw ConfigError(fmt::format("Gaussian walk needs a positive finite eta (got {})", eta));
  }
}

Incidence gauss_rw_step(GaussianWalkState& walk, std::span<const double> cumulative,
                        const DecisionSet& set, RngStream& rng, const Incidence* incumbent) {
  const std::size_t d = set.dimension();
  if (walk.z.size() != d || cumulative.size() != d) {
    throw ContractError(fmt::format("walk ({}), losses ({}) and decision set ({}) disagree on d",
                                    walk.z.size(), cumulative.size(), d));
  }
  std::vector<double> perturbed(d);
  for (std::size_t i = 0; i < d; ++i) {
    walk.z[i] += walk.eta * rng.normal();
    perturbed[i] = cumulative[i] + walk.z[i];
  }
  ++walk.t;
  Incidence choice = set.oracle(perturbed);
  if (incumbent != nullptr && *incumbent != choice &&
      dot(*incumbent, perturbed) == dot(choice, perturbed)) {
    return *incumbent;
  }
  return choice;
}

double ComboRunRecord::cumulative_loss() const {
  return std::accumulate(losses_suffered.begin(), losses_suffered.end(), 0.0);
}

std::size_t ComboRunRecord::switches() const {
  return static_cast<std::size_t>(std::count(switch_flags.begin(), switch_flags.end(), 1));
}

ComboRunRecord run_combinatorial(const LossVectorSequence& losses, const DecisionSet& set,
                                 double eta, RngStream& rng) {
  const std::size_t d = set.dimension();
  if (losses.actions() != d) {
    throw ContractError(fmt::format("loss vectors have {} coordinates, decision set has {}",
                                    losses.actions(), d));
  }
  const std::size_t n = losses.rounds();
  ComboRunRecord record;
  record.d = d;
  record.m = set.weight();
  record.actions.reserve(n);
  record.losses_suffered.reserve(n);

  GaussianWalkState walk(d, eta);
  std::vector<double> cumulative(d, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    const Incidence* incumbent = t > 0 ? &record.actions.back() : nullptr;
    Incidence choice = gauss_rw_step(walk, cumulative, set, rng, incumbent);
    const auto row = losses.row(t);
    record.losses_suffered.push_back(dot(choice, row));
    record.actions.push_back(std::move(choice));
    for (std::size_t i = 0; i < d; ++i) cumulative[i] += row[i];
  }

  record.switch_flags.assign(n > 0 ? n - 1 : 0, 0);
  for (std::size_t t = 0; t + 1 < n; ++t) {
    record.switch_flags[t] = record.actions[t] != record.actions[t + 1];
  }
  record.best_loss = dot(set.oracle(cumulative), cumulative);
  if (auto members = set.enumerate()) {
    const double total = record.cumulative_loss();
    record.regret_vs.reserve(members->size());
    for (const auto& v : *members) record.regret_vs.push_back(total - dot(v, cumulative));
  }
  return record;
}

}  // namespace lazyleader
