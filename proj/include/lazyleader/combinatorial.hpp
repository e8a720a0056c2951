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

// Online combinatorial optimization: actions are 0/1 incidence vectors with
// exactly m ones out of d coordinates, losses are vectors in [0,1]^d, and
// the forecaster perturbs each coordinate's cumulative loss with its own
// Gaussian random walk before calling an exact linear-optimization oracle.

#include <cstddef>
#include <cstdint>
#include <istream>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lazyleader/bounds.hpp"  // default_eta
#include "lazyleader/core.hpp"

namespace lazyleader {

using Incidence = std::vector<std::uint8_t>;

double dot(const Incidence& v, std::span<const double> z);

// Finite family S of incidence vectors of common weight m, queried through
// oracle(z) = arg min_{v in S} v.z.
class DecisionSet {
 public:
  virtual ~DecisionSet() = default;
  virtual std::size_t dimension() const = 0;
  virtual std::size_t weight() const = 0;
  virtual Incidence oracle(std::span<const double> z) const = 0;
  // Full listing when the family is small enough to enumerate.
  virtual std::optional<std::vector<Incidence>> enumerate() const { return std::nullopt; }
  virtual std::string describe() const = 0;
};

// All m-subsets of d coordinates. The oracle keeps the m smallest entries,
// ties going to lower coordinates.
class MSetFamily final : public DecisionSet {
 public:
  MSetFamily(std::size_t d, std::size_t m);
  std::size_t dimension() const override { return d_; }
  std::size_t weight() const override { return m_; }
  Incidence oracle(std::span<const double> z) const override;
  // Available while C(d, m) <= kMaxEnumerated.
  std::optional<std::vector<Incidence>> enumerate() const override;
  std::string describe() const override;

  static constexpr std::size_t kMaxEnumerated = 1u << 16;

 private:
  std::size_t d_;
  std::size_t m_;
};

// An explicit list of vectors; the oracle scans it, first minimizer wins.
class ExplicitSet final : public DecisionSet {
 public:
  explicit ExplicitSet(std::vector<Incidence> members);
  std::size_t dimension() const override { return members_.front().size(); }
  std::size_t weight() const override { return weight_; }
  Incidence oracle(std::span<const double> z) const override;
  std::optional<std::vector<Incidence>> enumerate() const override { return members_; }
  std::string describe() const override;

 private:
  std::vector<Incidence> members_;
  std::size_t weight_ = 0;
};

struct DagEdge {
  std::size_t source;
  std::size_t target;
};

// u -> w paths of a directed acyclic graph, one coordinate per edge. The
// constructor rejects cycles, edges that lie on no u -> w path, and graphs
// whose u -> w paths differ in length.
class DagPathSet final : public DecisionSet {
 public:
  DagPathSet(std::size_t vertices, std::vector<DagEdge> edges, std::size_t source,
             std::size_t sink);

  std::size_t dimension() const override { return edges_.size(); }
  std::size_t weight() const override { return path_length_; }
  // Shortest path by dynamic programming in topological order; negative
  // weights are fine. Among equal-cost relaxations the smaller edge index
  // wins.
  Incidence oracle(std::span<const double> z) const override;
  // Depth-first listing of every u -> w path, capped at kMaxEnumerated.
  std::optional<std::vector<Incidence>> enumerate() const override;
  std::string describe() const override;

  std::size_t vertices() const { return vertices_; }
  const std::vector<DagEdge>& edges() const { return edges_; }
  std::size_t source() const { return source_; }
  std::size_t sink() const { return sink_; }

  static constexpr std::size_t kMaxEnumerated = 1u << 16;

 private:
  std::size_t vertices_;
  std::vector<DagEdge> edges_;
  std::size_t source_;
  std::size_t sink_;
  std::size_t path_length_ = 0;
  std::vector<std::size_t> topo_order_;
  // Outgoing edge indices per vertex, ascending.
  std::vector<std::vector<std::size_t>> out_edges_;
};

// Text format: a header line `V E u w`, then E lines `src dst` (0-based
// vertices; edge i is the i-th line). Blank lines and lines starting with
// '#' are skipped.
DagPathSet parse_dag(std::istream& in);
DagPathSet load_dag(const std::string& path);
void write_dag(std::ostream& out, const DagPathSet& dag);

// Layered DAG with `layers` edge layers between u and w, 1..max_width
// vertices per inner layer and at most `max_edges` edges. Every u -> w path
// has exactly `layers` edges.
DagPathSet random_layered_dag(RngStream& rng, std::size_t layers, std::size_t max_width,
                              std::size_t max_edges);

// Z_{.,t} for the d coordinates; each step adds an independent N(0, eta^2).
struct GaussianWalkState {
  std::vector<double> z;
  std::size_t t = 0;
  double eta = 1.0;

  GaussianWalkState(std::size_t d, double eta);
};

// Plays round walk.t + 1: advances the walk and returns
// oracle(L_{t-1} + Z_t). If the incumbent attains exactly the same
// objective value it is kept instead.
Incidence gauss_rw_step(GaussianWalkState& walk, std::span<const double> cumulative,
                        const DecisionSet& set, RngStream& rng,
                        const Incidence* incumbent = nullptr);

struct ComboRunRecord {
  std::vector<Incidence> actions;         // V_t
  std::vector<double> losses_suffered;    // V_t . l_t
  std::vector<std::uint8_t> switch_flags; // [t] = V_t != V_{t+1}
  std::vector<double> regret_vs;          // per enumerated member; empty if too large
  double best_loss = 0.0;                 // min_{v in S} v . L_n
  std::size_t d = 0;
  std::size_t m = 0;

  std::size_t rounds() const { return actions.size(); }
  double cumulative_loss() const;
  std::size_t switches() const;
  double regret() const { return cumulative_loss() - best_loss; }
};

ComboRunRecord run_combinatorial(const LossVectorSequence& losses, const DecisionSet& set,
                                 double eta, RngStream& rng);

}  // namespace lazyleader
