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

// Monte Carlo experiment runner. A config names one forecaster, one
// adversary and the game size. run_experiment plays R independent
// replications on streams (master_seed, r), checks the requested
// assertions and aggregates regret, switch counts and lead-pack
// frequencies on a geometric grid of rounds.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lazyleader/adversaries.hpp"
#include "lazyleader/combinatorial.hpp"
#include "lazyleader/core.hpp"
#include "lazyleader/stats.hpp"

namespace lazyleader {

struct ForecasterSpec {
  // rwfpl | hedge | fpl_iid | fpl_static | shrinking_dartboard | uniform |
  // gauss_rwfpl (combinatorial)
  std::string id = "rwfpl";
  std::optional<double> eta;
  TieBreak tie = TieBreak::kUniform;

  bool combinatorial() const { return id == "gauss_rwfpl"; }
  nlohmann::json to_json() const;
  static ForecasterSpec from_json(const nlohmann::json& j);
};

struct DecisionSetSpec {
  std::string kind = "msets";  // msets | dag
  std::size_t d = 0;
  std::size_t m = 0;
  std::string path;

  std::unique_ptr<DecisionSet> build() const;
  nlohmann::json to_json() const;
  static DecisionSetSpec from_json(const nlohmann::json& j);
};

struct OutputSpec {
  bool csv = true;
  bool json = true;
  bool svg = false;
};

struct ExperimentConfig {
  std::string name = "experiment";
  ForecasterSpec forecaster;
  AdversarySpec adversary;
  std::size_t n = 1000;
  std::size_t actions = 2;  // N; ignored for combinatorial runs
  std::optional<DecisionSetSpec> decision_set;
  std::size_t replications = 100;
  std::uint64_t master_seed = 1;
  OutputSpec outputs;
  // lemma1 | be_the_leader | thm1_regret | thm1_regret_vs_switches |
  // thm1_switches | thm2_regret | thm2_switches
  std::vector<std::string> assertions;

  bool combinatorial() const { return forecaster.combinatorial(); }
  // Throws ConfigError if ids do not resolve or sizes are invalid.
  void validate() const;
  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
};

ExperimentConfig load_config(const std::string& path);

// 1, 2, 4, ... up to n, plus n itself.
std::vector<std::size_t> geometric_grid(std::size_t n);

struct GridRow {
  std::size_t t = 0;
  double cumulative_loss = 0.0;
  double best_action_loss = 0.0;
  double regret = 0.0;
  std::size_t switches = 0;
  int lead_pack_gt1 = -1;  // -1 when the forecaster has no lead pack
};

// One line per round, for replay.
struct TraceRow {
  std::size_t t = 0;
  std::string action;  // 1-based action, or 1-based coordinates joined by ' '
  double loss = 0.0;
  bool switched = false;
  std::size_t lead_pack_size = 0;  // 0 when not tracked
  double cumulative_loss = 0.0;
  double best_action_loss = 0.0;
  double regret = 0.0;
};

struct ReplicationResult {
  std::size_t replication = 0;
  double regret = 0.0;
  double switches = 0.0;
  double cumulative_loss = 0.0;
  std::vector<GridRow> rows;
  // Pathwise checks; only filled for rwfpl with the matching assertion.
  bool lemma1_ok = true;
  bool be_the_leader_ok = true;
  std::size_t comparators_checked = 0;
  std::size_t lemma1_switch_count_only_violations = 0;
  double min_lemma1_slack = 0.0;
  double min_be_the_leader_slack = 0.0;
};

struct AssertionResult {
  std::string name;
  bool passed = true;
  std::string detail;
  std::vector<std::size_t> failed_replications;

  nlohmann::json to_json() const;
};

struct CurvePoint {
  std::size_t t = 0;
  double mean_regret = 0.0;
  double mean_switches = 0.0;
  std::optional<double> lead_pack_gt1_frequency;
  std::optional<double> regret_bound;
  std::optional<double> switch_bound;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ReplicationResult> replications;
  StatSummary regret;
  StatSummary switches;
  StatSummary regret_minus_twice_switches;
  std::vector<CurvePoint> curve;
  std::vector<AssertionResult> assertions;
  nlohmann::json bounds;
  std::size_t comparator_pairs = 0;
  std::size_t lemma1_switch_count_only_violations = 0;

  bool passed() const;
};

// Losses and decision set built once per experiment and shared read-only
// by all replications.
struct PreparedExperiment {
  ExperimentConfig config;
  LossMatrix losses;
  std::unique_ptr<DecisionSet> set;
  std::vector<std::size_t> grid;
  std::vector<double> best_loss_at_grid;  // min over actions of L_t at each grid t
};

PreparedExperiment prepare(const ExperimentConfig& config);

ReplicationResult run_replication(const PreparedExperiment& prepared, std::size_t replication,
                                  std::vector<TraceRow>* trace = nullptr);

// `threads` = 0 picks resolve_threads(std::nullopt).
ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads = 0);

// --threads flag, then LAZYLEADER_THREADS, then hardware concurrency.
unsigned resolve_threads(std::optional<unsigned> flag);

// Runs fn(r) for r in [0, count) on `threads` workers. Results must be
// written into per-index slots; the first exception is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

// Output. CSV columns: replication,t,forecaster,adversary,cumulative_loss,
// best_action_loss,regret,switches,lead_pack_gt1 (+ d,m for combinatorial).
void write_csv(std::ostream& out, const ExperimentResult& result);
nlohmann::json summary_json(const ExperimentResult& result);
void write_svg(std::ostream& out, const ExperimentResult& result);
// Writes <dir>/<name>.csv, .summary.json and .svg as enabled by outputs.
std::vector<std::string> emit(const ExperimentResult& result, const std::string& dir);

void write_trace(std::ostream& out, std::span<const TraceRow> trace);

// Lead-pack study: plays `replications` games of max(ts)+1 rounds on
// `losses` (which must have exactly that many rounds) and estimates, at
// every t in `ts`, P{|A_t| > 1} and P{I_t != I_{t+1}}. The pathwise checks
// run on every replication as well.
struct LeadPackPoint {
  std::size_t t = 0;
  std::size_t pack_gt1 = 0;
  std::size_t switch_next = 0;
  std::size_t samples = 0;
};

struct LeadPackStudy {
  std::vector<LeadPackPoint> points;
  std::size_t comparator_pairs = 0;
  std::size_t lemma1_violations = 0;
  std::size_t be_the_leader_violations = 0;
  std::size_t lemma1_switch_count_only_violations = 0;
};

LeadPackStudy lead_pack_study(const LossMatrix& losses, std::span<const std::size_t> ts,
                              std::size_t replications, std::uint64_t master_seed,
                              unsigned threads = 0);

// Parameter sweep: applies `key=value` for each value and runs the result.
// Keys: n, N, replications, master_seed, eta, d, m, p, gap_period,
// adversary_seed.
void apply_override(ExperimentConfig& config, const std::string& key, const std::string& value);
std::vector<ExperimentResult> sweep(const ExperimentConfig& config, const std::string& key,
                                    std::span<const std::string> values, unsigned threads = 0);
void write_sweep_csv(std::ostream& out, const std::string& key,
                     std::span<const std::string> values,
                     std::span<const ExperimentResult> results);

}  // namespace lazyleader
