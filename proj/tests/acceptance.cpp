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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "dag_oracle.hpp"
#include "test_support.hpp"
#include "lazyleader/bounds.hpp"
#include "lazyleader/harness.hpp"

using namespace lazyleader;

namespace {

constexpr std::size_t kRounds = 10000;

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
  std::printf("criterion %d %-34s %s  %s\n", id, title.c_str(), ok ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string csv_of(const ExperimentResult& r) {
  std::ostringstream out;
  write_csv(out, r);
  return out.str();
}

const AssertionResult& assertion(const ExperimentResult& r, const std::string& name) {
  for (const auto& a : r.assertions) {
    if (a.name == name) return a;
  }
  throw ContractError("assertion " + name + " was not run");
}

ExperimentConfig rwfpl_config(const AdversarySpec& adversary, std::size_t actions) {
  ExperimentConfig c;
  c.name = fmt::format("rwfpl_{}_N{}", to_string(adversary.kind), actions);
  c.forecaster.id = "rwfpl";
  c.adversary = adversary;
  c.n = kRounds;
  c.actions = actions;
  c.replications = 500;
  c.master_seed = 20260101;
  c.assertions = {"lemma1", "be_the_leader", "thm1_regret", "thm1_regret_vs_switches",
                  "thm1_switches"};
  return c;
}

}  // namespace

int main() {
  const unsigned threads = resolve_threads(std::nullopt);
  std::size_t pairs = 0;
  std::size_t pathwise_violations = 0;
  std::size_t literal_lemma_violations = 0;

  // Criteria 1 and 2.
  const auto start = std::chrono::steady_clock::now();
  const std::vector<AdversarySpec> adversaries = {
      {AdversaryKind::kZeros},
      {AdversaryKind::kBernoulli, 0.5, 100, "", 1},
      {AdversaryKind::kAlternating},
      {AdversaryKind::kDriftingLeader, 0.5, 100, "", 0},
  };
  std::vector<ExperimentConfig> thm1_configs;
  std::vector<ExperimentResult> thm1_runs;
  for (const auto& adversary : adversaries) {
    for (std::size_t actions : {2u, 10u}) {
      thm1_configs.push_back(rwfpl_config(adversary, actions));
      thm1_runs.push_back(run_experiment(thm1_configs.back(), threads));
    }
  }
  const double thm1_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  bool regret_ok = true, switches_ok = true;
  double worst_regret_ratio = 0.0, worst_switch_ratio = 0.0;
  std::string regret_failures, switch_failures;
  const ExperimentResult* zeros_two = nullptr;
  for (const auto& r : thm1_runs) {
    const auto& c = r.config;
    const bool a = assertion(r, "thm1_regret").passed;
    const bool b = assertion(r, "thm1_regret_vs_switches").passed;
    const bool s = assertion(r, "thm1_switches").passed;
    regret_ok &= a && b;
    switches_ok &= s;
    if (!(a && b)) regret_failures += " " + c.name;
    if (!s) switch_failures += " " + c.name;
    worst_regret_ratio = std::max(worst_regret_ratio, r.regret.mean / thm1_bound(c.n, c.actions));
    worst_switch_ratio =
        std::max(worst_switch_ratio, r.switches.mean / thm1_switch_bound(c.n, c.actions));
    std::printf("  %-28s regret %9.3f (se %.3f)  switches %8.3f (se %.3f)\n", c.name.c_str(),
                r.regret.mean, r.regret.std_error, r.switches.mean, r.switches.std_error);
    pairs += r.comparator_pairs;
    literal_lemma_violations += r.lemma1_switch_count_only_violations;
    for (const char* name : {"lemma1", "be_the_leader"}) {
      pathwise_violations += assertion(r, name).failed_replications.size();
    }
    if (c.adversary.kind == AdversaryKind::kZeros && c.actions == 2) zeros_two = &r;
  }
  report(1, "expected regret bound", regret_ok,
         fmt::format("8 settings, max mean/bound {:.4f}, all within 2 E C + 3 SE, {:.1f}s{}",
                     worst_regret_ratio, thm1_seconds, regret_failures));

  const double root_n = std::sqrt(static_cast<double>(kRounds));
  const double zeros_switches = zeros_two->switches.mean;
  const bool growth_ok = zeros_switches >= 0.3 * root_n;
  report(2, "switch count bound and growth", switches_ok && growth_ok,
         fmt::format("max mean/bound {:.4f}; zeros N=2 mean C_n = {:.2f} = {:.3f} sqrt(n) "
                     "(floor 0.3){}",
                     worst_switch_ratio, zeros_switches, zeros_switches / root_n,
                     switch_failures));

  // Criterion 4, which also feeds criterion 3.
  const std::vector<std::size_t> ts{16, 64, 256, 1024, 4096};
  constexpr std::size_t kLight = 100000;
  bool lead_ok = true;
  std::string lead_detail;
  double worst_pack_ratio = 0.0;
  double worst_switch_gap = -std::numeric_limits<double>::infinity();
  for (const auto& adversary :
       {AdversarySpec{AdversaryKind::kZeros}, AdversarySpec{AdversaryKind::kBernoulli, 0.5, 100, "", 2}}) {
    for (std::size_t actions : {2u, 10u}) {
      const LossMatrix losses = generate(adversary, ts.back() + 1, actions);
      const LeadPackStudy study = lead_pack_study(losses, ts, kLight, 777, threads);
      pairs += study.comparator_pairs;
      pathwise_violations += study.lemma1_violations + study.be_the_leader_violations;
      literal_lemma_violations += study.lemma1_switch_count_only_violations;
      for (const auto& p : study.points) {
        const double r = static_cast<double>(p.samples);
        const double pack = static_cast<double>(p.pack_gt1) / r;
        const double sw = static_cast<double>(p.switch_next) / r;
        const double se = std::sqrt(sw * (1.0 - sw) / r);
        const double bound = lemma2_bound(p.t, actions);
        const bool ok = pack <= bound && sw <= 0.5 * pack + 3.0 * se;
        worst_pack_ratio = std::max(worst_pack_ratio, pack / std::min(bound, 1.0));
        worst_switch_gap = std::max(worst_switch_gap, (sw - 0.5 * pack) / std::max(se, 1e-300));
        std::printf("  %-9s N=%-2zu t=%-5zu P{|A|>1} %.5f (bound %.5f)  P{switch} %.5f (half pack "
                    "%.5f)\n",
                    to_string(adversary.kind).c_str(), actions, p.t, pack, bound, sw, 0.5 * pack);
        if (!ok) {
          lead_ok = false;
          lead_detail += fmt::format(" [{} N={} t={}]", to_string(adversary.kind), actions, p.t);
        }
      }
    }
  }
  report(4, "lead pack frequencies", lead_ok,
         fmt::format("20 cells x 1e5 replications; max freq/min(bound,1) {:.4f}; max (switch - "
                     "half pack)/SE {:.2f}{}",
                     worst_pack_ratio, worst_switch_gap, lead_detail));

  report(3, "pathwise inequalities", pathwise_violations == 0 && pairs >= 1000000,
         fmt::format("{} trajectory-comparator pairs, {} violations ({} would fail with C_n alone, "
                     "not asserted)",
                     pairs, pathwise_violations, literal_lemma_violations));

  // Criterion 5.
  {
    const auto c = testing::pascal(60);
    double worst = 0.0;
    std::size_t cells = 0;
    for (int t = 0; t <= 60; ++t) {
      for (int k = -t + 4; k <= t; k += 2) {
        const int h = (t + k) / 2;
        const double exact = static_cast<double>(c[t][h - 2]) / static_cast<double>(c[t][h]);
        worst = std::max(worst, std::abs(pmf_ratio(t, k) - exact) / exact);
        ++cells;
      }
    }
    report(5, "pmf ratio closed form", worst < 1e-12,
           fmt::format("{} (t,k) pairs, max relative error {:.3g}", cells, worst));
  }

  // Criterion 6.
  {
    RngStream rng(6, 0);
    double worst = 0.0;
    std::size_t max_edges = 0;
    for (int g = 0; g < 20; ++g) {
      const DagPathSet dag = random_layered_dag(rng, 2 + g % 4, 3, 12);
      max_edges = std::max(max_edges, dag.dimension());
      std::vector<double> z(dag.dimension());
      for (int trial = 0; trial < 1000; ++trial) {
        for (double& v : z) v = 2.0 * rng.uniform01() - 1.0;
        worst = std::max(worst, std::abs(dot(dag.oracle(z), z) - testing::brute_force_shortest(dag, z)));
      }
    }
    report(6, "DAG oracle vs brute force", worst <= 1e-12 && max_edges <= 12,
           fmt::format("20 DAGs (<= {} edges) x 1000 vectors, max gap {:.3g}", max_edges, worst));
  }

  // Criterion 7.
  ExperimentConfig combo;
  combo.name = "gauss_rwfpl_msets";
  combo.forecaster.id = "gauss_rwfpl";
  combo.adversary = {AdversaryKind::kUniformVectors, 0.5, 100, "", 7};
  combo.decision_set = DecisionSetSpec{"msets", 10, 3, ""};
  combo.n = kRounds;
  combo.replications = 200;
  combo.master_seed = 7;
  combo.assertions = {"thm2_regret", "thm2_switches"};
  const ExperimentResult combo_run = run_experiment(combo, threads);
  report(7, "combinatorial regret and switches", combo_run.passed(),
         fmt::format("eta {:.4f}; mean regret {:.2f} <= {:.2f}; mean switches {:.1f} <= {:.1f}",
                     combo_run.bounds.at("eta").get<double>(), combo_run.regret.mean,
                     thm2_regret_bound_tuned(kRounds, 10, 3), combo_run.switches.mean,
                     combo_run.bounds.at("thm2_switches").get<double>()));

  // Criterion 8.
  ExperimentConfig iid = rwfpl_config({AdversaryKind::kZeros}, 2);
  iid.name = "fpl_iid_zeros";
  iid.forecaster.id = "fpl_iid";
  iid.assertions.clear();
  ExperimentConfig hedge = iid;
  hedge.name = "hedge_zeros";
  hedge.forecaster.id = "hedge";
  const ExperimentResult iid_run = run_experiment(iid, threads);
  const ExperimentResult hedge_run = run_experiment(hedge, threads);
  const double floor = 0.4 * kRounds;
  const double rw_bound = thm1_switch_bound(kRounds, 2);
  report(8, "baseline switching contrast",
         iid_run.switches.mean >= floor && hedge_run.switches.mean >= floor &&
             zeros_switches <= rw_bound,
         fmt::format("fpl_iid {:.1f}, hedge {:.1f} (floor {:.0f}); rwfpl {:.2f} (bound {:.2f})",
                     iid_run.switches.mean, hedge_run.switches.mean, floor, zeros_switches,
                     rw_bound));

  // Criterion 9: rerun with a different worker count.
  {
    const unsigned other = threads == 1 ? 3 : 1;
    bool same = true;
    std::size_t bytes = 0;
    for (std::size_t k : {1u, 6u}) {
      const std::string a = csv_of(thm1_runs[k]);
      same &= a == csv_of(run_experiment(thm1_configs[k], other));
      bytes += a.size();
    }
    const std::string c = csv_of(combo_run);
    same &= c == csv_of(run_experiment(combo, other));
    const std::string i = csv_of(iid_run);
    same &= i == csv_of(run_experiment(iid, other));
    bytes += c.size() + i.size();
    report(9, "determinism", same,
           fmt::format("4 runs repeated on {} vs {} threads, {} CSV bytes compared", threads, other,
                       bytes));
  }

  std::printf("%s\n", failures == 0 ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return failures == 0 ? 0 : 1;
}
