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

#include "lazyleader/cli.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "lazyleader/bounds.hpp"
#include "lazyleader/combinatorial.hpp"
#include "lazyleader/harness.hpp"

namespace lazyleader {

namespace {

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "results";
};

struct BoundsArgs {
  std::string which;
  std::optional<std::size_t> n;
  std::optional<std::size_t> actions;
  std::optional<std::size_t> d;
  std::optional<std::size_t> m;
  std::optional<double> eta;
  std::optional<long long> k;
};

struct OracleArgs {
  std::string dag;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
};

struct ReplayArgs {
  std::string config;
  std::size_t replication = 0;
  std::optional<std::uint64_t> seed;
};

struct SweepArgs {
  std::string config;
  std::string vary;
  std::optional<std::string> out_dir;
};

void report_failures(const ExperimentResult& result, std::ostream& err) {
  for (const auto& a : result.assertions) {
    if (a.passed) continue;
    err << fmt::format("assertion {} failed: {}\n", a.name, a.detail);
    const std::size_t shown = std::min<std::size_t>(a.failed_replications.size(), 10);
    for (std::size_t k = 0; k < shown; ++k) {
      err << fmt::format("  replay with master_seed={} replication={}\n",
                         result.config.master_seed, a.failed_replications[k]);
    }
  }
}

template <typename T>
T required(const std::optional<T>& v, const char* flag, const std::string& which) {
  if (!v) throw ConfigError(fmt::format("bounds --which {} needs {}", which, flag));
  return *v;
}

int do_run(const RunArgs& args, unsigned threads, std::ostream& out, std::ostream& err) {
  ExperimentConfig config = load_config(args.config);
  if (args.seed) config.master_seed = *args.seed;
  const ExperimentResult result = run_experiment(config, threads);
  for (const auto& path : emit(result, args.out_dir)) err << "wrote " << path << '\n';
  out << summary_json(result).dump(2) << '\n';
  if (!result.passed()) {
    report_failures(result, err);
    return kExitAssertion;
  }
  return kExitOk;
}

int do_bounds(const BoundsArgs& args, std::ostream& out) {
  BoundReport report;
  report.name = args.which;
  const std::string& w = args.which;
  if (w == "thm1" || w == "thm1_switches" || w == "lower") {
    const std::size_t n = required(args.n, "--n", w);
    const std::size_t actions = required(args.actions, "--N", w);
    report.parameters = {{"n", static_cast<double>(n)}, {"N", static_cast<double>(actions)}};
    report.value = w == "thm1"            ? thm1_bound(n, actions)
                   : w == "thm1_switches" ? thm1_switch_bound(n, actions)
                                          : lower_bound(n, actions);
  } else if (w == "lemma2") {
    const std::size_t t = required(args.n, "--n", w);
    const std::size_t actions = required(args.actions, "--N", w);
    report.parameters = {{"t", static_cast<double>(t)}, {"N", static_cast<double>(actions)}};
    report.value = lemma2_bound(t, actions);
  } else if (w == "thm2" || w == "thm2_switches") {
    const std::size_t n = required(args.n, "--n", w);
    const std::size_t d = required(args.d, "--d", w);
    const std::size_t m = required(args.m, "--m", w);
    report.parameters = {{"n", static_cast<double>(n)},
                         {"d", static_cast<double>(d)},
                         {"m", static_cast<double>(m)}};
    const double eta = args.eta.value_or(default_eta(d));
    report.parameters["eta"] = eta;
    if (w == "thm2") {
      report.value = args.eta ? thm2_regret_bound(n, d, m, eta) : thm2_regret_bound_tuned(n, d, m);
    } else {
      report.value = thm2_switch_bound(n, d, m, eta);
    }
  } else if (w == "pmf_ratio") {
    const std::size_t t = required(args.n, "--n", w);
    const long long k = required(args.k, "--k", w);
    report.parameters = {{"t", static_cast<double>(t)}, {"k", static_cast<double>(k)}};
    report.value = pmf_ratio(static_cast<long long>(t), k);
  }
  out << report.to_json().dump(2) << '\n';
  return kExitOk;
}

int do_oracle_check(const OracleArgs& args, std::ostream& out, std::ostream& err) {
  const DagPathSet dag = load_dag(args.dag);
  const auto paths = dag.enumerate();
  if (!paths) {
    throw ConfigError(fmt::format("{} has too many paths to enumerate", args.dag));
  }
  RngStream rng(args.seed, 0);
  std::vector<double> z(dag.dimension());
  std::size_t mismatches = 0;
  double max_gap = 0.0;
  for (std::size_t trial = 0; trial < args.trials; ++trial) {
    for (double& v : z) v = 2.0 * rng.uniform01() - 1.0;
    const double dp = dot(dag.oracle(z), z);
    double brute = dot(paths->front(), z);
    for (const auto& p : *paths) brute = std::min(brute, dot(p, z));
    const double gap = std::abs(dp - brute);
    max_gap = std::max(max_gap, gap);
    if (gap > 1e-12) {
      ++mismatches;
      err << fmt::format("trial {}: oracle {} vs enumeration {}\n", trial, dp, brute);
    }
  }
  nlohmann::json j = {{"dag", args.dag},         {"edges", dag.dimension()},
                      {"path_length", dag.weight()}, {"paths", paths->size()},
                      {"trials", args.trials},   {"seed", args.seed},
                      {"mismatches", mismatches}, {"max_abs_gap", max_gap}};
  out << j.dump(2) << '\n';
  return mismatches == 0 ? kExitOk : kExitAssertion;
}

int do_replay(const ReplayArgs& args, std::ostream& out, std::ostream& err) {
  ExperimentConfig config = load_config(args.config);
  if (args.seed) config.master_seed = *args.seed;
  if (args.replication >= config.replications) {
    err << fmt::format("note: replication {} is beyond the configured {} replications\n",
                       args.replication, config.replications);
  }
  const PreparedExperiment prepared = prepare(config);
  std::vector<TraceRow> trace;
  const ReplicationResult rep = run_replication(prepared, args.replication, &trace);
  write_trace(out, trace);
  err << fmt::format("replication {} (master_seed {}): regret {} switches {}\n", args.replication,
                     config.master_seed, rep.regret, rep.switches);
  bool ok = true;
  for (const auto& name : config.assertions) {
    if (name == "lemma1" && !rep.lemma1_ok) {
      err << fmt::format("lemma1 violated, min slack {}\n", rep.min_lemma1_slack);
      ok = false;
    }
    if (name == "be_the_leader" && !rep.be_the_leader_ok) {
      err << fmt::format("be_the_leader violated, min slack {}\n", rep.min_be_the_leader_slack);
      ok = false;
    }
  }
  return ok ? kExitOk : kExitAssertion;
}

int do_sweep(const SweepArgs& args, unsigned threads, std::ostream& out, std::ostream& err) {
  const auto eq = args.vary.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == args.vary.size()) {
    throw ConfigError(fmt::format("--vary expects key=v1,v2,... (got '{}')", args.vary));
  }
  const std::string key = args.vary.substr(0, eq);
  std::vector<std::string> values;
  std::string rest = args.vary.substr(eq + 1);
  for (std::size_t pos = 0; pos <= rest.size();) {
    std::size_t end = rest.find(',', pos);
    if (end == std::string::npos) end = rest.size();
    if (end == pos) throw ConfigError(fmt::format("empty value in --vary '{}'", args.vary));
    values.push_back(rest.substr(pos, end - pos));
    pos = end + 1;
  }
  const ExperimentConfig config = load_config(args.config);
  const std::vector<ExperimentResult> results = sweep(config, key, values, threads);
  write_sweep_csv(out, key, values, results);
  bool ok = true;
  for (const auto& r : results) {
    if (args.out_dir) {
      for (const auto& path : emit(r, *args.out_dir)) err << "wrote " << path << '\n';
    }
    if (!r.passed()) {
      report_failures(r, err);
      ok = false;
    }
  }
  return ok ? kExitOk : kExitAssertion;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random-walk follow-the-perturbed-leader experiments", "lazyleader"};
  app.require_subcommand(1);
  std::optional<unsigned> threads_flag;
  auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", threads_flag, "worker threads (default: LAZYLEADER_THREADS, "
                                               "then machine parallelism)")
        ->check(CLI::PositiveNumber);
  };

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "run a Monte Carlo experiment from a JSON config");
  run->add_option("--config", run_args.config, "experiment config")->required()->check(
      CLI::ExistingFile);
  run->add_option("--seed", run_args.seed, "override master_seed");
  run->add_option("--out", run_args.out_dir, "output directory")->capture_default_str();
  add_threads(run);

  BoundsArgs bounds_args;
  CLI::App* bounds = app.add_subcommand("bounds", "evaluate a closed-form bound as JSON");
  bounds->add_option("--which", bounds_args.which, "bound to evaluate")
      ->required()
      ->check(CLI::IsMember(
          {"thm1", "thm1_switches", "lemma2", "thm2", "thm2_switches", "lower", "pmf_ratio"}));
  bounds->add_option("--n", bounds_args.n, "horizon n (t for lemma2 and pmf_ratio)");
  bounds->add_option("--N", bounds_args.actions, "number of actions");
  bounds->add_option("--d", bounds_args.d, "dimension");
  bounds->add_option("--m", bounds_args.m, "common weight of decisions");
  bounds->add_option("--eta", bounds_args.eta, "walk scale (default: tuned)");
  bounds->add_option("--k", bounds_args.k, "walk position for pmf_ratio");
  add_threads(bounds);

  OracleArgs oracle_args;
  CLI::App* oracle = app.add_subcommand(
      "oracle-check", "compare the DAG shortest-path oracle against path enumeration");
  oracle->add_option("--dag", oracle_args.dag, "DAG edge-list file")->required()->check(
      CLI::ExistingFile);
  oracle->add_option("--trials", oracle_args.trials, "random cost vectors")->capture_default_str();
  oracle->add_option("--seed", oracle_args.seed, "seed")->capture_default_str();
  add_threads(oracle);

  ReplayArgs replay_args;
  CLI::App* replay = app.add_subcommand("replay", "rerun one replication with a per-round trace");
  replay->add_option("--config", replay_args.config, "experiment config")->required()->check(
      CLI::ExistingFile);
  replay->add_option("--replication", replay_args.replication, "replication index")->required();
  replay->add_option("--seed", replay_args.seed, "override master_seed");
  add_threads(replay);

  SweepArgs sweep_args;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a config over a grid of one parameter");
  sweep_cmd->add_option("--config", sweep_args.config, "experiment config")->required()->check(
      CLI::ExistingFile);
  sweep_cmd->add_option("--vary", sweep_args.vary, "key=v1,v2,...")->required();
  sweep_cmd->add_option("--out", sweep_args.out_dir, "also write per-run outputs here");
  add_threads(sweep_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const unsigned threads = resolve_threads(threads_flag);
    if (run->parsed()) return do_run(run_args, threads, out, err);
    if (bounds->parsed()) return do_bounds(bounds_args, out);
    if (oracle->parsed()) return do_oracle_check(oracle_args, out, err);
    if (replay->parsed()) return do_replay(replay_args, out, err);
    if (sweep_cmd->parsed()) return do_sweep(sweep_args, threads, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
  } catch (const ContractError& e) {
    err << "invalid input: " << e.what() << '\n';
  }
  return kExitUsage;
}

}  // namespace lazyleader
