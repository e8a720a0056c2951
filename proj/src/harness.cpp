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

#include "lazyleader/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "lazyleader/baselines.hpp"
#include "lazyleader/bounds.hpp"
#include "lazyleader/rwfpl.hpp"

namespace lazyleader {

namespace {

const std::vector<std::string> kExpertForecasters = {"rwfpl",      "hedge",
                                                     "fpl_iid",    "fpl_static",
                                                     "shrinking_dartboard", "uniform"};

const std::vector<std::string> kAssertions = {"lemma1",       "be_the_leader",
                                              "thm1_regret",  "thm1_regret_vs_switches",
                                              "thm1_switches", "thm2_regret",
                                              "thm2_switches"};

bool contains(const std::vector<std::string>& list, const std::string& item) {
  return std::find(list.begin(), list.end(), item) != list.end();
}

void reject_unknown_fields(const nlohmann::json& j, std::initializer_list<const char*> known,
                           const char* what) {
  if (!j.is_object()) throw ConfigError(fmt::format("{} must be a JSON object", what));
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok |= key == k;
    if (!ok) throw ConfigError(fmt::format("unknown {} field '{}'", what, key));
  }
}

template <typename Fn>
auto json_guard(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("bad {}: {}", what, e.what()));
  }
}

std::string format_number(double v) { return fmt::format("{}", v); }

}  // namespace

// ---- configuration -------------------------------------------------------------

nlohmann::json ForecasterSpec::to_json() const {
  nlohmann::json j;
  j["id"] = id;
  j["eta"] = eta ? nlohmann::json(*eta) : nlohmann::json(nullptr);
  j["tie_break"] = std::string(to_string(tie));
  return j;
}

ForecasterSpec ForecasterSpec::from_json(const nlohmann::json& j) {
  reject_unknown_fields(j, {"id", "eta", "tie_break"}, "forecaster");
  return json_guard("forecaster", [&] {
    ForecasterSpec spec;
    spec.id = j.at("id").get<std::string>();
    if (j.contains("eta") && !j.at("eta").is_null()) spec.eta = j.at("eta").get<double>();
    if (j.contains("tie_break")) spec.tie = parse_tie_break(j.at("tie_break").get<std::string>());
    if (!contains(kExpertForecasters, spec.id) && spec.id != "gauss_rwfpl") {
      throw ConfigError(fmt::format("unknown forecaster id '{}'", spec.id));
    }
    if (spec.eta && !(*spec.eta > 0.0)) {
      throw ConfigError(fmt::format("forecaster eta must be positive (got {})", *spec.eta));
    }
    return spec;
  });
}

std::unique_ptr<DecisionSet> DecisionSetSpec::build() const {
  if (kind == "msets") return std::make_unique<MSetFamily>(d, m);
  if (kind == "dag") {
    auto dag = std::make_unique<DagPathSet>(load_dag(path));
    if ((d != 0 && d != dag->dimension()) || (m != 0 && m != dag->weight())) {
      throw ConfigError(fmt::format("{} has d={}, m={} but the config says d={}, m={}", path,
                                    dag->dimension(), dag->weight(), d, m));
    }
    return dag;
  }
  throw ConfigError(fmt::format("unknown decision set kind '{}' (expected msets|dag)", kind));
}

nlohmann::json DecisionSetSpec::to_json() const {
  nlohmann::json j;
  j["kind"] = kind;
  j["d"] = d;
  j["m"] = m;
  if (kind == "dag") j["path"] = path;
  return j;
}

DecisionSetSpec DecisionSetSpec::from_json(const nlohmann::json& j) {
  reject_unknown_fields(j, {"kind", "d", "m", "path"}, "decision_set");
  return json_guard("decision_set", [&] {
    DecisionSetSpec spec;
    spec.kind = j.at("kind").get<std::string>();
    spec.d = j.value("d", std::size_t{0});
    spec.m = j.value("m", std::size_t{0});
    spec.path = j.value("path", std::string{});
    if (spec.kind == "dag" && spec.path.empty()) throw ConfigError("dag decision set needs a path");
    return spec;
  });
}

void ExperimentConfig::validate() const {
  if (n == 0) throw ConfigError("n must be at least 1");
  if (replications == 0) throw ConfigError("replications must be at least 1");
  if (combinatorial()) {
    if (!decision_set) throw ConfigError("gauss_rwfpl needs a decision_set");
  } else {
    if (actions == 0) throw ConfigError("N must be at least 1");
    if (decision_set) throw ConfigError(fmt::format("{} does not take a decision_set", forecaster.id));
  }
  for (const auto& a : assertions) {
    if (!contains(kAssertions, a)) throw ConfigError(fmt::format("unknown assertion '{}'", a));
    const bool pathwise = a == "lemma1" || a == "be_the_leader";
    if (pathwise && forecaster.id != "rwfpl") {
      throw ConfigError(fmt::format("assertion '{}' applies to rwfpl only", a));
    }
    if (a.rfind("thm1", 0) == 0 && (combinatorial() || actions < 2)) {
      throw ConfigError(fmt::format("assertion '{}' needs an experts game with N >= 2", a));
    }
    if (a.rfind("thm2", 0) == 0 && !combinatorial()) {
      throw ConfigError(fmt::format("assertion '{}' applies to gauss_rwfpl only", a));
    }
  }
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["forecaster"] = forecaster.to_json();
  j["adversary"] = adversary.to_json();
  j["n"] = n;
  if (combinatorial()) {
    j["decision_set"] = decision_set ? decision_set->to_json() : nlohmann::json(nullptr);
  } else {
    j["N"] = actions;
  }
  j["replications"] = replications;
  j["master_seed"] = master_seed;
  j["outputs"] = {{"csv", outputs.csv}, {"json", outputs.json}, {"svg", outputs.svg}};
  j["assertions"] = assertions;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  reject_unknown_fields(j,
                        {"name", "forecaster", "adversary", "n", "N", "decision_set",
                         "replications", "master_seed", "outputs", "assertions"},
                        "config");
  ExperimentConfig config = json_guard("config", [&] {
    ExperimentConfig c;
    c.name = j.value("name", std::string{"experiment"});
    c.forecaster = ForecasterSpec::from_json(j.at("forecaster"));
    c.adversary = AdversarySpec::from_json(j.at("adversary"));
    c.n = j.at("n").get<std::size_t>();
    c.actions = j.value("N", std::size_t{0});
    if (j.contains("decision_set") && !j.at("decision_set").is_null()) {
      c.decision_set = DecisionSetSpec::from_json(j.at("decision_set"));
    }
    c.replications = j.value("replications", std::size_t{100});
    c.master_seed = j.value("master_seed", std::uint64_t{1});
    if (j.contains("outputs")) {
      const auto& o = j.at("outputs");
      reject_unknown_fields(o, {"csv", "json", "svg"}, "outputs");
      c.outputs.csv = o.value("csv", true);
      c.outputs.json = o.value("json", true);
      c.outputs.svg = o.value("svg", false);
    }
    c.assertions = j.value("assertions", std::vector<std::string>{});
    return c;
  });
  if (config.name.empty() || config.name.find_first_of("/\\") != std::string::npos) {
    throw ConfigError(fmt::format("config name '{}' must be a plain file stem", config.name));
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path));
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("{}: invalid JSON: {}", path, e.what()));
  }
  try {
    return ExperimentConfig::from_json(j);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
}

std::vector<std::size_t> geometric_grid(std::size_t n) {
  std::vector<std::size_t> grid;
  for (std::size_t t = 1; t <= n; t *= 2) {
    grid.push_back(t);
    if (t > n / 2) break;
  }
  if (grid.empty() || grid.back() != n) grid.push_back(n);
  return grid;
}

// ---- running -------------------------------------------------------------------

namespace {

std::unique_ptr<Forecaster> make_forecaster(const ForecasterSpec& spec) {
  if (spec.id == "rwfpl") return std::make_unique<RandomWalkFpl>(spec.tie);
  if (spec.id == "hedge") return std::make_unique<HedgeForecaster>(spec.eta);
  if (spec.id == "fpl_iid") return std::make_unique<FplIidForecaster>(spec.eta);
  if (spec.id == "fpl_static") return std::make_unique<FplStaticForecaster>(spec.eta);
  if (spec.id == "shrinking_dartboard") {
    return std::make_unique<ShrinkingDartboardForecaster>(spec.eta);
  }
  if (spec.id == "uniform") return std::make_unique<UniformForecaster>();
  throw ConfigError(fmt::format("forecaster '{}' is not an experts forecaster", spec.id));
}

double combinatorial_eta(const PreparedExperiment& prepared) {
  return prepared.config.forecaster.eta.value_or(default_eta(prepared.set->dimension()));
}

std::string incidence_label(const Incidence& v) {
  std::string label;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i]) continue;
    if (!label.empty()) label += ' ';
    label += std::to_string(i + 1);
  }
  return label;
}

// What a single game produced, in a shape shared by all forecasters.
struct Trajectory {
  std::span<const double> losses_suffered;
  std::span<const std::uint8_t> switch_flags;
  std::span<const std::size_t> lead_pack_sizes;
  std::function<std::string(std::size_t)> action_label;
};

void fill_rows(const PreparedExperiment& prepared, const Trajectory& traj,
               ReplicationResult& out, std::vector<TraceRow>* trace) {
  const std::size_t n = traj.losses_suffered.size();
  const LossMatrix& losses = prepared.losses;
  std::vector<double> cumulative(losses.actions(), 0.0);
  double suffered = 0.0;
  std::size_t switches = 0;
  std::size_t grid_index = 0;
  for (std::size_t t = 1; t <= n; ++t) {
    suffered += traj.losses_suffered[t - 1];
    if (t >= 2 && traj.switch_flags[t - 2]) ++switches;
    const bool on_grid = grid_index < prepared.grid.size() && prepared.grid[grid_index] == t;
    if (!on_grid && trace == nullptr) continue;

    double best = 0.0;
    if (trace != nullptr) {
      const auto row = losses.row(t - 1);
      for (std::size_t i = 0; i < cumulative.size(); ++i) cumulative[i] += row[i];
      best = prepared.set ? dot(prepared.set->oracle(cumulative), cumulative)
                          : *std::min_element(cumulative.begin(), cumulative.end());
    }
    if (on_grid) {
      GridRow g;
      g.t = t;
      g.cumulative_loss = suffered;
      g.best_action_loss = prepared.best_loss_at_grid[grid_index];
      g.regret = suffered - g.best_action_loss;
      g.switches = switches;
      if (!traj.lead_pack_sizes.empty()) g.lead_pack_gt1 = traj.lead_pack_sizes[t - 1] > 1;
      out.rows.push_back(g);
      ++grid_index;
    }
    if (trace != nullptr) {
      TraceRow r;
      r.t = t;
      r.action = traj.action_label(t - 1);
      r.loss = traj.losses_suffered[t - 1];
      r.switched = t >= 2 && traj.switch_flags[t - 2];
      r.lead_pack_size = traj.lead_pack_sizes.empty() ? 0 : traj.lead_pack_sizes[t - 1];
      r.cumulative_loss = suffered;
      r.best_action_loss = best;
      r.regret = suffered - best;
      trace->push_back(std::move(r));
    }
  }
}

}  // namespace

PreparedExperiment prepare(const ExperimentConfig& config) {
  config.validate();
  PreparedExperiment prepared;
  prepared.config = config;
  std::size_t width = config.actions;
  if (config.combinatorial()) {
    prepared.set = config.decision_set->build();
    width = prepared.set->dimension();
  }
  prepared.losses = generate(config.adversary, config.n, width);
  prepared.grid = geometric_grid(config.n);

  std::vector<double> cumulative(width, 0.0);
  std::size_t k = 0;
  for (std::size_t t = 1; t <= config.n && k < prepared.grid.size(); ++t) {
    const auto row = prepared.losses.row(t - 1);
    for (std::size_t i = 0; i < width; ++i) cumulative[i] += row[i];
    if (prepared.grid[k] != t) continue;
    prepared.best_loss_at_grid.push_back(
        prepared.set ? dot(prepared.set->oracle(cumulative), cumulative)
                     : *std::min_element(cumulative.begin(), cumulative.end()));
    ++k;
  }
  return prepared;
}

ReplicationResult run_replication(const PreparedExperiment& prepared, std::size_t replication,
                                  std::vector<TraceRow>* trace) {
  const ExperimentConfig& config = prepared.config;
  RngStream rng(config.master_seed, replication);
  ReplicationResult out;
  out.replication = replication;

  if (config.combinatorial()) {
    const ComboRunRecord record =
        run_combinatorial(prepared.losses, *prepared.set, combinatorial_eta(prepared), rng);
    out.regret = record.regret();
    out.switches = static_cast<double>(record.switches());
    out.cumulative_loss = record.cumulative_loss();
    fill_rows(prepared,
              {record.losses_suffered, record.switch_flags, {},
               [&](std::size_t t) { return incidence_label(record.actions[t]); }},
              out, trace);
    return out;
  }

  RunRecord record;
  if (config.forecaster.id == "rwfpl") {
    RwfplRun run = run_rwfpl(prepared.losses, rng, {config.forecaster.tie, true});
    if (contains(config.assertions, "lemma1")) {
      const auto check = verify_pathwise_lemma1(run, prepared.losses);
      out.lemma1_ok = check.all();
      out.lemma1_switch_count_only_violations = check.switch_count_only_violations;
      out.min_lemma1_slack = *std::min_element(check.slack.begin(), check.slack.end());
      out.comparators_checked = check.holds.size();
    }
    if (contains(config.assertions, "be_the_leader")) {
      const auto check = verify_be_the_leader(run, prepared.losses);
      out.be_the_leader_ok = check.all();
      out.min_be_the_leader_slack = *std::min_element(check.slack.begin(), check.slack.end());
      out.comparators_checked = check.holds.size();
    }
    record = std::move(run.record);
  } else {
    auto forecaster = make_forecaster(config.forecaster);
    record = play(*forecaster, prepared.losses, rng);
  }
  out.regret = record.regret();
  out.switches = static_cast<double>(record.switches());
  out.cumulative_loss = record.cumulative_loss();
  fill_rows(prepared,
            {record.losses_suffered, record.switch_flags, record.lead_pack_sizes,
             [&](std::size_t t) { return std::to_string(record.actions[t] + 1); }},
            out, trace);
  return out;
}

unsigned resolve_threads(std::optional<unsigned> flag) {
  if (flag && *flag > 0) return *flag;
  if (const char* env = std::getenv("LAZYLEADER_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

bool ExperimentResult::passed() const {
  return std::all_of(assertions.begin(), assertions.end(),
                     [](const AssertionResult& a) { return a.passed; });
}

nlohmann::json AssertionResult::to_json() const {
  return {{"name", name},
          {"passed", passed},
          {"detail", detail},
          {"failed_replications", failed_replications}};
}

namespace {

struct BoundPair {
  std::optional<double> regret;
  std::optional<double> switches;
};

BoundPair bounds_at(const PreparedExperiment& prepared, std::size_t t) {
  const ExperimentConfig& config = prepared.config;
  if (config.combinatorial()) {
    const std::size_t d = prepared.set->dimension();
    const std::size_t m = prepared.set->weight();
    if (d < 2) return {};
    const double eta = combinatorial_eta(prepared);
    const double regret = config.forecaster.eta ? thm2_regret_bound(t, d, m, eta)
                                                : thm2_regret_bound_tuned(t, d, m);
    return {regret, thm2_switch_bound(t, d, m, eta)};
  }
  if (config.actions < 2) return {};
  return {thm1_bound(t, config.actions), thm1_switch_bound(t, config.actions)};
}

// Passes when the mean is within the bound. The replications listed for
// replay are those whose own value exceeds it, or the worst one.
void add_bound_assertion(ExperimentResult& result, const std::string& name,
                         const std::vector<double>& values, double mean, double bound,
                         const char* metric) {
  AssertionResult a;
  a.name = name;
  a.passed = mean <= bound;
  a.detail = fmt::format("mean {} {} {} bound {}", metric, mean, a.passed ? "<=" : ">", bound);
  if (!a.passed) {
    for (std::size_t r = 0; r < values.size(); ++r) {
      if (values[r] > bound) a.failed_replications.push_back(r);
    }
    if (a.failed_replications.empty() && !values.empty()) {
      a.failed_replications.push_back(static_cast<std::size_t>(
          std::max_element(values.begin(), values.end()) - values.begin()));
    }
  }
  result.assertions.push_back(std::move(a));
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads) {
  const PreparedExperiment prepared = prepare(config);
  ExperimentResult result;
  result.config = config;
  result.replications.resize(config.replications);
  parallel_for(config.replications, threads == 0 ? resolve_threads(std::nullopt) : threads,
               [&](std::size_t r) { result.replications[r] = run_replication(prepared, r); });

  const std::size_t reps = result.replications.size();
  std::vector<double> regrets(reps), switches(reps), gaps(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    const auto& rep = result.replications[r];
    regrets[r] = rep.regret;
    switches[r] = rep.switches;
    gaps[r] = rep.regret - 2.0 * rep.switches;
    result.comparator_pairs += rep.comparators_checked;
    result.lemma1_switch_count_only_violations += rep.lemma1_switch_count_only_violations;
  }
  result.regret = summarize(regrets);
  result.switches = summarize(switches);
  result.regret_minus_twice_switches = summarize(gaps);

  const bool has_pack = config.forecaster.id == "rwfpl";
  for (std::size_t k = 0; k < prepared.grid.size(); ++k) {
    CurvePoint p;
    p.t = prepared.grid[k];
    double regret_sum = 0.0, switch_sum = 0.0, pack_sum = 0.0;
    for (const auto& rep : result.replications) {
      regret_sum += rep.rows[k].regret;
      switch_sum += static_cast<double>(rep.rows[k].switches);
      pack_sum += rep.rows[k].lead_pack_gt1 > 0 ? 1.0 : 0.0;
    }
    p.mean_regret = regret_sum / static_cast<double>(reps);
    p.mean_switches = switch_sum / static_cast<double>(reps);
    if (has_pack) p.lead_pack_gt1_frequency = pack_sum / static_cast<double>(reps);
    const auto b = bounds_at(prepared, p.t);
    p.regret_bound = b.regret;
    p.switch_bound = b.switches;
    result.curve.push_back(p);
  }

  if (config.combinatorial()) {
    const std::size_t d = prepared.set->dimension();
    const std::size_t m = prepared.set->weight();
    result.bounds["d"] = d;
    result.bounds["m"] = m;
    if (d >= 2) {
      const double eta = combinatorial_eta(prepared);
      result.bounds["eta"] = eta;
      result.bounds["thm2_regret"] = thm2_regret_bound(config.n, d, m, eta);
      result.bounds["thm2_regret_tuned"] = thm2_regret_bound_tuned(config.n, d, m);
      result.bounds["thm2_switches"] = thm2_switch_bound(config.n, d, m, eta);
    }
  } else if (config.actions >= 2) {
    result.bounds["thm1_regret"] = thm1_bound(config.n, config.actions);
    result.bounds["thm1_switches"] = thm1_switch_bound(config.n, config.actions);
    result.bounds["lower_bound"] = lower_bound(config.n, config.actions);
  }

  for (const auto& name : config.assertions) {
    if (name == "lemma1" || name == "be_the_leader") {
      AssertionResult a;
      a.name = name;
      for (const auto& rep : result.replications) {
        const bool ok = name == "lemma1" ? rep.lemma1_ok : rep.be_the_leader_ok;
        if (!ok) a.failed_replications.push_back(rep.replication);
      }
      a.passed = a.failed_replications.empty();
      a.detail = fmt::format("{} of {} replications violate the inequality",
                             a.failed_replications.size(), reps);
      result.assertions.push_back(std::move(a));
    } else if (name == "thm1_regret") {
      add_bound_assertion(result, name, regrets, result.regret.mean,
                          thm1_bound(config.n, config.actions), "regret");
    } else if (name == "thm1_switches") {
      add_bound_assertion(result, name, switches, result.switches.mean,
                          thm1_switch_bound(config.n, config.actions), "switches");
    } else if (name == "thm1_regret_vs_switches") {
      AssertionResult a;
      a.name = name;
      const double slack = 3.0 * result.regret_minus_twice_switches.std_error;
      a.passed = result.regret.mean <= 2.0 * result.switches.mean + slack;
      a.detail = fmt::format("mean regret {} vs 2 x mean switches {} + 3 SE {}",
                             result.regret.mean, 2.0 * result.switches.mean, slack);
      if (!a.passed && !gaps.empty()) {
        a.failed_replications.push_back(
            static_cast<std::size_t>(std::max_element(gaps.begin(), gaps.end()) - gaps.begin()));
      }
      result.assertions.push_back(std::move(a));
    } else if (name == "thm2_regret") {
      add_bound_assertion(result, name, regrets, result.regret.mean,
                          *bounds_at(prepared, config.n).regret, "regret");
    } else if (name == "thm2_switches") {
      add_bound_assertion(result, name, switches, result.switches.mean,
                          *bounds_at(prepared, config.n).switches, "switches");
    }
  }
  return result;
}

// ---- output ----------------------------------------------------------------------

void write_csv(std::ostream& out, const ExperimentResult& result) {
  const auto& config = result.config;
  const bool combo = config.combinatorial();
  out << "replication,t,forecaster,adversary,cumulative_loss,best_action_loss,regret,switches,"
         "lead_pack_gt1";
  if (combo) out << ",d,m";
  out << '\n';
  std::string dm;
  if (combo && !result.replications.empty()) {
    dm = fmt::format(",{},{}", result.bounds.value("d", std::size_t{0}),
                     result.bounds.value("m", std::size_t{0}));
  }
  const std::string adversary = config.adversary.label();
  for (const auto& rep : result.replications) {
    for (const auto& row : rep.rows) {
      out << rep.replication << ',' << row.t << ',' << config.forecaster.id << ',' << adversary
          << ',' << format_number(row.cumulative_loss) << ','
          << format_number(row.best_action_loss) << ',' << format_number(row.regret) << ','
          << row.switches << ',';
      if (row.lead_pack_gt1 >= 0) out << row.lead_pack_gt1;
      out << dm << '\n';
    }
  }
}

nlohmann::json summary_json(const ExperimentResult& result) {
  nlohmann::json j;
  j["config"] = result.config.to_json();
  j["metrics"]["regret"] = result.regret.to_json();
  j["metrics"]["switches"] = result.switches.to_json();
  j["metrics"]["regret_minus_twice_switches"] = result.regret_minus_twice_switches.to_json();
  nlohmann::json curve = nlohmann::json::array();
  nlohmann::json pack = nlohmann::json::array();
  for (const auto& p : result.curve) {
    nlohmann::json c = {{"t", p.t}, {"mean_regret", p.mean_regret},
                        {"mean_switches", p.mean_switches}};
    if (p.regret_bound) c["regret_bound"] = *p.regret_bound;
    if (p.switch_bound) c["switch_bound"] = *p.switch_bound;
    if (p.lead_pack_gt1_frequency) {
      c["lead_pack_gt1_frequency"] = *p.lead_pack_gt1_frequency;
      pack.push_back({{"t", p.t}, {"frequency", *p.lead_pack_gt1_frequency}});
    }
    curve.push_back(std::move(c));
  }
  j["metrics"]["lead_pack_gt1"] = pack;
  j["curve"] = curve;
  nlohmann::json assertions = nlohmann::json::array();
  for (const auto& a : result.assertions) assertions.push_back(a.to_json());
  j["assertions"] = assertions;
  j["passed"] = result.passed();
  j["bounds"] = result.bounds.is_null() ? nlohmann::json::object() : result.bounds;
  j["pathwise"] = {{"comparator_pairs", result.comparator_pairs},
                   {"switch_count_only_violations", result.lemma1_switch_count_only_violations}};
  return j;
}

void write_svg(std::ostream& out, const ExperimentResult& result) {
  constexpr double kWidth = 800.0, kHeight = 420.0, kMargin = 50.0;
  const auto& curve = result.curve;
  double t_max = 1.0, y_max = 1.0;
  for (const auto& p : curve) {
    t_max = std::max(t_max, static_cast<double>(p.t));
    y_max = std::max({y_max, p.mean_regret, p.mean_switches});
    if (p.regret_bound) y_max = std::max(y_max, *p.regret_bound);
    if (p.switch_bound) y_max = std::max(y_max, *p.switch_bound);
  }
  auto x = [&](double t) { return kMargin + (kWidth - 2 * kMargin) * t / t_max; };
  auto y = [&](double v) { return kHeight - kMargin - (kHeight - 2 * kMargin) * v / y_max; };
  auto polyline = [&](auto value, const char* color, bool dashed) {
    std::string points;
    for (const auto& p : curve) {
      const std::optional<double> v = value(p);
      if (!v) continue;
      points += fmt::format("{:.2f},{:.2f} ", x(static_cast<double>(p.t)), y(*v));
    }
    if (points.empty()) return;
    out << fmt::format(
        "  <polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\"{} points=\"{}\"/>\n", color,
        dashed ? " stroke-dasharray=\"6,4\"" : "", points);
  };

  out << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\">\n",
      kWidth, kHeight);
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << fmt::format("  <text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">{} "
                     "({} replications)</text>\n",
                     kMargin, result.config.name, result.config.replications);
  out << fmt::format(
      "  <line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n"
      "  <line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{3}\" stroke=\"black\"/>\n",
      kMargin, kHeight - kMargin, kWidth - kMargin, kMargin);
  out << fmt::format("  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">t = "
                     "{}</text>\n",
                     kWidth - kMargin - 60, kHeight - kMargin + 20, t_max);
  out << fmt::format("  <text x=\"4\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{:.4g}"
                     "</text>\n",
                     kMargin, y_max);
  polyline([](const CurvePoint& p) { return std::optional<double>(p.mean_regret); }, "#1f77b4",
           false);
  polyline([](const CurvePoint& p) { return std::optional<double>(p.mean_switches); }, "#ff7f0e",
           false);
  polyline([](const CurvePoint& p) { return p.regret_bound; }, "#1f77b4", true);
  polyline([](const CurvePoint& p) { return p.switch_bound; }, "#ff7f0e", true);
  const char* labels[] = {"mean regret", "mean switches", "regret bound (dashed)",
                          "switch bound (dashed)"};
  const char* colors[] = {"#1f77b4", "#ff7f0e", "#1f77b4", "#ff7f0e"};
  for (int k = 0; k < 4; ++k) {
    out << fmt::format("  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" "
                       "fill=\"{}\">{}</text>\n",
                       kMargin + 10, kMargin + 16 * (k + 1), colors[k], labels[k]);
  }
  out << "</svg>\n";
}

namespace {

template <typename Writer>
std::string write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  writer(out);
  out.flush();
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
  return path.string();
}

}  // namespace

std::vector<std::string> emit(const ExperimentResult& result, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create output directory '{}': {}", dir, ec.message()));
  const std::filesystem::path base = std::filesystem::path(dir) / result.config.name;
  std::vector<std::string> written;
  const auto& outputs = result.config.outputs;
  if (outputs.csv) {
    written.push_back(write_file(base.string() + ".csv",
                                 [&](std::ostream& o) { write_csv(o, result); }));
  }
  if (outputs.json) {
    written.push_back(write_file(base.string() + ".summary.json", [&](std::ostream& o) {
      o << summary_json(result).dump(2) << '\n';
    }));
  }
  if (outputs.svg) {
    written.push_back(write_file(base.string() + ".svg",
                                 [&](std::ostream& o) { write_svg(o, result); }));
  }
  return written;
}

void write_trace(std::ostream& out, std::span<const TraceRow> trace) {
  out << "t,action,loss,switched,lead_pack_size,cumulative_loss,best_action_loss,regret\n";
  for (const auto& r : trace) {
    out << r.t << ',' << r.action << ',' << format_number(r.loss) << ',' << (r.switched ? 1 : 0)
        << ',' << r.lead_pack_size << ',' << format_number(r.cumulative_loss) << ','
        << format_number(r.best_action_loss) << ',' << format_number(r.regret) << '\n';
  }
}

// ---- lead-pack study ---------------------------------------------------------------

LeadPackStudy lead_pack_study(const LossMatrix& losses, std::span<const std::size_t> ts,
                              std::size_t replications, std::uint64_t master_seed,
                              unsigned threads) {
  if (ts.empty()) throw ConfigError("lead-pack study needs at least one t");
  const std::size_t horizon = *std::max_element(ts.begin(), ts.end()) + 1;
  if (losses.rounds() != horizon) {
    throw ContractError(fmt::format("lead-pack study needs exactly {} rounds of losses (got {})",
                                    horizon, losses.rounds()));
  }
  LeadPackStudy study;
  for (std::size_t t : ts) {
    if (t == 0) throw ConfigError("lead-pack study times start at 1");
    study.points.push_back({t, 0, 0, 0});
  }
  std::mutex merge;
  parallel_for(replications, threads == 0 ? resolve_threads(std::nullopt) : threads,
               [&](std::size_t r) {
                 RngStream rng(master_seed, r);
                 const RwfplRun run = run_rwfpl(losses, rng, {TieBreak::kUniform, true});
                 const auto& rec = run.record;
                 const auto lemma1 = verify_pathwise_lemma1(run, losses);
                 const auto btl = verify_be_the_leader(run, losses);
                 std::vector<std::pair<std::size_t, std::size_t>> hits;
                 hits.reserve(ts.size());
                 for (std::size_t t : ts) {
                   hits.emplace_back(rec.lead_pack_sizes[t - 1] > 1,
                                     rec.actions[t - 1] != rec.actions[t]);
                 }
                 std::lock_guard lock(merge);
                 for (std::size_t k = 0; k < hits.size(); ++k) {
                   study.points[k].pack_gt1 += hits[k].first;
                   study.points[k].switch_next += hits[k].second;
                   ++study.points[k].samples;
                 }
                 study.comparator_pairs += lemma1.holds.size();
                 study.lemma1_violations += static_cast<std::size_t>(
                     std::count(lemma1.holds.begin(), lemma1.holds.end(), false));
                 study.be_the_leader_violations += static_cast<std::size_t>(
                     std::count(btl.holds.begin(), btl.holds.end(), false));
                 study.lemma1_switch_count_only_violations +=
                     lemma1.switch_count_only_violations;
               });
  return study;
}

// ---- sweeps --------------------------------------------------------------------------

void apply_override(ExperimentConfig& config, const std::string& key, const std::string& value) {
  auto as_size = [&]() -> std::size_t {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(value, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != value.size() || value.empty() || value[0] == '-') {
      throw ConfigError(fmt::format("{}={} is not a non-negative integer", key, value));
    }
    return static_cast<std::size_t>(v);
  };
  auto as_real = [&]() -> double {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != value.size() || value.empty()) {
      throw ConfigError(fmt::format("{}={} is not a number", key, value));
    }
    return v;
  };
  auto decision_set = [&]() -> DecisionSetSpec& {
    if (!config.decision_set) throw ConfigError(fmt::format("{} needs a decision_set", key));
    return *config.decision_set;
  };

  if (key == "n") config.n = as_size();
  else if (key == "N") config.actions = as_size();
  else if (key == "replications") config.replications = as_size();
  else if (key == "master_seed") config.master_seed = as_size();
  else if (key == "eta") config.forecaster.eta = as_real();
  else if (key == "d") decision_set().d = as_size();
  else if (key == "m") decision_set().m = as_size();
  else if (key == "p") config.adversary.p = as_real();
  else if (key == "gap_period") config.adversary.gap_period = as_size();
  else if (key == "adversary_seed") config.adversary.seed = as_size();
  else throw ConfigError(fmt::format("cannot vary '{}'", key));
  config.name = fmt::format("{}_{}{}", config.name, key, value);
  config.validate();
}

std::vector<ExperimentResult> sweep(const ExperimentConfig& config, const std::string& key,
                                    std::span<const std::string> values, unsigned threads) {
  std::vector<ExperimentConfig> configs;
  for (const auto& v : values) {
    ExperimentConfig c = config;
    apply_override(c, key, v);
    configs.push_back(std::move(c));
  }
  std::vector<ExperimentResult> results;
  for (const auto& c : configs) results.push_back(run_experiment(c, threads));
  return results;
}

void write_sweep_csv(std::ostream& out, const std::string& key,
                     std::span<const std::string> values,
                     std::span<const ExperimentResult> results) {
  out << "key,value,replications,regret_mean,regret_se,switches_mean,switches_se,regret_bound,"
         "switch_bound,passed\n";
  for (std::size_t k = 0; k < results.size(); ++k) {
    const auto& r = results[k];
    const auto& last = r.curve.back();
    out << key << ',' << values[k] << ',' << r.config.replications << ','
        << format_number(r.regret.mean) << ',' << format_number(r.regret.std_error) << ','
        << format_number(r.switches.mean) << ',' << format_number(r.switches.std_error) << ','
        << (last.regret_bound ? format_number(*last.regret_bound) : "") << ','
        << (last.switch_bound ? format_number(*last.switch_bound) : "") << ','
        << (r.passed() ? 1 : 0) << '\n';
  }
}

}  // namespace lazyleader
