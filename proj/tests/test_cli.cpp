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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lazyleader/cli.hpp"

using namespace lazyleader;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  args.insert(args.begin(), "lazyleader");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "lazyleader_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string write_config(const std::string& name, const nlohmann::json& j) {
  const auto path = scratch(name);
  std::ofstream(path) << j.dump();
  return path.string();
}

nlohmann::json zeros_config() {
  return {{"name", "cli_zeros"},
          {"forecaster", {{"id", "rwfpl"}}},
          {"adversary", {{"kind", "zeros"}}},
          {"n", 200},
          {"N", 2},
          {"replications", 10},
          {"master_seed", 3},
          {"assertions", {"lemma1", "be_the_leader", "thm1_regret"}}};
}

}  // namespace

TEST_CASE("bounds subcommand") {
  const Outcome o = cli({"bounds", "--which", "thm1", "--n", "10000", "--N", "10"});
  CHECK(o.code == 0);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j.at("value").get<double>() == doctest::Approx(1880.14).epsilon(1e-6));
  CHECK(j.at("name") == "thm1");

  const Outcome l = cli({"bounds", "--which", "lemma2", "--n", "100", "--N", "2"});
  CHECK(nlohmann::json::parse(l.out).at("value").get<double>() ==
        doctest::Approx(0.550964).epsilon(1e-6));
  const Outcome t = cli({"bounds", "--which", "thm2", "--n", "10000", "--d", "10", "--m", "3"});
  CHECK(nlohmann::json::parse(t.out).at("value").get<double>() ==
        doctest::Approx(4720.98).epsilon(1e-6));

  CHECK(cli({"bounds", "--which", "thm1", "--n", "10", "--N", "1"}).code == 2);
  CHECK(cli({"bounds", "--which", "thm1", "--n", "10"}).code == 2);
  CHECK(cli({"bounds", "--which", "nonsense", "--n", "10"}).code == 2);
}

TEST_CASE("usage errors and help") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"bounds", "--which", "thm1", "--bogus"}).code == 2);
  for (const char* sub : {"run", "bounds", "oracle-check", "replay", "sweep"}) {
    const Outcome h = cli({sub, "--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("--") != std::string::npos);
  }
}

TEST_CASE("run subcommand") {
  const auto out_dir = scratch("run_out");
  std::filesystem::remove_all(out_dir);
  const std::string config = write_config("zeros.json", zeros_config());
  const Outcome o = cli({"run", "--config", config, "--out", out_dir.string(), "--threads", "2"});
  CHECK(o.code == 0);
  CHECK(nlohmann::json::parse(o.out).at("passed") == true);
  std::ifstream csv(out_dir / "cli_zeros.csv");
  std::string line;
  std::getline(csv, line);
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    // regret is the 7th column
    std::istringstream fields(line);
    std::string field;
    for (int k = 0; k < 7; ++k) std::getline(fields, field, ',');
    CHECK(field == "0");
  }
  CHECK(rows == 10 * 9);

  auto broken = zeros_config();
  broken["n"] = 0;
  CHECK(cli({"run", "--config", write_config("broken.json", broken)}).code == 2);
  CHECK(cli({"run", "--config", "/nonexistent.json"}).code == 2);
  std::ofstream(scratch("garbage.json")) << "{ not json";
  CHECK(cli({"run", "--config", scratch("garbage.json").string()}).code == 2);
}

TEST_CASE("assertion failures exit with 1 and print the replay seed") {
  auto j = zeros_config();
  j["forecaster"]["id"] = "fpl_iid";
  j["assertions"] = {"thm1_switches"};
  const auto out_dir = scratch("fail_out");
  const Outcome o = cli({"run", "--config", write_config("fail.json", j), "--out",
                         out_dir.string(), "--seed", "41"});
  CHECK(o.code == 1);
  CHECK(o.err.find("master_seed=41") != std::string::npos);
}

TEST_CASE("replay subcommand reproduces a trajectory") {
  const std::string config = write_config("replay.json", [] {
    auto j = zeros_config();
    j["adversary"] = {{"kind", "bernoulli"}, {"seed", 5}};
    return j;
  }());
  const Outcome a = cli({"replay", "--config", config, "--replication", "4"});
  const Outcome b = cli({"replay", "--config", config, "--replication", "4"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("t,action,loss,switched,lead_pack_size", 0) == 0);
  const Outcome c = cli({"replay", "--config", config, "--replication", "5"});
  CHECK(c.out != a.out);
}

TEST_CASE("oracle-check subcommand") {
  const auto dag = scratch("diamond.dag");
  std::ofstream(dag) << "4 4 0 3\n0 1\n1 3\n0 2\n2 3\n";
  const Outcome o = cli({"oracle-check", "--dag", dag.string(), "--trials", "200", "--seed", "3"});
  CHECK(o.code == 0);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j.at("mismatches") == 0);
  CHECK(j.at("paths") == 2);
  std::ofstream(scratch("cycle.dag")) << "3 3 0 2\n0 1\n1 2\n2 0\n";
  CHECK(cli({"oracle-check", "--dag", scratch("cycle.dag").string()}).code == 2);
}

TEST_CASE("sweep subcommand") {
  const std::string config = write_config("sweep.json", zeros_config());
  const Outcome o = cli({"sweep", "--config", config, "--vary", "n=50,100,200"});
  CHECK(o.code == 0);
  CHECK(std::count(o.out.begin(), o.out.end(), '\n') == 4);
  CHECK(cli({"sweep", "--config", config, "--vary", "n"}).code == 2);
  CHECK(cli({"sweep", "--config", config, "--vary", "flavour=1"}).code == 2);
}
