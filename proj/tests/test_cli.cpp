// Copyright 2026 The hhdaqc Authors
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

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

#include "hhdaqc/runner.hpp"

using namespace hhdaqc;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json small_run(const std::string& evolution = "daqc") {
  json j = json::parse(R"({
    "kind": "run", "name": "small",
    "model": {"omega0": 2.0, "U": 3.0, "k": 1.0, "g": 0.5, "lattice": [1, 2], "boson_levels": 2},
    "steps": 6, "t_final": 1.0, "initial_state": "0,1,1,0,0,0"})");
  j["evolution"] = evolution;
  return j;
}

json small_sweep() {
  json j{{"kind", "sweep"}, {"name", "grid"}, {"base", small_run()}, {"metric", "final_fidelity"}};
  j["base"].erase("kind");
  j["base"].erase("name");
  j["axes"] = json::array({{{"param", "U"}, {"min", 0.0}, {"max", 4.0}, {"points", 3}},
                           {{"param", "g"}, {"min", 0.0}, {"max", 1.0}, {"points", 3}}});
  return j;
}

std::string config_error_path(const json& j) {
  try {
    parse_run_config(j);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string csv(const Table& t) {
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hhdaqc_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(HHDAQC_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_json(const fs::path& p, const json& j) { std::ofstream(p) << j.dump(2); }

}  // namespace

TEST_CASE("config errors carry the offending path", "[cli][config]") {
  auto j = small_run();
  j["model"]["bogus"] = 1;
  REQUIRE(config_error_path(j) == "config.model.bogus");

  j = small_run();
  j["steps"] = 0;
  REQUIRE(config_error_path(j) == "config.steps");

  j = small_run();
  j["trotter_order"] = {"star", "star", "vertical"};
  REQUIRE(config_error_path(j) == "config.trotter_order");

  j = small_run();
  j["initial_state"] = "0,1,1";
  REQUIRE(config_error_path(j) == "config.initial_state");

  j = small_run("exact");
  j["noise"] = json::object();
  REQUIRE(config_error_path(j) == "config.noise");

  j = small_run("digital");
  j["model"]["boson_levels"] = 3;
  REQUIRE(config_error_path(j) == "config.model.boson_levels");

  j = small_run();
  j["noise"] = {{"gate_error_1q", 2.0}};
  REQUIRE(config_error_path(j) == "config.noise");

  j = small_run();
  j.erase("t_final");
  REQUIRE(config_error_path(j) == "config.t_final");

  auto s = small_sweep();
  s["axes"][1]["param"] = "U";
  REQUIRE_THROWS_AS(parse_sweep_config(s), ConfigError);
}

TEST_CASE("round trip through the normalized config", "[cli][config]") {
  const RunConfig a = parse_run_config(small_run());
  json echo = to_json(a);
  const RunConfig b = parse_run_config(echo);
  REQUIRE(to_json(b) == echo);
  REQUIRE(b.params.U == 3.0);
  REQUIRE(b.order == default_trotter_order());
}

TEST_CASE("default initial state is the half-filled Neel string", "[cli][config]") {
  auto j = small_run();
  j.erase("initial_state");
  REQUIRE(occupation_string(parse_run_config(j).initial_state) == "0,1,1,0,0,0");
}

TEST_CASE("exact run against the exact reference has unit fidelity", "[cli][run]") {
  const RunResult r = execute_run(parse_run_config(small_run("exact")));
  REQUIRE(r.table.columns ==
          std::vector<std::string>{"t", "fidelity", "double_occ_site1", "double_occ_site2", "total_double_occ",
                                   "phonon_number"});
  REQUIRE(r.table.rows.size() == 7);
  for (const auto& row : r.table.rows) REQUIRE(std::abs(row[1] - 1.0) < 1e-12);
}

TEST_CASE("1x1 sweep equals a single run", "[cli][sweep]") {
  auto s = small_sweep();
  s["axes"][0] = {{"param", "U"}, {"min", 3.0}, {"max", 3.0}, {"points", 5}};
  s["axes"][1] = {{"param", "g"}, {"min", 0.5}, {"max", 0.5}, {"points", 1}};
  const SweepResult sw = execute_sweep(parse_sweep_config(s));
  REQUIRE(sw.table.rows.size() == 1);
  const RunResult r = execute_run(parse_run_config(small_run()));
  REQUIRE(sw.table.rows[0][2] == r.final_fidelity);
}

TEST_CASE("degenerate axis collapses to one column", "[cli][sweep]") {
  auto s = small_sweep();
  s["axes"][1] = {{"param", "g"}, {"min", 0.25}, {"max", 0.25}, {"points", 7}};
  const SweepResult sw = execute_sweep(parse_sweep_config(s));
  REQUIRE(sw.table.rows.size() == 3);
  for (const auto& row : sw.table.rows) REQUIRE(row[1] == 0.25);
}

TEST_CASE("sweep output is independent of the thread count", "[cli][sweep][property]") {
  const SweepConfig cfg = parse_sweep_config(small_sweep());
  const std::string one = csv(execute_sweep(cfg, 1).table);
  REQUIRE(csv(execute_sweep(cfg, 2).table) == one);
  REQUIRE(csv(execute_sweep(cfg, 4).table) == one);
}

TEST_CASE("noisy DAQC series matches the stored golden file", "[cli][golden]") {
  const fs::path dir = fs::path(HHDAQC_GOLDEN_DIR);
  const RunConfig cfg = parse_run_config(load_json_file((dir / "noisy_daqc_small.json").string()));
  const RunResult r = execute_run(cfg);

  std::ifstream is(dir / "noisy_daqc_small.csv");
  std::string line;
  while (std::getline(is, line) && (line.empty() || line[0] == '#')) {
  }
  REQUIRE(line.rfind("t,fidelity", 0) == 0);
  std::size_t i = 0;
  while (std::getline(is, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ss, cell, ',')) {
      REQUIRE(i < r.table.rows.size());
      const double want = std::stod(cell);
      REQUIRE(std::abs(r.table.rows[i][c] - want) <= 1e-10 * std::max(1.0, std::abs(want)));
      ++c;
    }
    REQUIRE(c == r.table.columns.size());
    ++i;
  }
  REQUIRE(i == r.table.rows.size());
}

TEST_CASE("resource and depth reports", "[cli][report]") {
  const Table res = resource_table_report(ReportConfig{});
  REQUIRE(res.rows.size() == 12);
  ReportConfig dc;
  dc.lattices = {{1, 2}, {1, 7}};
  dc.steps = 3;
  const Table d = depth_report(dc);
  REQUIRE(d.rows.size() == 2);
  REQUIRE(d.rows[1][3] == 9.0);

  std::ostringstream os;
  write_table(os, res, OutputFormat::Csv, resource_labels());
  REQUIRE(os.str().find("controlled_displacement,8,80,176,67\n") != std::string::npos);
}

TEST_CASE("CLI writes deterministic outputs and exit codes", "[cli][process]") {
  const fs::path dir = scratch("run");
  write_json(dir / "run.json", small_run());
  REQUIRE(run_cli("run --config " + (dir / "run.json").string() + " --out " + (dir / "a").string()) == 0);
  REQUIRE(run_cli("run --config " + (dir / "run.json").string() + " --out " + (dir / "b").string()) == 0);
  const std::string a = slurp(dir / "a" / "small.csv");
  REQUIRE_FALSE(a.empty());
  REQUIRE(a == slurp(dir / "b" / "small.csv"));
  REQUIRE(fs::exists(dir / "a" / "small.manifest.json"));
  REQUIRE(fs::exists(dir / "a" / "small.plot.py"));
  const json manifest = json::parse(slurp(dir / "a" / "small.manifest.json"));
  REQUIRE(manifest["config"]["model"]["U"] == 3.0);

  REQUIRE(run_cli("run --config " + (dir / "run.json").string() + " --out " + (dir / "j").string() +
                  " --format json") == 0);
  REQUIRE(json::parse(slurp(dir / "j" / "small.json")).size() == 7);

  write_json(dir / "sweep.json", small_sweep());
  REQUIRE(run_cli("sweep --threads 2 --config " + (dir / "sweep.json").string() + " --out " + dir.string()) == 0);
  REQUIRE(fs::exists(dir / "grid.csv"));

  REQUIRE(run_cli("validate-config --config " + (dir / "run.json").string()) == 0);
  REQUIRE(run_cli("resources") == 0);
  REQUIRE(run_cli("depth") == 0);

  auto bad = small_run();
  bad["steps"] = -1;
  write_json(dir / "bad.json", bad);
  REQUIRE(run_cli("run --config " + (dir / "bad.json").string()) == 2);
  REQUIRE(run_cli("validate-config --config " + (dir / "bad.json").string()) == 2);
  REQUIRE(run_cli("run --config " + (dir / "missing.json").string()) == 2);
  REQUIRE(run_cli("sweep --config " + (dir / "run.json").string()) == 2);
  REQUIRE(run_cli("run --format xml --config " + (dir / "run.json").string()) == 2);

  // JSON has no NaN literal; overflow in the generator produces one.
  auto huge = small_run();
  huge["model"]["U"] = 1e308;
  huge["model"]["omega0"] = 1e308;
  write_json(dir / "huge.json", huge);
  REQUIRE(run_cli("run --config " + (dir / "huge.json").string() + " --out " + dir.string()) == 3);
}
