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


// Command-line front end: run, sweep, resources, depth, validate-config.
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 1 anything else (I/O).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "hhdaqc/runner.hpp"

namespace fs = std::filesystem;
using namespace hhdaqc;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string config;
  std::string out;
  std::size_t threads = 1;
  std::string format = "csv";
};

OutputFormat parse_format(const std::string& f) { return f == "json" ? OutputFormat::Json : OutputFormat::Csv; }

std::string extension(OutputFormat f) { return f == OutputFormat::Json ? ".json" : ".csv"; }

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

void write_manifest(const fs::path& dir, const std::string& name, nlohmann::json manifest) {
  manifest["build"] = build_info();
  auto os = open_out(dir / (name + ".manifest.json"));
  os << manifest.dump(2) << '\n';
}

// Companion matplotlib script; plotting stays out of process.
std::string plot_stub(const std::string& data_file, bool sweep) {
  std::string s =
      "#!/usr/bin/env python3\n"
      "import csv, json, pathlib, sys\n"
      "import matplotlib.pyplot as plt\n\n"
      "path = pathlib.Path(__file__).with_name(\"" + data_file + "\")\n"
      "if path.suffix == \".json\":\n"
      "    rows = json.loads(path.read_text())\n"
      "else:\n"
      "    with path.open() as f:\n"
      "        rows = [{k: float(v) for k, v in r.items()} for r in csv.DictReader(f)]\n"
      "cols = list(rows[0].keys())\n";
  if (sweep) {
    s += "x, y, z = cols[0], cols[1], cols[2]\n"
         "xs = sorted({r[x] for r in rows}); ys = sorted({r[y] for r in rows})\n"
         "grid = [[next(r[z] for r in rows if r[x] == a and r[y] == b) for a in xs] for b in ys]\n"
         "plt.pcolormesh(xs, ys, grid, shading=\"nearest\")\n"
         "plt.colorbar(label=z); plt.xlabel(x); plt.ylabel(y)\n";
  } else {
    s += "t = [r[\"t\"] for r in rows]\n"
         "fig, axes = plt.subplots(len(cols) - 1, 1, sharex=True, figsize=(6, 2 * (len(cols) - 1)))\n"
         "for ax, c in zip(axes, cols[1:]):\n"
         "    ax.plot(t, [r[c] for r in rows]); ax.set_ylabel(c)\n"
         "axes[-1].set_xlabel(\"t\")\n";
  }
  s += "plt.tight_layout()\n"
       "plt.savefig(path.with_suffix(\".png\")) if \"--save\" in sys.argv else plt.show()\n";
  return s;
}

void write_plot_stub(const fs::path& dir, const std::string& name, const std::string& data_file, bool sweep) {
  auto os = open_out(dir / (name + ".plot.py"));
  os << plot_stub(data_file, sweep);
}

nlohmann::json require_kind(const std::string& file, const std::string& kind) {
  nlohmann::json j = load_json_file(file);
  const std::string k = config_kind(j);
  if (k != kind) throw ConfigError("config.kind", "expected \"" + kind + "\", found \"" + k + "\"");
  return j;
}

int cmd_run(const Options& o) {
  const RunConfig cfg = parse_run_config(require_kind(o.config, "run"));
  const RunResult r = execute_run(cfg);
  const OutputFormat f = parse_format(o.format);
  const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  fs::create_directories(dir);
  const std::string file = cfg.name + extension(f);
  {
    auto os = open_out(dir / file);
    write_table(os, r.table, f);
  }
  write_plot_stub(dir, cfg.name, file, false);
  write_manifest(dir, cfg.name,
                 {{"format", "hhdaqc.run-manifest"},
                  {"version", 1},
                  {"config", to_json(cfg)},
                  {"outputs", {file, cfg.name + ".plot.py"}},
                  {"summary", {{"final_fidelity", r.final_fidelity}, {"min_fidelity", r.min_fidelity}}},
                  {"timings", {{"wall_seconds", r.seconds}}}});
  std::cout << cfg.name << ": " << r.table.rows.size() << " samples, final fidelity "
            << format_number(r.final_fidelity) << " -> " << (dir / file).string() << '\n';
  return 0;
}

int cmd_sweep(const Options& o) {
  const SweepConfig cfg = parse_sweep_config(require_kind(o.config, "sweep"));
  const SweepResult r = execute_sweep(cfg, o.threads);
  const OutputFormat f = parse_format(o.format);
  const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  fs::create_directories(dir);
  const std::string file = cfg.name + extension(f);
  {
    auto os = open_out(dir / file);
    write_table(os, r.table, f);
  }
  write_plot_stub(dir, cfg.name, file, true);
  double lo = 1.0;
  for (const auto& row : r.table.rows) lo = std::min(lo, row[2]);
  write_manifest(dir, cfg.name,
                 {{"format", "hhdaqc.sweep-manifest"},
                  {"version", 1},
                  {"config", to_json(cfg)},
                  {"outputs", {file, cfg.name + ".plot.py"}},
                  {"summary", {{"cells", r.table.rows.size()}, {"min_metric", lo}}},
                  {"timings", {{"wall_seconds", r.seconds}, {"threads", o.threads}}}});
  std::cout << cfg.name << ": " << r.table.rows.size() << " cells, min " << to_string(cfg.metric) << ' '
            << format_number(lo) << " -> " << (dir / file).string() << '\n';
  return 0;
}

ReportConfig report_config(const Options& o, const std::string& kind) {
  if (o.config.empty()) {
    ReportConfig c;
    if (kind == "depth") {
      c.lattices.clear();
      for (std::size_t h = 2; h <= 10; ++h) c.lattices.push_back({1, h});
      c.lattices.push_back({2, 2});
      c.lattices.push_back({3, 3});
      c.lattices.push_back({3, 5});
      c.steps = 1;
    }
    return c;
  }
  return parse_report_config(require_kind(o.config, kind));
}

/// Tables go to stdout unless --out is given.
void emit(const Options& o, const std::vector<std::pair<std::string, Table>>& tables, const ColumnLabels& labels = {}) {
  const OutputFormat f = parse_format(o.format);
  if (o.out.empty()) {
    if (f == OutputFormat::Json) {
      nlohmann::json j = nlohmann::json::object();
      for (const auto& [name, t] : tables) j[name] = table_to_json(t, name == "bosonic_gates" ? labels : ColumnLabels{});
      std::cout << j.dump(2) << '\n';
    } else {
      bool first = true;
      for (const auto& [name, t] : tables) {
        if (!first) std::cout << '\n';
        first = false;
        std::cout << "# " << name << '\n';
        write_csv(std::cout, t, name == "bosonic_gates" ? labels : ColumnLabels{});
      }
    }
    return;
  }
  const fs::path dir(o.out);
  fs::create_directories(dir);
  for (const auto& [name, t] : tables) {
    auto os = open_out(dir / (name + extension(f)));
    write_table(os, t, f, name == "bosonic_gates" ? labels : ColumnLabels{});
  }
}

int cmd_resources(const Options& o) {
  const ReportConfig cfg = report_config(o, "resources");
  emit(o,
       {{"bosonic_gates", resource_table_report(cfg)},
        {"daqc_depth", depth_report(cfg)},
        {"digital_step", digital_scaling_report(cfg)}},
       resource_labels());
  return 0;
}

int cmd_depth(const Options& o) {
  emit(o, {{"daqc_depth", depth_report(report_config(o, "depth"))}});
  return 0;
}

int cmd_validate(const Options& o) {
  const nlohmann::json j = load_json_file(o.config);
  const std::string kind = config_kind(j);
  nlohmann::json normalized;
  if (kind == "run") {
    normalized = to_json(parse_run_config(j));
  } else if (kind == "sweep") {
    normalized = to_json(parse_sweep_config(j));
  } else if (kind == "resources" || kind == "depth") {
    parse_report_config(j);
    normalized = j;
  } else {
    throw ConfigError("config.kind", "expected run, sweep, resources or depth");
  }
  std::cout << normalized.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Digital-analog simulation of the Hubbard-Holstein model"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", o.config, "JSON configuration file");
    if (config_required) c->required();
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--format", o.format, "table format")->check(CLI::IsMember({"csv", "json"}));
  };
  auto* run = app.add_subcommand("run", "single time evolution against the exact reference");
  add_common(run, true);
  auto* sweep = app.add_subcommand("sweep", "two-parameter fidelity grid");
  add_common(sweep, true);
  sweep->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  auto* resources = app.add_subcommand("resources", "CNOT counts for bosonic gates and depth scaling");
  add_common(resources, false);
  auto* depth = app.add_subcommand("depth", "DAQC circuit depth per lattice");
  add_common(depth, false);
  auto* validate = app.add_subcommand("validate-config", "parse and check a configuration file");
  validate->add_option("--config", o.config, "JSON configuration file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(o);
    if (*sweep) return cmd_sweep(o);
    if (*resources) return cmd_resources(o);
    if (*depth) return cmd_depth(o);
    if (*validate) return cmd_validate(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
