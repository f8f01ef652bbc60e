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


#pragma once

// Experiment orchestration behind the command-line tool: JSON configs with
// field-path errors, single runs, parameter sweeps, and resource reports.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "hhdaqc/channels.hpp"
#include "hhdaqc/digital.hpp"
#include "hhdaqc/evolve.hpp"
#include "hhdaqc/model.hpp"
#include "hhdaqc/observables.hpp"
#include "hhdaqc/schedule.hpp"

namespace hhdaqc {

inline constexpr const char* kVersion = "0.1.0";

/// Malformed or inconsistent configuration. `path` names the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& msg)
      : std::runtime_error(path + ": " + msg), path_(std::move(path)) {}
  [[nodiscard]] const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class Evolution { Exact, Daqc, Digital };

inline std::string to_string(Evolution e) {
  switch (e) {
    case Evolution::Exact: return "exact";
    case Evolution::Daqc: return "daqc";
    case Evolution::Digital: return "digital";
  }
  return "?";
}

struct RunConfig {
  std::string name = "run";
  HHParams params;
  Evolution evolution = Evolution::Daqc;
  std::size_t steps = 50;
  double t_final = 1.0;
  std::size_t samples = 0;  ///< exact runs only; 0 means steps + 1
  std::vector<TrotterPart> order = default_trotter_order();
  std::optional<NoiseConfig> noise;
  std::vector<std::size_t> initial_state;
  std::uint64_t seed = 0;  ///< echoed; no current option draws random numbers
};

enum class SweepMetric { FinalFidelity, MinFidelity };

struct SweepAxis {
  std::string param;
  double min = 0.0;
  double max = 0.0;
  std::size_t points = 1;

  [[nodiscard]] std::vector<double> values() const {
    if (min == max || points == 1) return {min};
    std::vector<double> v(points);
    for (std::size_t i = 0; i < points; ++i) {
      v[i] = min + (max - min) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return v;
  }
};

struct SweepConfig {
  std::string name = "sweep";
  RunConfig base;
  SweepAxis axis1;
  SweepAxis axis2;
  SweepMetric metric = SweepMetric::FinalFidelity;
};

/// Geometry and truncations for the `resources` and `depth` reports.
struct ReportConfig {
  std::vector<Lattice> lattices{{1, 2}};
  std::size_t steps = 50;
  std::vector<std::size_t> levels{2, 4, 8, 16};
};

/// Rectangular numeric table with named columns.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// ---------------------------------------------------------------------------
// Parsing

namespace config_detail {

using nlohmann::json;

inline const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

inline double number(const json& obj, const std::string& path, const char* key, std::optional<double> fallback) {
  const json* v = find(obj, key);
  if (!v) {
    if (fallback) return *fallback;
    throw ConfigError(path + "." + key, "required field is missing");
  }
  if (!v->is_number()) throw ConfigError(path + "." + key, "expected a number");
  const double d = v->get<double>();
  if (!std::isfinite(d)) throw ConfigError(path + "." + key, "must be finite");
  return d;
}

inline std::size_t count(const json& obj, const std::string& path, const char* key, std::optional<std::size_t> fallback) {
  const json* v = find(obj, key);
  if (!v) {
    if (fallback) return *fallback;
    throw ConfigError(path + "." + key, "required field is missing");
  }
  if (!v->is_number_integer() || v->get<long long>() < 0) {
    throw ConfigError(path + "." + key, "expected a non-negative integer");
  }
  return v->get<std::size_t>();
}

inline std::string string(const json& obj, const std::string& path, const char* key, std::optional<std::string> fallback) {
  const json* v = find(obj, key);
  if (!v) {
    if (fallback) return *fallback;
    throw ConfigError(path + "." + key, "required field is missing");
  }
  if (!v->is_string()) throw ConfigError(path + "." + key, "expected a string");
  return v->get<std::string>();
}

inline void require_object(const json& v, const std::string& path) {
  if (!v.is_object()) throw ConfigError(path, "expected an object");
}

inline void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return it.key() == k; })) {
      throw ConfigError(path + "." + it.key(), "unknown field");
    }
  }
}

inline Lattice lattice(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
    throw ConfigError(path, "expected [rows, cols]");
  }
  if (v[0].get<long long>() < 1 || v[1].get<long long>() < 1) throw ConfigError(path, "rows and cols must be >= 1");
  Lattice l{v[0].get<std::size_t>(), v[1].get<std::size_t>()};
  if (l.rows > l.cols) throw ConfigError(path, "rows (the short side) must not exceed cols");
  return l;
}

inline HHParams model(const json& v, const std::string& path) {
  require_object(v, path);
  reject_unknown(v, path, {"omega0", "U", "k", "g", "lattice", "boson_levels"});
  HHParams p;
  p.omega0 = number(v, path, "omega0", std::nullopt);
  p.U = number(v, path, "U", std::nullopt);
  p.k = number(v, path, "k", 1.0);
  p.g = number(v, path, "g", std::nullopt);
  if (const json* l = find(v, "lattice")) p.lattice = lattice(*l, path + ".lattice");
  p.boson_levels = count(v, path, "boson_levels", 8);
  try {
    p.validate();
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
  return p;
}

inline NoiseConfig noise(const json& v, const std::string& path) {
  require_object(v, path);
  reject_unknown(v, path, {"t1_qubit", "t1_resonator", "dur_analog", "dur_digital", "gate_error_1q", "gate_error_2q"});
  const NoiseConfig d;
  NoiseConfig c;
  c.t1_qubit = number(v, path, "t1_qubit", d.t1_qubit);
  c.t1_resonator = number(v, path, "t1_resonator", d.t1_resonator);
  c.dur_analog = number(v, path, "dur_analog", d.dur_analog);
  c.dur_digital = number(v, path, "dur_digital", d.dur_digital);
  c.gate_error_1q = number(v, path, "gate_error_1q", d.gate_error_1q);
  c.gate_error_2q = number(v, path, "gate_error_2q", d.gate_error_2q);
  try {
    c.validate();
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
  return c;
}

inline std::vector<std::size_t> occupations(const std::string& s, const std::string& path) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError(path, "empty entry in occupation string");
    item = item.substr(b, e - b + 1);
    if (item.find_first_not_of("0123456789") != std::string::npos) {
      throw ConfigError(path, "entries must be non-negative integers");
    }
    out.push_back(std::stoul(item));
  }
  return out;
}

inline Evolution evolution(const std::string& s, const std::string& path) {
  if (s == "exact") return Evolution::Exact;
  if (s == "daqc") return Evolution::Daqc;
  if (s == "digital") return Evolution::Digital;
  throw ConfigError(path, "expected one of exact, daqc, digital");
}

}  // namespace config_detail

/// Default initial state: half filling with alternating spins (up on even
/// sites, down on odd ones), modes in vacuum. Two sites give 0,1,1,0,0,0.
inline std::vector<std::size_t> default_initial_state(const HHParams& p) {
  std::vector<std::size_t> occ(p.n_qubits() + p.sites(), 0);
  for (std::size_t s = 0; s < p.sites(); ++s) {
    const Spin filled = s % 2 == 0 ? Spin::Up : Spin::Down;
    const Spin empty = s % 2 == 0 ? Spin::Down : Spin::Up;
    occ[fermion_qubit(s, filled)] = 0;
    occ[fermion_qubit(s, empty)] = 1;
  }
  return occ;
}

inline RunConfig parse_run_config(const nlohmann::json& j, const std::string& path = "config") {
  using namespace config_detail;
  require_object(j, path);
  reject_unknown(j, path, {"kind", "name", "model", "evolution", "steps", "t_final", "samples", "trotter_order", "noise",
                           "initial_state", "seed"});
  RunConfig c;
  c.name = string(j, path, "name", std::string("run"));
  if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos) {
    throw ConfigError(path + ".name", "must be a non-empty file stem");
  }
  const json* m = find(j, "model");
  if (!m) throw ConfigError(path + ".model", "required field is missing");
  c.params = model(*m, path + ".model");
  c.evolution = evolution(string(j, path, "evolution", std::string("daqc")), path + ".evolution");
  c.steps = count(j, path, "steps", 50);
  if (c.steps == 0) throw ConfigError(path + ".steps", "must be >= 1");
  c.t_final = number(j, path, "t_final", std::nullopt);
  if (c.t_final <= 0.0) throw ConfigError(path + ".t_final", "must be > 0");
  c.samples = count(j, path, "samples", 0);
  if (c.samples != 0 && c.evolution != Evolution::Exact) {
    throw ConfigError(path + ".samples", "only exact runs take a sample count; Trotter runs record every step");
  }
  if (c.samples == 1) throw ConfigError(path + ".samples", "must be >= 2");
  if (const json* o = find(j, "trotter_order")) {
    if (!o->is_array()) throw ConfigError(path + ".trotter_order", "expected an array of part names");
    c.order.clear();
    for (std::size_t i = 0; i < o->size(); ++i) {
      const std::string ip = path + ".trotter_order[" + std::to_string(i) + "]";
      if (!(*o)[i].is_string()) throw ConfigError(ip, "expected a string");
      try {
        c.order.push_back(trotter_part_from_string((*o)[i].get<std::string>()));
      } catch (const DomainError& e) {
        throw ConfigError(ip, e.what());
      }
    }
    auto sorted = c.order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != std::vector<TrotterPart>{TrotterPart::Star, TrotterPart::Horizontal, TrotterPart::Vertical}) {
      throw ConfigError(path + ".trotter_order", "must list star, horizontal, vertical exactly once");
    }
  }
  if (const json* n = find(j, "noise")) {
    if (c.evolution == Evolution::Exact) throw ConfigError(path + ".noise", "exact evolution takes no noise model");
    c.noise = noise(*n, path + ".noise");
  }
  if (c.evolution == Evolution::Digital) {
    const auto n = c.params.boson_levels;
    if ((n & (n - 1)) != 0) {
      throw ConfigError(path + ".model.boson_levels", "digital evolution needs a power-of-two truncation");
    }
  }
  const std::size_t expected = c.params.n_qubits() + c.params.sites();
  if (const json* s = find(j, "initial_state")) {
    if (!s->is_string()) throw ConfigError(path + ".initial_state", "expected a comma-separated occupation string");
    c.initial_state = occupations(s->get<std::string>(), path + ".initial_state");
  } else {
    c.initial_state = default_initial_state(c.params);
  }
  if (c.initial_state.size() != expected) {
    throw ConfigError(path + ".initial_state", "expected " + std::to_string(expected) + " entries (" +
                                                   std::to_string(c.params.n_qubits()) + " qubits then " +
                                                   std::to_string(c.params.sites()) + " modes)");
  }
  for (std::size_t i = 0; i < expected; ++i) {
    const std::size_t limit = i < c.params.n_qubits() ? 2 : c.params.boson_levels;
    if (c.initial_state[i] >= limit) {
      throw ConfigError(path + ".initial_state", "entry " + std::to_string(i) + " exceeds its subsystem dimension");
    }
  }
  c.seed = count(j, path, "seed", 0);
  return c;
}

inline SweepMetric sweep_metric_from_string(const std::string& s, const std::string& path) {
  if (s == "final_fidelity") return SweepMetric::FinalFidelity;
  if (s == "min_fidelity") return SweepMetric::MinFidelity;
  throw ConfigError(path, "expected final_fidelity or min_fidelity");
}

inline std::string to_string(SweepMetric m) { return m == SweepMetric::FinalFidelity ? "final_fidelity" : "min_fidelity"; }

inline SweepConfig parse_sweep_config(const nlohmann::json& j, const std::string& path = "config") {
  using namespace config_detail;
  require_object(j, path);
  reject_unknown(j, path, {"kind", "name", "base", "axes", "metric"});
  SweepConfig c;
  c.name = string(j, path, "name", std::string("sweep"));
  const json* b = find(j, "base");
  if (!b) throw ConfigError(path + ".base", "required field is missing");
  c.base = parse_run_config(*b, path + ".base");
  if (c.base.evolution == Evolution::Exact) throw ConfigError(path + ".base.evolution", "a sweep compares a Trotterized run against exact");
  const json* axes = find(j, "axes");
  if (!axes || !axes->is_array() || axes->size() != 2) throw ConfigError(path + ".axes", "expected exactly two axes");
  SweepAxis* out[] = {&c.axis1, &c.axis2};
  for (std::size_t i = 0; i < 2; ++i) {
    const std::string ap = path + ".axes[" + std::to_string(i) + "]";
    const json& a = (*axes)[i];
    require_object(a, ap);
    reject_unknown(a, ap, {"param", "min", "max", "points"});
    out[i]->param = string(a, ap, "param", std::nullopt);
    if (out[i]->param != "omega0" && out[i]->param != "U" && out[i]->param != "k" && out[i]->param != "g") {
      throw ConfigError(ap + ".param", "expected one of omega0, U, k, g");
    }
    out[i]->min = number(a, ap, "min", std::nullopt);
    out[i]->max = number(a, ap, "max", std::nullopt);
    out[i]->points = count(a, ap, "points", std::nullopt);
    if (out[i]->points == 0) throw ConfigError(ap + ".points", "must be >= 1");
    if (out[i]->max < out[i]->min) throw ConfigError(ap, "max must be >= min");
  }
  if (c.axis1.param == c.axis2.param) throw ConfigError(path + ".axes", "axes must reference distinct parameters");
  c.metric = sweep_metric_from_string(string(j, path, "metric", std::string("final_fidelity")), path + ".metric");
  return c;
}

inline ReportConfig parse_report_config(const nlohmann::json& j, const std::string& path = "config") {
  using namespace config_detail;
  require_object(j, path);
  reject_unknown(j, path, {"kind", "lattices", "steps", "levels"});
  ReportConfig c;
  if (const json* l = find(j, "lattices")) {
    if (!l->is_array() || l->empty()) throw ConfigError(path + ".lattices", "expected a non-empty array of [rows, cols]");
    c.lattices.clear();
    for (std::size_t i = 0; i < l->size(); ++i) c.lattices.push_back(lattice((*l)[i], path + ".lattices[" + std::to_string(i) + "]"));
  }
  c.steps = count(j, path, "steps", 50);
  if (c.steps == 0) throw ConfigError(path + ".steps", "must be >= 1");
  if (const json* v = find(j, "levels")) {
    if (!v->is_array() || v->empty()) throw ConfigError(path + ".levels", "expected a non-empty array");
    c.levels.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string ip = path + ".levels[" + std::to_string(i) + "]";
      if (!(*v)[i].is_number_integer()) throw ConfigError(ip, "expected an integer");
      const auto n = (*v)[i].get<long long>();
      if (n < 2 || (n & (n - 1)) != 0) throw ConfigError(ip, "must be a power of two >= 2");
      c.levels.push_back(static_cast<std::size_t>(n));
    }
  }
  return c;
}

inline nlohmann::json load_json_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file, "cannot open config file");
  try {
    return nlohmann::json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(file, std::string("JSON syntax error: ") + e.what());
  }
}

/// The "kind" field of a config ("run", "sweep", "resources", "depth").
inline std::string config_kind(const nlohmann::json& j) {
  config_detail::require_object(j, "config");
  return config_detail::string(j, "config", "kind", std::nullopt);
}

// ---------------------------------------------------------------------------
// Echo

inline nlohmann::json to_json(const HHParams& p) {
  return {{"omega0", p.omega0}, {"U", p.U}, {"k", p.k}, {"g", p.g},
          {"lattice", {p.lattice.rows, p.lattice.cols}}, {"boson_levels", p.boson_levels}};
}

inline nlohmann::json to_json(const NoiseConfig& n) {
  return {{"t1_qubit", n.t1_qubit},     {"t1_resonator", n.t1_resonator},   {"dur_analog", n.dur_analog},
          {"dur_digital", n.dur_digital}, {"gate_error_1q", n.gate_error_1q}, {"gate_error_2q", n.gate_error_2q}};
}

inline std::string occupation_string(const std::vector<std::size_t>& occ) {
  std::string s;
  for (std::size_t i = 0; i < occ.size(); ++i) s += (i ? "," : "") + std::to_string(occ[i]);
  return s;
}

inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j{{"kind", "run"},
                   {"name", c.name},
                   {"model", to_json(c.params)},
                   {"evolution", to_string(c.evolution)},
                   {"steps", c.steps},
                   {"t_final", c.t_final},
                   {"initial_state", occupation_string(c.initial_state)},
                   {"seed", c.seed}};
  if (c.samples) j["samples"] = c.samples;
  nlohmann::json order = nlohmann::json::array();
  for (auto p : c.order) order.push_back(to_string(p));
  j["trotter_order"] = order;
  if (c.noise) j["noise"] = to_json(*c.noise);
  return j;
}

inline nlohmann::json to_json(const SweepConfig& c) {
  nlohmann::json axes = nlohmann::json::array();
  for (const auto* a : {&c.axis1, &c.axis2}) {
    axes.push_back({{"param", a->param}, {"min", a->min}, {"max", a->max}, {"points", a->points}});
  }
  return {{"kind", "sweep"}, {"name", c.name}, {"base", to_json(c.base)}, {"axes", axes}, {"metric", to_string(c.metric)}};
}

// ---------------------------------------------------------------------------
// Execution

struct RunResult {
  Table table;
  double final_fidelity = 0.0;
  double min_fidelity = 0.0;
  double seconds = 0.0;
};

namespace runner_detail {

template <class State>
void append_rows(Table& t, const HilbertSpace& space, const std::vector<double>& times, const std::vector<State>& states,
                 const std::vector<double>& fid) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<double> row{times[i], fid[i]};
    double total = 0.0;
    for (std::size_t s = 0; s < space.n_modes(); ++s) {
      const double d = double_occupation(space, states[i], s);
      row.push_back(d);
      total += d;
    }
    row.push_back(total);
    row.push_back(phonon_number(space, states[i]));
    t.rows.push_back(std::move(row));
  }
}

inline void check_finite(const Table& t) {
  for (const auto& r : t.rows) {
    for (double v : r) {
      if (!std::isfinite(v)) throw NumericalError("non-finite value in results");
    }
  }
}

}  // namespace runner_detail

inline std::vector<std::string> run_columns(std::size_t sites) {
  std::vector<std::string> c{"t", "fidelity"};
  for (std::size_t s = 0; s < sites; ++s) c.push_back("double_occ_site" + std::to_string(s + 1));
  c.push_back("total_double_occ");
  c.push_back("phonon_number");
  return c;
}

inline RunResult execute_run(const RunConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  const HilbertSpace space = make_space(c.params);
  const StateVector psi0 = space.basis_state(c.initial_state);
  const ExactPropagator exact(build_spin_boson(c.params).total(), psi0);

  RunResult r;
  r.table.columns = run_columns(c.params.sites());
  std::vector<double> fid;
  if (c.evolution == Evolution::Exact) {
    const std::size_t samples = c.samples ? c.samples : c.steps + 1;
    const auto times = uniform_times(c.t_final, samples - 1);
    PureTrajectory traj;
    for (double t : times) traj.push(t, exact.at(t));
    fid.assign(times.size(), 0.0);
    for (std::size_t i = 0; i < times.size(); ++i) fid[i] = fidelity(traj.states[i], traj.states[i]);
    runner_detail::append_rows(r.table, space, traj.times, traj.states, fid);
  } else if (c.noise) {
    const DensityMatrix rho0 = pure_density(psi0);
    const MixedTrajectory traj = c.evolution == Evolution::Daqc
                                     ? noisy_daqc_evolve(c.params, rho0, c.t_final, c.steps, *c.noise, c.order)
                                     : noisy_digital_evolve(c.params, rho0, c.t_final, c.steps, *c.noise, c.order);
    for (std::size_t i = 0; i < traj.size(); ++i) fid.push_back(fidelity(exact.at(traj.times[i]), traj.states[i]));
    runner_detail::append_rows(r.table, space, traj.times, traj.states, fid);
  } else {
    const PureTrajectory traj = c.evolution == Evolution::Daqc ? daqc_evolve(c.params, psi0, c.t_final, c.steps, c.order)
                                                               : digital_evolve(c.params, psi0, c.t_final, c.steps, c.order);
    for (std::size_t i = 0; i < traj.size(); ++i) fid.push_back(fidelity(exact.at(traj.times[i]), traj.states[i]));
    runner_detail::append_rows(r.table, space, traj.times, traj.states, fid);
  }
  runner_detail::check_finite(r.table);
  r.final_fidelity = fid.back();
  r.min_fidelity = *std::min_element(fid.begin(), fid.end());
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline void set_param(HHParams& p, const std::string& name, double v) {
  if (name == "omega0") p.omega0 = v;
  else if (name == "U") p.U = v;
  else if (name == "k") p.k = v;
  else if (name == "g") p.g = v;
  else throw ConfigError("axes.param", "unknown parameter " + name);
}

struct SweepResult {
  Table table;
  double seconds = 0.0;
};

/// Cells are independent runs; workers pull cell indices from a shared
/// counter and write into preallocated slots, so the output is row-major and
/// independent of the thread count.
inline SweepResult execute_sweep(const SweepConfig& c, std::size_t threads = 1) {
  const auto start = std::chrono::steady_clock::now();
  const auto v1 = c.axis1.values();
  const auto v2 = c.axis2.values();
  const std::size_t cells = v1.size() * v2.size();
  std::vector<RunConfig> runs(cells, c.base);
  for (std::size_t i = 0; i < v1.size(); ++i) {
    for (std::size_t j = 0; j < v2.size(); ++j) {
      RunConfig& rc = runs[i * v2.size() + j];
      set_param(rc.params, c.axis1.param, v1[i]);
      set_param(rc.params, c.axis2.param, v2[j]);
      const std::string cell = "cell (" + c.axis1.param + "=" + std::to_string(v1[i]) + ", " + c.axis2.param + "=" +
                               std::to_string(v2[j]) + ")";
      try {
        rc.params.validate();
      } catch (const DomainError& e) {
        throw ConfigError("axes", cell + ": " + e.what());
      }
    }
  }

  std::vector<double> metric(cells, 0.0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (std::size_t idx = next++; idx < cells; idx = next++) {
      try {
        const RunResult r = execute_run(runs[idx]);
        metric[idx] = c.metric == SweepMetric::FinalFidelity ? r.final_fidelity : r.min_fidelity;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cells;
      }
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(threads, cells));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  SweepResult out;
  out.table.columns = {c.axis1.param, c.axis2.param, to_string(c.metric)};
  for (std::size_t i = 0; i < v1.size(); ++i) {
    for (std::size_t j = 0; j < v2.size(); ++j) out.table.rows.push_back({v1[i], v2[j], metric[i * v2.size() + j]});
  }
  runner_detail::check_finite(out.table);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

/// Per-gate CNOT table; the reference column is NaN where no published count exists.
inline Table resource_table_report(const ReportConfig& c) {
  Table t;
  t.columns = {"kind", "n", "cnots", "one_qubit_gates", "reference_cnots"};
  for (const auto& r : resource_table(c.levels)) {
    t.rows.push_back({static_cast<double>(r.kind), static_cast<double>(r.n), static_cast<double>(r.cnots),
                      static_cast<double>(r.one_qubit_gates),
                      r.reference_cnots ? static_cast<double>(*r.reference_cnots) : std::nan("")});
  }
  return t;
}

/// DAQC layer depth (closed form and compiled) per lattice.
inline Table depth_report(const ReportConfig& c) {
  Table t;
  t.columns = {"rows", "cols", "steps", "per_step", "total", "compiled_per_step", "compiled_total"};
  for (const auto& l : c.lattices) {
    const DepthReport d = circuit_depth(l.rows, l.cols, c.steps);
    t.rows.push_back({static_cast<double>(l.rows), static_cast<double>(l.cols), static_cast<double>(c.steps),
                      static_cast<double>(d.per_step), static_cast<double>(d.total),
                      static_cast<double>(d.compiled_per_step), static_cast<double>(d.compiled_total)});
  }
  return t;
}

/// Gate counts of one digital Trotter step per lattice and truncation.
inline Table digital_scaling_report(const ReportConfig& c) {
  Table t;
  t.columns = {"rows", "cols", "n", "cnots_per_step", "one_qubit_per_step", "cnots_total"};
  for (const auto& l : c.lattices) {
    for (auto n : c.levels) {
      HHParams p;
      p.omega0 = 1.0;
      p.U = 1.0;
      p.g = 1.0;
      p.lattice = l;
      p.boson_levels = n;
      std::size_t cn = 0;
      std::size_t oq = 0;
      for (const auto& term : digital_step_terms(p, 0.1, default_trotter_order())) {
        cn += term.circuit.cnot_count();
        oq += term.circuit.one_qubit_count();
      }
      t.rows.push_back({static_cast<double>(l.rows), static_cast<double>(l.cols), static_cast<double>(n),
                        static_cast<double>(cn), static_cast<double>(oq), static_cast<double>(cn * c.steps)});
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Output

enum class OutputFormat { Csv, Json };

inline std::string format_number(double v) {
  if (std::isnan(v)) return "";
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Cell text; `labels` maps a column name to a code -> text function.
using ColumnLabels = std::vector<std::pair<std::string, std::string (*)(double)>>;

inline std::string cell_text(const Table& t, std::size_t col, double v, const ColumnLabels& labels) {
  for (const auto& [name, fn] : labels) {
    if (t.columns[col] == name) return fn(v);
  }
  return format_number(v);
}

inline void write_csv(std::ostream& os, const Table& t, const ColumnLabels& labels = {}) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell_text(t, i, r[i], labels);
    os << '\n';
  }
}

inline nlohmann::json table_to_json(const Table& t, const ColumnLabels& labels = {}) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    nlohmann::json o = nlohmann::json::object();
    for (std::size_t i = 0; i < r.size(); ++i) {
      bool labelled = false;
      for (const auto& [name, fn] : labels) {
        if (t.columns[i] == name) {
          o[t.columns[i]] = fn(r[i]);
          labelled = true;
        }
      }
      if (labelled) continue;
      if (std::isnan(r[i])) {
        o[t.columns[i]] = nullptr;
      } else {
        o[t.columns[i]] = r[i];
      }
    }
    rows.push_back(o);
  }
  return rows;
}

inline std::string bosonic_kind_label(double code) { return to_string(static_cast<BosonicKind>(static_cast<int>(code))); }

inline const ColumnLabels& resource_labels() {
  static const ColumnLabels labels{{"kind", &bosonic_kind_label}};
  return labels;
}

inline void write_table(std::ostream& os, const Table& t, OutputFormat f, const ColumnLabels& labels = {}) {
  if (f == OutputFormat::Csv) {
    write_csv(os, t, labels);
  } else {
    os << table_to_json(t, labels).dump(2) << '\n';
  }
}

inline nlohmann::json build_info() {
  return {{"hhdaqc", kVersion},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"compiler", __VERSION__},
          {"cxx_standard", __cplusplus}};
}

}  // namespace hhdaqc
