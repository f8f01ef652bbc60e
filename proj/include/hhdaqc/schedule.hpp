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

// Digital-analog Trotter schedule: per step, an analog star block sandwiched
// by Hadamards, the horizontal hopping lines as Clifford-conjugated two-body
// analog blocks, and the vertical strings through a pi/4 rotation ladder.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hhdaqc/device.hpp"
#include "hhdaqc/evolve.hpp"
#include "hhdaqc/model.hpp"
#include "hhdaqc/pauli_string.hpp"
#include "hhdaqc/tensor.hpp"

namespace hhdaqc {

enum class BlockKind { HadamardAll, AnalogStar, Rotation, Analog };
enum class TrotterPart { Star, Horizontal, Vertical };

inline std::string to_string(BlockKind k) {
  switch (k) {
    case BlockKind::HadamardAll: return "hadamard_all";
    case BlockKind::AnalogStar: return "analog_star";
    case BlockKind::Rotation: return "rotation";
    case BlockKind::Analog: return "analog";
  }
  return "?";
}

inline std::string to_string(TrotterPart p) {
  switch (p) {
    case TrotterPart::Star: return "star";
    case TrotterPart::Horizontal: return "horizontal";
    case TrotterPart::Vertical: return "vertical";
  }
  return "?";
}

inline BlockKind block_kind_from_string(const std::string& s) {
  for (auto k : {BlockKind::HadamardAll, BlockKind::AnalogStar, BlockKind::Rotation, BlockKind::Analog}) {
    if (to_string(k) == s) return k;
  }
  throw DomainError("unknown block kind '" + s + "'");
}

inline TrotterPart trotter_part_from_string(const std::string& s) {
  for (auto p : {TrotterPart::Star, TrotterPart::Horizontal, TrotterPart::Vertical}) {
    if (to_string(p) == s) return p;
  }
  throw DomainError("unknown Trotter part '" + s + "'");
}

using PauliTerm = StringTerm;

/// exp(-i angle sum_k coeff_k P_k) on an adjacent qubit pair (a, a + 1).
struct TwoQubitGate {
  std::size_t a = 0;
  std::size_t b = 1;
  std::vector<PauliTerm> terms;
  double angle = 0.0;

  [[nodiscard]] CMatrix generator() const {
    CMatrix g = CMatrix::Zero(4, 4);
    for (const auto& t : terms) {
      g += t.coeff * Eigen::kroneckerProduct(pauli_matrix(t.string.at(a)), pauli_matrix(t.string.at(b))).eval();
    }
    return g;
  }
  [[nodiscard]] CMatrix unitary() const { return expm_hermitian(generator(), angle); }

  /// One device preset per term; more than one marks a composite setting
  /// (realized as consecutive commuting settings).
  [[nodiscard]] std::vector<std::string> presets() const {
    std::vector<std::string> out;
    for (const auto& t : terms) {
      const double sign = (angle == 0.0 ? 1.0 : angle) * t.coeff;
      out.push_back(preset_name(t.string.at(a), t.string.at(b), sign));
    }
    return out;
  }
};

/// One circuit layer.
struct Block {
  BlockKind kind = BlockKind::HadamardAll;
  TrotterPart part = TrotterPart::Star;
  std::string label;
  double time = 0.0;  ///< analog duration; unused for rotations (angle lives on the gate)
  std::vector<TwoQubitGate> gates;

  [[nodiscard]] bool is_analog() const { return kind == BlockKind::AnalogStar || kind == BlockKind::Analog; }

  [[nodiscard]] std::vector<std::string> presets() const {
    if (kind == BlockKind::AnalogStar) return {"XX+", "star-QR"};
    std::vector<std::string> out;
    for (const auto& g : gates) {
      for (auto& p : g.presets()) {
        if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
      }
    }
    return out;
  }

  /// Gates in one layer must act on disjoint adjacent pairs with Hermitian generators.
  void validate() const {
    std::vector<std::size_t> used;
    for (const auto& g : gates) {
      if (g.b != g.a + 1) throw DomainError("Block '" + label + "': gate on non-adjacent qubits");
      for (auto q : {g.a, g.b}) {
        if (std::find(used.begin(), used.end(), q) != used.end()) {
          throw DomainError("Block '" + label + "': qubit " + std::to_string(q) + " used twice");
        }
        used.push_back(q);
      }
      const CMatrix h = g.generator();
      if ((h - h.adjoint()).norm() > 1e-12) throw DomainError("Block '" + label + "': generator not Hermitian");
    }
  }
};

inline std::vector<TrotterPart> default_trotter_order() {
  return {TrotterPart::Star, TrotterPart::Horizontal, TrotterPart::Vertical};
}

struct Schedule {
  HHParams params;
  double t_final = 0.0;
  std::size_t steps = 0;
  std::vector<TrotterPart> order = default_trotter_order();
  std::vector<Block> step;  ///< layers of one Trotter step, in time order

  [[nodiscard]] double dt() const { return steps == 0 ? 0.0 : t_final / static_cast<double>(steps); }
  [[nodiscard]] std::size_t layers_per_step() const { return step.size(); }
  [[nodiscard]] std::size_t depth() const { return steps * step.size(); }
};

namespace detail {

/// Conjugate a string through quarter rotations: with R_k = exp(-i pi/4 A_k),
/// exp(-i t T) = R_1 .. R_m exp(-i t T_m) R_m^dag .. R_1^dag, T_k = R_k^dag T_{k-1} R_k.
inline PauliTerm conjugate_through(const PauliTerm& t, const std::vector<PauliString>& gens) {
  PauliString s = t.string;
  for (const auto& a : gens) s = conjugate_by_quarter_rotation(s, a);
  const double sign = s.real_sign();
  s.multiply_phase(-s.phase());
  return {s, t.coeff * sign};
}

inline PauliString two_letter(std::size_t a, Pauli pa, std::size_t b, Pauli pb) {
  PauliString s;
  s.set(a, pa);
  s.set(b, pb);
  return s;
}

/// Group 2-local core terms by qubit pair into gates.
inline std::vector<TwoQubitGate> gather_cores(const std::vector<PauliTerm>& cores, double angle) {
  std::map<std::size_t, TwoQubitGate> by_pair;
  for (const auto& c : cores) {
    const auto& l = c.string.letters();
    if (l.size() != 2) throw NumericalError("schedule: conjugated core is not two-local");
    const std::size_t a = l.begin()->first;
    const std::size_t b = std::next(l.begin())->first;
    if (b != a + 1) throw NumericalError("schedule: conjugated core is not on adjacent qubits");
    auto& g = by_pair[a];
    g.a = a;
    g.b = b;
    g.angle = angle;
    g.terms.push_back(c);
  }
  std::vector<TwoQubitGate> out;
  for (auto& [a, g] : by_pair) out.push_back(std::move(g));
  return out;
}

inline TwoQubitGate rotation_gate(const PauliString& gen, double angle) {
  const auto& l = gen.letters();
  TwoQubitGate g;
  g.a = l.begin()->first;
  g.b = std::next(l.begin())->first;
  g.terms.push_back({gen, 1.0});
  g.angle = angle;
  return g;
}

inline Block rotation_block(std::string label, TrotterPart part, const std::vector<PauliString>& gens, double angle) {
  Block b{BlockKind::Rotation, part, std::move(label), 0.0, {}};
  for (const auto& g : gens) b.gates.push_back(rotation_gate(g, angle));
  return b;
}

inline char lower(Pauli p) { return static_cast<char>(pauli_char(p) - 'A' + 'a'); }

}  // namespace detail

/// Six layers per step: for each line D in {X, Y}, U_DD^dag, the conjugated
/// two-body analog block for dt, then U_DD. Empty when there are no horizontal bonds.
inline std::vector<Block> horizontal_blocks(const HHParams& p, double dt) {
  const auto terms = hopping_terms(p).horizontal;
  std::vector<Block> out;
  if (terms.empty()) return out;
  constexpr double q = std::numbers::pi / 4;
  for (Pauli d : {Pauli::X, Pauli::Y}) {
    const Pauli other = d == Pauli::X ? Pauli::Y : Pauli::X;
    std::vector<PauliString> gens;
    for (const auto& bond : lattice_bonds(p.lattice)) {
      if (!bond.horizontal()) continue;
      gens.push_back(detail::two_letter(2 * bond.from + 1, d, 2 * bond.from + 2, d));
    }
    std::vector<PauliTerm> cores;
    for (const auto& t : terms) {
      if (t.string.letters().begin()->second != d) continue;
      cores.push_back(detail::conjugate_through(t, gens));
    }
    const std::string uname = std::string("U_") + detail::lower(d) + detail::lower(d);
    const std::string core = std::string("U_") + detail::lower(d) + detail::lower(other);
    out.push_back(detail::rotation_block(uname + "^dag", TrotterPart::Horizontal, gens, -q));
    out.push_back({BlockKind::Analog, TrotterPart::Horizontal, core, dt, detail::gather_cores(cores, dt)});
    out.push_back(detail::rotation_block(uname, TrotterPart::Horizontal, gens, q));
  }
  return out;
}

/// Ladder generators for one vertical string on qubits p .. p + 2l: stage k
/// moves the left end (k < l - 1) and the right end (k < l) one qubit inward,
/// leaving a core on (p + l - 1, p + l). Returns the generators per stage.
inline std::vector<std::vector<PauliString>> vertical_ladder(const PauliString& string, std::size_t rows) {
  const auto& l = string.letters();
  const std::size_t p = l.begin()->first;
  const std::size_t q = l.rbegin()->first;
  if (q != p + 2 * rows) throw DomainError("vertical_ladder: string does not span 2l + 1 qubits");
  std::vector<std::vector<PauliString>> stages;
  PauliString cur = string;
  std::size_t left = p;
  std::size_t right = q;
  for (std::size_t k = 0; k < rows; ++k) {
    std::vector<PauliString> stage;
    if (k + 1 < rows) {
      const Pauli e = cur.at(left);
      // X end: X_a Y_{a+1}; Y end: Y_a X_{a+1}.
      stage.push_back(detail::two_letter(left, e, left + 1, e == Pauli::X ? Pauli::Y : Pauli::X));
      ++left;
    }
    {
      const Pauli e = cur.at(right);
      stage.push_back(detail::two_letter(right - 1, e == Pauli::X ? Pauli::Y : Pauli::X, right, e));
      --right;
    }
    for (const auto& a : stage) cur = conjugate_by_quarter_rotation(cur, a);
    stages.push_back(std::move(stage));
  }
  return stages;
}

/// Vertical strings grouped by start qubit mod (2l + 1) so that strings in a
/// group have disjoint supports; each group and direction costs 2l + 1 layers.
inline std::vector<Block> vertical_blocks(const HHParams& p, double dt) {
  const auto terms = hopping_terms(p).vertical;
  std::vector<Block> out;
  if (terms.empty()) return out;
  const std::size_t rows = p.lattice.rows;
  const std::size_t span = 2 * rows + 1;
  constexpr double q = std::numbers::pi / 4;
  for (Pauli d : {Pauli::X, Pauli::Y}) {
    std::map<std::size_t, std::vector<PauliTerm>> groups;
    for (const auto& t : terms) {
      const auto& l = t.string.letters();
      if (l.begin()->second != d) continue;
      groups[l.begin()->first % span].push_back(t);
    }
    for (const auto& [g, members] : groups) {
      std::vector<std::vector<PauliString>> stages(rows);
      std::vector<PauliTerm> cores;
      for (const auto& t : members) {
        const auto ladder = vertical_ladder(t.string, rows);
        std::vector<PauliString> flat;
        for (std::size_t k = 0; k < rows; ++k) {
          for (const auto& a : ladder[k]) {
            stages[k].push_back(a);
            flat.push_back(a);
          }
        }
        cores.push_back(detail::conjugate_through(t, flat));
      }
      const std::string tag = std::string(1, pauli_char(d)) + "-group" + std::to_string(g);
      for (std::size_t k = 0; k < rows; ++k) {
        out.push_back(detail::rotation_block("ladder^dag " + tag + " stage " + std::to_string(k), TrotterPart::Vertical,
                                             stages[k], -q));
      }
      out.push_back({BlockKind::Analog, TrotterPart::Vertical, "core " + tag, dt, detail::gather_cores(cores, dt)});
      for (std::size_t k = rows; k-- > 0;) {
        out.push_back(detail::rotation_block("ladder " + tag + " stage " + std::to_string(k), TrotterPart::Vertical,
                                             stages[k], q));
      }
    }
  }
  return out;
}

inline std::vector<Block> star_blocks(double dt) {
  return {{BlockKind::HadamardAll, TrotterPart::Star, "H_all", 0.0, {}},
          {BlockKind::AnalogStar, TrotterPart::Star, "U_star", dt, {}},
          {BlockKind::HadamardAll, TrotterPart::Star, "H_all", 0.0, {}}};
}

inline Schedule schedule_compile(const HHParams& params, double t_final, std::size_t steps,
                                 std::vector<TrotterPart> order = default_trotter_order()) {
  params.validate();
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw DomainError("schedule_compile: t_final must be >= 0");
  {
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != std::vector<TrotterPart>{TrotterPart::Star, TrotterPart::Horizontal, TrotterPart::Vertical}) {
      throw DomainError("schedule_compile: order must be a permutation of star, horizontal, vertical");
    }
  }
  Schedule s{params, t_final, steps, order, {}};
  if (steps == 0) return s;
  const double dt = s.dt();
  for (auto part : order) {
    std::vector<Block> blocks;
    switch (part) {
      case TrotterPart::Star: blocks = star_blocks(dt); break;
      case TrotterPart::Horizontal: blocks = horizontal_blocks(params, dt); break;
      case TrotterPart::Vertical: blocks = vertical_blocks(params, dt); break;
    }
    for (auto& b : blocks) {
      b.validate();
      s.step.push_back(std::move(b));
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Depth accounting
// ---------------------------------------------------------------------------

struct DepthReport {
  std::size_t per_step;        ///< closed form: 9 for l = 1, else 2l(2l + 1) + 9
  std::size_t total;           ///< closed form: 2 N l (2l + 1) + 9
  std::size_t compiled_per_step;
  std::size_t compiled_total;  ///< N * compiled_per_step
};

inline DepthReport circuit_depth(std::size_t rows, std::size_t cols, std::size_t steps) {
  if (rows == 0 || cols == 0) throw DomainError("circuit_depth: l and h must be >= 1");
  if (rows > cols) throw DomainError("circuit_depth: l must not exceed h");
  DepthReport r{};
  const std::size_t vert = 2 * rows * (2 * rows + 1);
  r.per_step = rows == 1 ? 9 : vert + 9;
  r.total = steps * vert + 9;
  HHParams p;
  p.lattice = {rows, cols};
  p.boson_levels = 2;
  const Schedule s = schedule_compile(p, 1.0, 1);
  r.compiled_per_step = s.layers_per_step();
  r.compiled_total = steps * r.compiled_per_step;
  return r;
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

/// exp(-i dt G) for one site in the Hadamard frame, on [L, R, mode].
inline CMatrix star_site_unitary(const HHParams& p, double dt) {
  const CMatrix g = site_block_generator(p);
  CMatrix h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  const auto n = static_cast<Index>(p.boson_levels);
  const CMatrix hh = Eigen::kroneckerProduct(Eigen::kroneckerProduct(h, h).eval(), CMatrix::Identity(n, n)).eval();
  return expm_hermitian(hh * g * hh, dt);
}

inline CMatrix hadamard_matrix() {
  CMatrix h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

struct LocalUnitary {
  std::vector<std::size_t> subsystems;
  LocalIndexer indexer;
  CMatrix u;
};

/// Precomputed local unitaries for every layer of a schedule.
class ScheduleExecutor {
 public:
  explicit ScheduleExecutor(Schedule s) : schedule_(std::move(s)), space_(make_space(schedule_.params)) {
    const auto& p = schedule_.params;
    for (const auto& b : schedule_.step) {
      std::vector<LocalUnitary> ops;
      switch (b.kind) {
        case BlockKind::HadamardAll: {
          const CMatrix h = hadamard_matrix();
          for (std::size_t q = 0; q < space_.n_qubits(); ++q) ops.push_back(make({q}, h));
          break;
        }
        case BlockKind::AnalogStar: {
          const CMatrix u = star_site_unitary(p, b.time);
          for (std::size_t s = 0; s < p.sites(); ++s) {
            ops.push_back(make({fermion_qubit(s, Spin::Up), fermion_qubit(s, Spin::Down), space_.mode(s)}, u));
          }
          break;
        }
        case BlockKind::Rotation:
        case BlockKind::Analog:
          for (const auto& g : b.gates) ops.push_back(make({g.a, g.b}, g.unitary()));
          break;
      }
      blocks_.push_back(std::move(ops));
    }
  }

  [[nodiscard]] const Schedule& schedule() const { return schedule_; }
  [[nodiscard]] const HilbertSpace& space() const { return space_; }
  [[nodiscard]] const std::vector<LocalUnitary>& ops(std::size_t layer) const { return blocks_.at(layer); }

  static void apply(const LocalUnitary& op, StateVector& psi) { op.indexer.apply(op.u, psi.data()); }
  static void apply(const LocalUnitary& op, DensityMatrix& rho) { conjugate_local(rho, op.indexer, op.u); }

  /// One Trotter step; hook(layer_index, block, state) runs after each layer.
  template <class State, class Hook>
  void run_step(State& state, Hook&& hook) const {
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      for (const auto& op : blocks_[i]) apply(op, state);
      hook(i, schedule_.step[i], state);
    }
  }

  template <class State>
  void run_step(State& state) const {
    run_step(state, [](std::size_t, const Block&, State&) {});
  }

  /// State after every step, starting with the initial one at t = 0.
  template <class State, class Hook>
  Trajectory<State> run(const State& initial, Hook&& hook) const {
    if (static_cast<std::size_t>(initial.rows()) != space_.dim()) throw DomainError("ScheduleExecutor: dimension mismatch");
    Trajectory<State> out;
    State cur = initial;
    out.push(0.0, cur);
    const double dt = schedule_.dt();
    for (std::size_t k = 1; k <= schedule_.steps; ++k) {
      run_step(cur, hook);
      out.push(dt * static_cast<double>(k), cur);
    }
    return out;
  }

  template <class State>
  Trajectory<State> run(const State& initial) const {
    return run(initial, [](std::size_t, const Block&, State&) {});
  }

 private:
  LocalUnitary make(std::vector<std::size_t> subs, const CMatrix& u) const {
    LocalIndexer idx(space_.layout(), subs);
    return {std::move(subs), std::move(idx), u};
  }

  Schedule schedule_;
  HilbertSpace space_;
  std::vector<std::vector<LocalUnitary>> blocks_;
};

/// Ideal DAQC trajectory: the state after each of the N Trotter steps.
inline PureTrajectory daqc_evolve(const HHParams& params, const StateVector& psi0, double t_final, std::size_t steps,
                                  std::vector<TrotterPart> order = default_trotter_order()) {
  if (steps == 0) throw DomainError("daqc_evolve: N must be >= 1");
  return ScheduleExecutor(schedule_compile(params, t_final, steps, std::move(order))).run(psi0);
}

/// Single parts as standalone evolutions, for testing and inspection.
inline void analog_star(const HHParams& p, double t, StateVector& psi) {
  if (t < 0.0) throw DomainError("analog_star: t must be >= 0");
  const HilbertSpace space = make_space(p);
  const CMatrix h = hadamard_matrix();
  const CMatrix u = star_site_unitary(p, t);
  for (std::size_t q = 0; q < space.n_qubits(); ++q) apply_local(psi, space.layout(), std::vector{q}, h);
  for (std::size_t s = 0; s < p.sites(); ++s) {
    apply_local(psi, space.layout(), std::vector{fermion_qubit(s, Spin::Up), fermion_qubit(s, Spin::Down), space.mode(s)},
                u);
  }
  for (std::size_t q = 0; q < space.n_qubits(); ++q) apply_local(psi, space.layout(), std::vector{q}, h);
}

inline void apply_blocks(const HHParams& p, const std::vector<Block>& blocks, StateVector& psi) {
  const HilbertSpace space = make_space(p);
  for (const auto& b : blocks) {
    for (const auto& g : b.gates) apply_local(psi, space.layout(), std::vector{g.a, g.b}, g.unitary());
  }
}

inline void horizontal_step(const HHParams& p, double dt, StateVector& psi) {
  if (dt < 0.0) throw DomainError("horizontal_step: dt must be >= 0");
  apply_blocks(p, horizontal_blocks(p, dt), psi);
}

/// Identity for l = 1 (no vertical bonds); callers can check has_vertical_bonds().
inline void vertical_step(const HHParams& p, double dt, StateVector& psi) {
  if (dt < 0.0) throw DomainError("vertical_step: dt must be >= 0");
  apply_blocks(p, vertical_blocks(p, dt), psi);
}

inline bool has_vertical_bonds(const Lattice& lat) { return lat.rows > 1 && lat.cols > 1; }

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline constexpr const char* kScheduleFormat = "hhdaqc.schedule";
inline constexpr int kScheduleVersion = 1;

inline PauliString parse_pauli_label(const std::string& label) {
  PauliString s;
  if (label == "I") return s;
  std::size_t i = 0;
  while (i < label.size()) {
    const Pauli p = pauli_from_char(label[i++]);
    std::size_t j = i;
    while (j < label.size() && std::isdigit(static_cast<unsigned char>(label[j]))) ++j;
    if (j == i) throw DomainError("bad Pauli label '" + label + "'");
    s.set(static_cast<std::size_t>(std::stoul(label.substr(i, j - i))), p);
    i = j;
  }
  return s;
}

inline nlohmann::json schedule_to_json(const Schedule& s) {
  using nlohmann::json;
  json blocks = json::array();
  for (const auto& b : s.step) {
    json gates = json::array();
    for (const auto& g : b.gates) {
      json terms = json::array();
      for (const auto& t : g.terms) terms.push_back({{"pauli", t.string.label()}, {"coeff", t.coeff}});
      gates.push_back({{"qubits", {g.a, g.b}}, {"angle", g.angle}, {"terms", terms}, {"presets", g.presets()}});
    }
    blocks.push_back({{"kind", to_string(b.kind)},
                      {"part", to_string(b.part)},
                      {"label", b.label},
                      {"time", b.time},
                      {"presets", b.presets()},
                      {"gates", gates}});
  }
  json order = json::array();
  for (auto p : s.order) order.push_back(to_string(p));
  const auto& p = s.params;
  return {{"format", kScheduleFormat},
          {"version", kScheduleVersion},
          {"params",
           {{"omega0", p.omega0},
            {"U", p.U},
            {"k", p.k},
            {"g", p.g},
            {"lattice", {{"rows", p.lattice.rows}, {"cols", p.lattice.cols}}},
            {"boson_levels", p.boson_levels}}},
          {"t_final", s.t_final},
          {"steps", s.steps},
          {"order", order},
          {"layers_per_step", s.layers_per_step()},
          {"depth", s.depth()},
          {"step", blocks}};
}

inline Schedule schedule_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != kScheduleFormat) throw DomainError("schedule: unexpected format tag");
  if (j.value("version", 0) != kScheduleVersion) throw DomainError("schedule: unsupported version");
  Schedule s;
  const auto& p = j.at("params");
  s.params.omega0 = p.at("omega0").get<double>();
  s.params.U = p.at("U").get<double>();
  s.params.k = p.at("k").get<double>();
  s.params.g = p.at("g").get<double>();
  s.params.lattice = {p.at("lattice").at("rows").get<std::size_t>(), p.at("lattice").at("cols").get<std::size_t>()};
  s.params.boson_levels = p.at("boson_levels").get<std::size_t>();
  s.t_final = j.at("t_final").get<double>();
  s.steps = j.at("steps").get<std::size_t>();
  s.order.clear();
  for (const auto& o : j.at("order")) s.order.push_back(trotter_part_from_string(o.get<std::string>()));
  for (const auto& jb : j.at("step")) {
    Block b;
    b.kind = block_kind_from_string(jb.at("kind").get<std::string>());
    b.part = trotter_part_from_string(jb.at("part").get<std::string>());
    b.label = jb.at("label").get<std::string>();
    b.time = jb.at("time").get<double>();
    for (const auto& jg : jb.at("gates")) {
      TwoQubitGate g;
      g.a = jg.at("qubits").at(0).get<std::size_t>();
      g.b = jg.at("qubits").at(1).get<std::size_t>();
      g.angle = jg.at("angle").get<double>();
      for (const auto& jt : jg.at("terms")) {
        g.terms.push_back({parse_pauli_label(jt.at("pauli").get<std::string>()), jt.at("coeff").get<double>()});
      }
      b.gates.push_back(std::move(g));
    }
    b.validate();
    s.step.push_back(std::move(b));
  }
  return s;
}

}  // namespace hhdaqc
