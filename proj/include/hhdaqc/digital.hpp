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

// Gate-model baseline: every term of the mapped Hamiltonian becomes a
// {Ry, Rz, CNOT} circuit on the fermion qubits plus binary-encoded mode
// registers. Ideal runs apply the exact term unitaries (the circuits reproduce
// them to round-off); noisy runs add per-gate errors for each emitted gate.

#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "hhdaqc/channels.hpp"
#include "hhdaqc/model.hpp"
#include "hhdaqc/schedule.hpp"
#include "hhdaqc/synthesis.hpp"

namespace hhdaqc {

enum class BosonicKind { Rotation, Displacement, ControlledDisplacement };

inline std::string to_string(BosonicKind k) {
  switch (k) {
    case BosonicKind::Rotation: return "rotation";
    case BosonicKind::Displacement: return "displacement";
    case BosonicKind::ControlledDisplacement: return "controlled_displacement";
  }
  return "?";
}

inline std::size_t log2_levels(std::size_t n) {
  if (n < 2 || (n & (n - 1)) != 0) throw DomainError("bosonic gate: truncation must be a power of two >= 2");
  return static_cast<std::size_t>(std::countr_zero(n));
}

/// exp(-i theta G) with G = a^dag a, a^dag + a, or Z (x) (a^dag + a).
struct BosonicGate {
  BosonicKind kind;
  std::size_t levels;
  double theta = 0.3;

  [[nodiscard]] std::size_t n_qubits() const {
    return log2_levels(levels) + (kind == BosonicKind::ControlledDisplacement ? 1 : 0);
  }

  [[nodiscard]] CMatrix unitary() const {
    log2_levels(levels);
    const CMatrix a = ladder(levels, LadderKind::Annihilate).dense();
    const CMatrix x = a + a.adjoint();
    switch (kind) {
      case BosonicKind::Rotation: return ((-kI * theta) * (a.adjoint() * a)).exp();
      case BosonicKind::Displacement: return ((-kI * theta) * x).exp();
      case BosonicKind::ControlledDisplacement: {
        const CMatrix zx = Eigen::kroneckerProduct(pauli_matrix(Pauli::Z), x).eval();
        return ((-kI * theta) * zx).exp();
      }
    }
    return {};
  }

  /// Spin-controlled displacement is block diagonal, so it is demultiplexed
  /// directly instead of going through a full QSD on one more qubit.
  [[nodiscard]] Circuit circuit() const {
    if (kind != BosonicKind::ControlledDisplacement) return synthesize_unitary(unitary());
    const CMatrix a = ladder(levels, LadderKind::Annihilate).dense();
    const CMatrix x = a + a.adjoint();
    return synthesize_multiplexor(((-kI * theta) * x).exp(), ((kI * theta) * x).exp());
  }
};

struct ResourceEstimate {
  BosonicKind kind;
  std::size_t n;
  std::size_t cnots;
  std::size_t one_qubit_gates;
  std::optional<std::size_t> reference_cnots;  ///< published count, when there is one

  [[nodiscard]] std::optional<long> deviation() const {
    if (!reference_cnots) return std::nullopt;
    return static_cast<long>(cnots) - static_cast<long>(*reference_cnots);
  }
};

/// Published CNOT count for the n = 8 controlled displacement.
inline constexpr std::size_t kReferenceControlledDisplacementN8 = 67;

inline ResourceEstimate cnot_count(const BosonicGate& gate) {
  const Circuit c = gate.circuit();
  ResourceEstimate r{gate.kind, gate.levels, c.cnot_count(), c.one_qubit_count(), std::nullopt};
  if (gate.kind == BosonicKind::ControlledDisplacement && gate.levels == 8) {
    r.reference_cnots = kReferenceControlledDisplacementN8;
  }
  return r;
}

inline std::vector<ResourceEstimate> resource_table(const std::vector<std::size_t>& levels) {
  std::vector<ResourceEstimate> out;
  for (auto kind : {BosonicKind::Rotation, BosonicKind::Displacement, BosonicKind::ControlledDisplacement}) {
    for (auto n : levels) out.push_back(cnot_count({kind, n}));
  }
  return out;
}

inline void write_resource_csv(std::ostream& os, const std::vector<ResourceEstimate>& rows) {
  os << "kind,n,cnots,one_qubit_gates\n";
  for (const auto& r : rows) os << to_string(r.kind) << ',' << r.n << ',' << r.cnots << ',' << r.one_qubit_gates << '\n';
}

/// exp(-i theta P) for a Pauli string: basis change, CNOT ladder, Rz, undo.
/// Local qubit i is the i-th non-identity position of P (ascending).
inline Circuit pauli_rotation_circuit(const PauliString& p, double theta) {
  const std::vector<std::pair<std::size_t, Pauli>> support(p.letters().begin(), p.letters().end());
  if (support.empty()) throw DomainError("pauli_rotation_circuit: identity string");
  const double half_pi = std::numbers::pi / 2.0;
  Circuit c;
  c.n_qubits = support.size();
  const std::size_t w = support.size();
  for (std::size_t i = 0; i < w; ++i) {
    if (support[i].second == Pauli::X) c.gates.push_back({GateType::RY, i, 0, -half_pi});
    if (support[i].second == Pauli::Y) {
      c.gates.push_back({GateType::RZ, i, 0, -half_pi});
      c.gates.push_back({GateType::RY, i, 0, -half_pi});
    }
  }
  for (std::size_t i = 0; i + 1 < w; ++i) c.gates.push_back({GateType::CNOT, i + 1, i, 0.0});
  c.gates.push_back({GateType::RZ, w - 1, 0, 2.0 * theta * p.real_sign()});
  for (std::size_t i = w - 1; i > 0; --i) c.gates.push_back({GateType::CNOT, i, i - 1, 0.0});
  for (std::size_t i = 0; i < w; ++i) {
    if (support[i].second == Pauli::X) c.gates.push_back({GateType::RY, i, 0, half_pi});
    if (support[i].second == Pauli::Y) {
      c.gates.push_back({GateType::RY, i, 0, half_pi});
      c.gates.push_back({GateType::RZ, i, 0, half_pi});
    }
  }
  return c;
}

/// One Trotter factor of the digital step.
struct DigitalTerm {
  std::string label;
  std::vector<std::size_t> subsystems;  ///< model layout (one subsystem per mode)
  CMatrix unitary;                      ///< on `subsystems`
  std::vector<std::size_t> qubits;      ///< binary layout, local circuit qubit i -> qubits[i]
  Circuit circuit;
};

namespace detail {

inline std::vector<std::size_t> mode_bits(const HilbertSpace& space, std::size_t site) {
  const std::size_t bits = log2_levels(space.boson_levels()[site]);
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < bits; ++b) out.push_back(space.n_qubits() + site * bits + b);
  return out;
}

inline DigitalTerm string_term(const PauliString& s, double coeff, double dt) {
  DigitalTerm t;
  t.label = "pauli:" + s.label();
  PauliString compact;
  for (auto [q, letter] : s.letters()) {
    compact.set(t.subsystems.size(), letter);
    t.subsystems.push_back(q);
  }
  compact.multiply_phase(s.phase());
  t.qubits = t.subsystems;
  t.circuit = pauli_rotation_circuit(compact, coeff * dt);
  const Layout local_layout(std::vector<std::size_t>(t.subsystems.size(), 2));
  t.unitary = ((-kI * (coeff * dt)) * compact.to_operator(local_layout).dense()).exp();
  return t;
}

}  // namespace detail

/// Terms of one step in time order, grouped like the analog schedule.
inline std::vector<DigitalTerm> digital_step_terms(const HHParams& p, double dt, const std::vector<TrotterPart>& order) {
  const HilbertSpace space = make_space(p);
  log2_levels(p.boson_levels);
  const HoppingTerms hop = hopping_terms(p);
  std::vector<DigitalTerm> out;
  for (auto part : order) {
    if (part == TrotterPart::Star) {
      for (std::size_t s = 0; s < p.sites(); ++s) {
        const std::size_t qL = fermion_qubit(s, Spin::Up);
        const std::size_t qR = fermion_qubit(s, Spin::Down);
        const std::size_t m = space.mode(s);
        const auto bits = detail::mode_bits(space, s);

        const BosonicGate rot{BosonicKind::Rotation, p.boson_levels, p.omega0 * dt};
        out.push_back({"cv_r", {m}, rot.unitary(), bits, rot.circuit()});

        for (std::size_t q : {qL, qR}) {
          PauliString z;
          z.set(q, Pauli::Z);
          out.push_back(detail::string_term(z, p.ubar() / 4.0, dt));
        }
        PauliString zz;
        zz.set(qL, Pauli::Z);
        zz.set(qR, Pauli::Z);
        out.push_back(detail::string_term(zz, p.U / 4.0, dt));

        const BosonicGate cd{BosonicKind::ControlledDisplacement, p.boson_levels, p.g * dt / 2.0};
        for (std::size_t q : {qL, qR}) {
          std::vector<std::size_t> qubits{q};
          qubits.insert(qubits.end(), bits.begin(), bits.end());
          out.push_back({"cv_c_d", {q, m}, cd.unitary(), qubits, cd.circuit()});
        }
      }
    } else {
      const auto& terms = part == TrotterPart::Horizontal ? hop.horizontal : hop.vertical;
      for (const auto& term : terms) out.push_back(detail::string_term(term.string, term.coeff, dt));
    }
  }
  return out;
}

inline PureTrajectory digital_evolve(const HHParams& params, const StateVector& psi0, double t_final,
                                     std::size_t steps, std::vector<TrotterPart> order = default_trotter_order()) {
  if (steps == 0) throw DomainError("digital_evolve: N must be >= 1");
  const HilbertSpace space = make_space(params);
  if (static_cast<std::size_t>(psi0.size()) != space.dim()) throw DomainError("digital_evolve: state dimension mismatch");
  const double dt = t_final / static_cast<double>(steps);
  const auto terms = digital_step_terms(params, dt, order);
  std::vector<LocalIndexer> idx;
  for (const auto& t : terms) idx.emplace_back(space.layout(), t.subsystems);

  PureTrajectory traj;
  StateVector psi = psi0;
  traj.push(0.0, psi);
  for (std::size_t n = 1; n <= steps; ++n) {
    for (std::size_t i = 0; i < terms.size(); ++i) idx[i].apply(terms[i].unitary, psi.data());
    traj.push(dt * static_cast<double>(n), psi);
  }
  return traj;
}

/// Composite error of one term's circuit: for every gate, depolarize its
/// qubits then relax each one. Fermion qubits relax toward |1> (empty), mode
/// bits toward |0> (vacuum). Returned as a dense d^2 x d^2 map on row-major vec(rho).
inline CMatrix term_noise_superoperator(const DigitalTerm& term, const NoiseConfig& cfg, std::size_t n_fermion_qubits) {
  const std::size_t w = term.qubits.size();
  const Layout local(std::vector<std::size_t>(w, 2));
  const auto d = static_cast<Index>(local.dim());
  const KrausChannel dep1 = depolarizing_channel(1, cfg.gate_error_1q);
  const KrausChannel dep2 = depolarizing_channel(2, cfg.gate_error_2q);
  const KrausChannel relax_fermion = qubit_relaxation_channel(cfg.digital_gamma_qubit());
  const KrausChannel relax_mode = amplitude_damping_channel(2, cfg.digital_gamma_qubit());
  std::vector<LocalIndexer> one;
  std::vector<const KrausChannel*> relax;
  for (std::size_t i = 0; i < w; ++i) {
    one.emplace_back(local, std::vector{i});
    relax.push_back(term.qubits[i] < n_fermion_qubits ? &relax_fermion : &relax_mode);
  }
  const Superoperator s1 = dep1.superoperator();
  const Superoperator s2 = dep2.superoperator();

  CMatrix out(d * d, d * d);
  for (Index r = 0; r < d; ++r) {
    for (Index c = 0; c < d; ++c) {
      DensityMatrix rho = DensityMatrix::Zero(d, d);
      rho(r, c) = 1.0;
      for (const auto& g : term.circuit.gates) {
        const auto sup = gate_support(g);
        if (sup.size() == 1) {
          apply_superoperator(rho, one[sup[0]], s1);
        } else {
          apply_superoperator(rho, LocalIndexer(local, sup), s2);
        }
        for (auto q : sup) apply_superoperator(rho, one[q], relax[q]->superoperator());
      }
      for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) out(i * d + j, r * d + c) = rho(i, j);
    }
  }
  return out;
}

/// rho <- S applied to every (row block, column block) slice over `idx`.
inline void apply_dense_superoperator(DensityMatrix& rho, const LocalIndexer& idx, const CMatrix& s) {
  const auto& off = idx.offsets();
  const auto& bases = idx.bases();
  const auto d = static_cast<Index>(off.size());
  const auto nb = static_cast<Index>(bases.size());
  CMatrix in(d * d, nb * nb);
  for (Index cb = 0; cb < nb; ++cb)
    for (Index rb = 0; rb < nb; ++rb)
      for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j)
          in(i * d + j, cb * nb + rb) = rho(static_cast<Index>(bases[rb] + off[i]), static_cast<Index>(bases[cb] + off[j]));
  const CMatrix out = s * in;
  for (Index cb = 0; cb < nb; ++cb)
    for (Index rb = 0; rb < nb; ++rb)
      for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j)
          rho(static_cast<Index>(bases[rb] + off[i]), static_cast<Index>(bases[cb] + off[j])) = out(i * d + j, cb * nb + rb);
}

inline MixedTrajectory noisy_digital_evolve(const HHParams& params, const DensityMatrix& rho0, double t_final,
                                            std::size_t steps, const NoiseConfig& cfg,
                                            std::vector<TrotterPart> order = default_trotter_order()) {
  if (steps == 0) throw DomainError("noisy_digital_evolve: N must be >= 1");
  cfg.validate();
  const HilbertSpace space = make_space(params);
  if (static_cast<std::size_t>(rho0.rows()) != space.dim()) throw DomainError("noisy_digital_evolve: dimension mismatch");
  const Layout binary = space.binary_layout();
  const double dt = t_final / static_cast<double>(steps);
  const auto terms = digital_step_terms(params, dt, order);

  struct Prepared {
    LocalIndexer unitary_idx;
    LocalIndexer noise_idx;
    CMatrix noise;
  };
  std::vector<Prepared> prep;
  for (const auto& t : terms) {
    prep.push_back({LocalIndexer(space.layout(), t.subsystems), LocalIndexer(binary, t.qubits),
                    term_noise_superoperator(t, cfg, space.n_qubits())});
  }

  MixedTrajectory traj;
  DensityMatrix rho = rho0;
  traj.push(0.0, rho);
  for (std::size_t n = 1; n <= steps; ++n) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      conjugate_local(rho, prep[i].unitary_idx, terms[i].unitary);
      apply_dense_superoperator(rho, prep[i].noise_idx, prep[i].noise);
    }
    traj.push(dt * static_cast<double>(n), rho);
  }
  return traj;
}

}  // namespace hhdaqc
