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

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "hhdaqc/evolve.hpp"
#include "hhdaqc/pauli_string.hpp"
#include "hhdaqc/schedule.hpp"
#include "hhdaqc/tensor.hpp"

namespace hhdaqc {

/// Times in ns. gamma = duration / T1; Kraus maps use p = 1 - exp(-gamma).
struct NoiseConfig {
  double t1_qubit = 80000.0;
  double t1_resonator = 80000.0;
  double dur_analog = 50.0;
  double dur_digital = 200.0;
  double gate_error_1q = 1e-3;
  double gate_error_2q = 1e-2;

  void validate() const {
    if (!(t1_qubit > 0.0) || !(t1_resonator > 0.0)) throw DomainError("NoiseConfig: T1 must be > 0");
    if (!(dur_analog >= 0.0) || !(dur_digital >= 0.0)) throw DomainError("NoiseConfig: durations must be >= 0");
    for (double e : {gate_error_1q, gate_error_2q}) {
      if (!(e >= 0.0 && e <= 1.0)) throw DomainError("NoiseConfig: gate errors must lie in [0, 1]");
    }
    for (double g : {analog_gamma_qubit(), analog_gamma_resonator(), digital_gamma_qubit()}) {
      if (!(g < 1.0)) throw DomainError("NoiseConfig: gamma = duration / T1 must be < 1");
    }
  }

  [[nodiscard]] double analog_gamma_qubit() const { return dur_analog / t1_qubit; }
  [[nodiscard]] double analog_gamma_resonator() const { return dur_analog / t1_resonator; }
  [[nodiscard]] double digital_gamma_qubit() const { return dur_digital / t1_qubit; }

  /// Noiseless configuration (all gammas and gate errors zero).
  static NoiseConfig none() { return {80000.0, 80000.0, 0.0, 0.0, 0.0, 0.0}; }
};

/// Local superoperator rho_sub -> sum_k A_k rho_sub A_k^dagger as a sparse
/// list of (out_row, out_col) <- value * (in_row, in_col).
struct Superoperator {
  struct Entry {
    Index out_r, out_c, in_r, in_c;
    Complex value;
  };
  Index dim = 0;
  std::vector<Entry> entries;
};

class KrausChannel {
 public:
  explicit KrausChannel(std::vector<SparseOperator> ops) : ops_(std::move(ops)) {
    if (ops_.empty()) throw DomainError("KrausChannel: needs at least one operator");
    const Index d = ops_.front().dim();
    for (const auto& a : ops_) {
      if (a.dim() != d) throw DomainError("KrausChannel: operators differ in dimension");
    }
    build_superoperator();
  }

  [[nodiscard]] const std::vector<SparseOperator>& operators() const { return ops_; }
  [[nodiscard]] Index dim() const { return ops_.front().dim(); }
  [[nodiscard]] const Superoperator& superoperator() const { return super_; }

  /// || sum_k A_k^dag A_k - I ||_max.
  [[nodiscard]] double completeness_error() const {
    CMatrix s = CMatrix::Zero(dim(), dim());
    for (const auto& a : ops_) s += a.dense().adjoint() * a.dense();
    return (s - CMatrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
  }

  /// Choi matrix sum_k vec(A_k) vec(A_k)^dagger (column stacking).
  [[nodiscard]] CMatrix choi() const {
    const Index d = dim();
    CMatrix j = CMatrix::Zero(d * d, d * d);
    for (const auto& a : ops_) {
      const CMatrix m = a.dense();
      const CVector v = Eigen::Map<const CVector>(m.data(), d * d);
      j += v * v.adjoint();
    }
    return j;
  }

  [[nodiscard]] double min_choi_eigenvalue() const {
    return Eigen::SelfAdjointEigenSolver<CMatrix>(choi(), Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  }

 private:
  void build_superoperator() {
    const Index d = dim();
    CMatrix s = CMatrix::Zero(d * d, d * d);  // row-major pair index (r * d + c)
    for (const auto& op : ops_) {
      const CMatrix a = op.dense();
      for (Index r = 0; r < d; ++r)
        for (Index i = 0; i < d; ++i) {
          if (a(r, i) == Complex(0.0)) continue;
          for (Index c = 0; c < d; ++c)
            for (Index j = 0; j < d; ++j) {
              if (a(c, j) == Complex(0.0)) continue;
              s(r * d + c, i * d + j) += a(r, i) * std::conj(a(c, j));
            }
        }
    }
    super_.dim = d;
    for (Index o = 0; o < d * d; ++o)
      for (Index in = 0; in < d * d; ++in) {
        if (std::abs(s(o, in)) > 1e-300) super_.entries.push_back({o / d, o % d, in / d, in % d, s(o, in)});
      }
  }

  std::vector<SparseOperator> ops_;
  Superoperator super_;
};

inline double binomial(std::size_t n, std::size_t k) {
  return std::exp(std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
                  std::lgamma(static_cast<double>(n - k) + 1));
}

/// Zero-temperature multi-level amplitude damping with p = 1 - e^{-gamma}.
inline KrausChannel amplitude_damping_channel(std::size_t dim, double gamma) {
  if (dim < 2) throw DomainError("amplitude_damping_channel: dim must be >= 2");
  if (!(gamma >= 0.0) || !(gamma < 1.0)) throw DomainError("amplitude_damping_channel: need 0 <= gamma < 1");
  const double p = -std::expm1(-gamma);
  if (gamma == 0.0) return KrausChannel({SparseOperator::identity(static_cast<Index>(dim))});
  std::vector<SparseOperator> ops;
  for (std::size_t k = 0; k < dim; ++k) {
    std::vector<Eigen::Triplet<Complex>> t;
    for (std::size_t m = k; m < dim; ++m) {
      const double v = std::sqrt(binomial(m, k) * std::pow(1.0 - p, static_cast<double>(m - k)) *
                                 std::pow(p, static_cast<double>(k)));
      t.emplace_back(static_cast<Index>(m - k), static_cast<Index>(m), v);
    }
    ops.push_back(SparseOperator::from_triplets(static_cast<Index>(dim), t));
  }
  return KrausChannel(std::move(ops));
}

/// Qubit T1 decay in the register convention: |0> is the excited (occupied)
/// state, so relaxation drives |0> -> |1>. Textbook channel relabelled by X.
inline KrausChannel qubit_relaxation_channel(double gamma) {
  const KrausChannel base = amplitude_damping_channel(2, gamma);
  const auto x = pauli(PauliKind::X);
  std::vector<SparseOperator> ops;
  for (const auto& a : base.operators()) ops.push_back(x * a * x);
  return KrausChannel(std::move(ops));
}

/// Depolarizing on n_qubits (1 or 2) qubits: rho -> (1 - p) rho + p Tr_S(rho) (x) I / d,
/// as the Pauli twirl sqrt(1 - p + p/d^2) I, sqrt(p/d^2) P.
inline KrausChannel depolarizing_channel(std::size_t n_qubits, double p) {
  if (n_qubits < 1 || n_qubits > 2) throw DomainError("depolarizing_channel: span must be 1 or 2 qubits");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("depolarizing_channel: p must lie in [0, 1]");
  const auto d = static_cast<double>(std::size_t{1} << n_qubits);
  const double w_id = std::sqrt(1.0 - p + p / (d * d));
  const double w_p = std::sqrt(p / (d * d));
  std::vector<SparseOperator> ops;
  const Pauli letters[] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};
  for (int code = 0; code < (1 << (2 * n_qubits)); ++code) {
    CMatrix m = CMatrix::Identity(1, 1);
    for (std::size_t q = 0; q < n_qubits; ++q) {
      const CMatrix next = Eigen::kroneckerProduct(m, pauli_matrix(letters[(code >> (2 * q)) & 3])).eval();
      m = next;
    }
    const double w = code == 0 ? w_id : w_p;
    if (w == 0.0) continue;
    ops.push_back(SparseOperator::from_dense(w * m));
  }
  return KrausChannel(std::move(ops));
}

/// rho <- sum_k (I (x) A_k (x) I) rho (...)^dagger on the listed subsystems.
inline void apply_superoperator(DensityMatrix& rho, const LocalIndexer& idx, const Superoperator& s) {
  if (static_cast<Index>(idx.local_dim()) != s.dim) throw DomainError("apply_channel: subsystem dimension mismatch");
  const auto& off = idx.offsets();
  const auto& bases = idx.bases();
  const Index d = s.dim;
  CMatrix in(d, d);
  CMatrix out(d, d);
  for (auto cb : bases) {
    for (auto rb : bases) {
      for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) in(i, j) = rho(static_cast<Index>(rb + off[i]), static_cast<Index>(cb + off[j]));
      out.setZero();
      for (const auto& e : s.entries) out(e.out_r, e.out_c) += e.value * in(e.in_r, e.in_c);
      for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) rho(static_cast<Index>(rb + off[i]), static_cast<Index>(cb + off[j])) = out(i, j);
    }
  }
}

inline void apply_channel(DensityMatrix& rho, const Layout& layout, std::span<const std::size_t> subsystems,
                          const KrausChannel& channel) {
  if (static_cast<std::size_t>(rho.rows()) != layout.dim() || rho.rows() != rho.cols()) {
    throw DomainError("apply_channel: density matrix dimension mismatch");
  }
  apply_superoperator(rho, LocalIndexer(layout, subsystems), channel.superoperator());
}

inline void apply_channel(DensityMatrix& rho, const HilbertSpace& space, std::size_t subsystem,
                          const KrausChannel& channel) {
  const std::size_t subs[] = {subsystem};
  apply_channel(rho, space.layout(), subs, channel);
}

/// Gate error on a 1- or 2-qubit span: depolarize, then relax each qubit for
/// the digital duration. The order is a convention pinned by a golden test.
class GateNoise {
 public:
  explicit GateNoise(const NoiseConfig& cfg)
      : dep1_(depolarizing_channel(1, cfg.gate_error_1q)),
        dep2_(depolarizing_channel(2, cfg.gate_error_2q)),
        damp_(qubit_relaxation_channel(cfg.digital_gamma_qubit())) {}

  void apply(DensityMatrix& rho, const Layout& layout, std::span<const std::size_t> qubits) const {
    if (qubits.empty() || qubits.size() > 2) throw DomainError("depolarizing_thermal: span must be 1 or 2 qubits");
    apply_channel(rho, layout, qubits, qubits.size() == 1 ? dep1_ : dep2_);
    for (auto q : qubits) {
      const std::size_t one[] = {q};
      apply_channel(rho, layout, one, damp_);
    }
  }

 private:
  KrausChannel dep1_;
  KrausChannel dep2_;
  KrausChannel damp_;
};

inline void depolarizing_thermal(DensityMatrix& rho, const Layout& layout, std::span<const std::size_t> qubits,
                                 const NoiseConfig& cfg) {
  cfg.validate();
  GateNoise(cfg).apply(rho, layout, qubits);
}

/// DAQC with noise: analog layers (star, two-body cores) are followed by
/// damping of every qubit and mode for dur_analog; digital layers (Hadamards,
/// pi/4 rotations) by gate errors on the qubits each gate touches.
inline MixedTrajectory noisy_daqc_evolve(const HHParams& params, const DensityMatrix& rho0, double t_final,
                                         std::size_t steps, const NoiseConfig& cfg,
                                         std::vector<TrotterPart> order = default_trotter_order()) {
  if (steps == 0) throw DomainError("noisy_daqc_evolve: N must be >= 1");
  cfg.validate();
  const ScheduleExecutor exec(schedule_compile(params, t_final, steps, std::move(order)));
  const HilbertSpace& space = exec.space();
  const Layout& layout = space.layout();
  const KrausChannel damp_q = qubit_relaxation_channel(cfg.analog_gamma_qubit());
  const KrausChannel damp_r = amplitude_damping_channel(params.boson_levels, cfg.analog_gamma_resonator());
  const GateNoise gate(cfg);
  std::vector<LocalIndexer> qubit_idx;
  std::vector<LocalIndexer> mode_idx;
  for (std::size_t q = 0; q < space.n_qubits(); ++q) qubit_idx.emplace_back(layout, std::vector{q});
  for (std::size_t m = 0; m < space.n_modes(); ++m) mode_idx.emplace_back(layout, std::vector{space.mode(m)});

  auto hook = [&](std::size_t, const Block& b, DensityMatrix& rho) {
    if (b.is_analog()) {
      if (cfg.analog_gamma_qubit() > 0.0) {
        for (const auto& idx : qubit_idx) apply_superoperator(rho, idx, damp_q.superoperator());
      }
      if (cfg.analog_gamma_resonator() > 0.0) {
        for (const auto& idx : mode_idx) apply_superoperator(rho, idx, damp_r.superoperator());
      }
    } else if (b.kind == BlockKind::HadamardAll) {
      for (std::size_t q = 0; q < space.n_qubits(); ++q) {
        const std::size_t one[] = {q};
        gate.apply(rho, layout, one);
      }
    } else {
      for (const auto& g : b.gates) {
        const std::size_t two[] = {g.a, g.b};
        gate.apply(rho, layout, two);
      }
    }
  };
  return exec.run(rho0, hook);
}

}  // namespace hhdaqc
