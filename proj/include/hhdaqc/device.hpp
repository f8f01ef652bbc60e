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

// Effective device couplings of one building block (two qubits L, R and a
// resonator) and of neighbouring blocks, as functions of the SQUID phases.
// Prefactors (m1 A / 4 and friends) are dropped: presets only fix which
// operator is switched on, amplitudes are calibrated to the target term.

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "hhdaqc/pauli_string.hpp"
#include "hhdaqc/tensor.hpp"

namespace hhdaqc {

struct PhasePair {
  double plus = 0.0;
  double minus = 0.0;
};

/// C+ XX - S+ XY + S- YX + C- YY on an ordered qubit pair (first, second).
inline CMatrix qq_generator(PhasePair phi) {
  const double cp = std::cos(phi.plus) + std::cos(phi.minus);
  const double cm = std::cos(phi.plus) - std::cos(phi.minus);
  const double sp = std::sin(phi.plus) + std::sin(phi.minus);
  const double sm = std::sin(phi.plus) - std::sin(phi.minus);
  auto kron = [](Pauli a, Pauli b) -> CMatrix {
    return Eigen::kroneckerProduct(pauli_matrix(a), pauli_matrix(b)).eval();
  };
  return cp * kron(Pauli::X, Pauli::X) - sp * kron(Pauli::X, Pauli::Y) + sm * kron(Pauli::Y, Pauli::X) +
         cm * kron(Pauli::Y, Pauli::Y);
}

/// Qubit-resonator bracket on (qubit, mode):
/// C+ X P - C- Y Q + S+ X Q - S- Y P, with Q = a^dag + a and P = i(a^dag - a).
/// The factor i on the momentum quadrature keeps the generator Hermitian.
inline CMatrix qr_generator(PhasePair phi, std::size_t levels) {
  const double cp = std::cos(phi.plus) + std::cos(phi.minus);
  const double cm = std::cos(phi.plus) - std::cos(phi.minus);
  const double sp = std::sin(phi.plus) + std::sin(phi.minus);
  const double sm = std::sin(phi.plus) - std::sin(phi.minus);
  const CMatrix a = ladder(levels, LadderKind::Annihilate).dense();
  const CMatrix q = a.adjoint() + a;
  const CMatrix p = kI * (a.adjoint() - a);
  const CMatrix x = pauli_matrix(Pauli::X);
  const CMatrix y = pauli_matrix(Pauli::Y);
  auto kron = [](const CMatrix& l, const CMatrix& r) -> CMatrix { return Eigen::kroneckerProduct(l, r).eval(); };
  return cp * kron(x, p) - cm * kron(y, q) + sp * kron(x, q) - sm * kron(y, p);
}

enum class CouplingKind { QubitQubit, QubitResonator };

/// A named phase setting and the operator it switches on:
/// generator(phases) == scale * (letter_a (x) letter_b).
struct Preset {
  std::string name;
  CouplingKind coupling;
  PhasePair phases;
  Pauli first;   ///< letter on the first qubit
  Pauli second;  ///< letter on the second qubit, or X meaning Q = a^dag + a for QubitResonator
  double scale;
};

inline const std::vector<Preset>& preset_table() {
  constexpr double pi = std::numbers::pi;
  static const std::vector<Preset> table = {
      {"XX+", CouplingKind::QubitQubit, {0.0, 0.0}, Pauli::X, Pauli::X, 2.0},
      {"XX-", CouplingKind::QubitQubit, {pi, pi}, Pauli::X, Pauli::X, -2.0},
      {"YY+", CouplingKind::QubitQubit, {0.0, pi}, Pauli::Y, Pauli::Y, 2.0},
      {"YY-", CouplingKind::QubitQubit, {pi, 0.0}, Pauli::Y, Pauli::Y, -2.0},
      {"XY+", CouplingKind::QubitQubit, {-pi / 2, -pi / 2}, Pauli::X, Pauli::Y, 2.0},
      {"XY-", CouplingKind::QubitQubit, {pi / 2, pi / 2}, Pauli::X, Pauli::Y, -2.0},
      {"YX+", CouplingKind::QubitQubit, {pi / 2, -pi / 2}, Pauli::Y, Pauli::X, 2.0},
      {"YX-", CouplingKind::QubitQubit, {-pi / 2, pi / 2}, Pauli::Y, Pauli::X, -2.0},
      {"star-QR", CouplingKind::QubitResonator, {pi / 2, pi / 2}, Pauli::X, Pauli::X, 2.0},
  };
  return table;
}

inline const Preset& preset(std::string_view name) {
  for (const auto& p : preset_table()) {
    if (p.name == name) return p;
  }
  throw DomainError("unknown preset '" + std::string(name) + "'");
}

/// Preset name for +-(a b) on a qubit pair, e.g. ("XY", -1) -> "XY-".
inline std::string preset_name(Pauli a, Pauli b, double sign) {
  if (a == Pauli::Z || b == Pauli::Z || a == Pauli::I || b == Pauli::I) {
    throw DomainError("preset_name: only X/Y pairs are native two-qubit couplings");
  }
  std::string s{pauli_char(a), pauli_char(b)};
  return s + (sign >= 0.0 ? "+" : "-");
}

/// Generator that the device produces under a preset.
inline CMatrix preset_generator(const Preset& p, std::size_t levels = 2) {
  return p.coupling == CouplingKind::QubitQubit ? qq_generator(p.phases) : qr_generator(p.phases, levels);
}

}  // namespace hhdaqc
