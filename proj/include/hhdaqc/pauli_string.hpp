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

#include <cstdint>
#include <map>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "hhdaqc/tensor.hpp"

namespace hhdaqc {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

inline Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default: throw DomainError(std::string("unknown Pauli letter '") + c + "'");
  }
}

inline CMatrix pauli_matrix(Pauli p) {
  CMatrix m(2, 2);
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, -kI, kI, 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

/// Single-qubit product a*b = i^k c; returns {c, k}.
inline std::pair<Pauli, int> pauli_product(Pauli a, Pauli b) {
  if (a == Pauli::I) return {b, 0};
  if (b == Pauli::I) return {a, 0};
  if (a == b) return {Pauli::I, 0};
  const int ia = static_cast<int>(a);
  const int ib = static_cast<int>(b);
  const auto c = static_cast<Pauli>(6 - ia - ib);
  // XY = iZ, YZ = iX, ZX = iY; reversed order picks up -i.
  const bool cyclic = (ib - ia + 3) % 3 == 1;
  return {c, cyclic ? 1 : 3};
}

/// Multi-qubit Pauli product with a phase i^phase. Identity letters are not stored.
class PauliString {
 public:
  PauliString() = default;
  PauliString(std::initializer_list<std::pair<std::size_t, Pauli>> letters) {
    for (auto [q, p] : letters) set(q, p);
  }

  void set(std::size_t qubit, Pauli p) {
    if (p == Pauli::I) {
      letters_.erase(qubit);
    } else {
      letters_[qubit] = p;
    }
  }
  [[nodiscard]] Pauli at(std::size_t qubit) const {
    auto it = letters_.find(qubit);
    return it == letters_.end() ? Pauli::I : it->second;
  }
  [[nodiscard]] const std::map<std::size_t, Pauli>& letters() const { return letters_; }
  [[nodiscard]] int phase() const { return phase_; }
  [[nodiscard]] Complex phase_factor() const {
    static const Complex table[] = {1.0, kI, -1.0, -kI};
    return table[phase_];
  }
  [[nodiscard]] std::size_t weight() const { return letters_.size(); }

  /// Real sign when the phase is +-1; throws otherwise.
  [[nodiscard]] double real_sign() const {
    if (phase_ == 0) return 1.0;
    if (phase_ == 2) return -1.0;
    throw NumericalError("PauliString: phase is imaginary, operator is anti-Hermitian");
  }

  PauliString& multiply_phase(int k) {
    phase_ = ((phase_ + k) % 4 + 4) % 4;
    return *this;
  }

  friend PauliString operator*(const PauliString& a, const PauliString& b) {
    PauliString out = a;
    out.phase_ = (a.phase_ + b.phase_) % 4;
    for (auto [q, p] : b.letters_) {
      auto [c, k] = pauli_product(out.at(q), p);
      out.set(q, c);
      out.phase_ = (out.phase_ + k) % 4;
    }
    return out;
  }

  [[nodiscard]] bool commutes_with(const PauliString& other) const {
    int anti = 0;
    for (auto [q, p] : letters_) {
      const Pauli o = other.at(q);
      if (o != Pauli::I && o != p) ++anti;
    }
    return anti % 2 == 0;
  }

  /// Letters only, phase dropped, e.g. "X0Z1X2".
  [[nodiscard]] std::string label() const {
    std::string s;
    for (auto [q, p] : letters_) {
      s += pauli_char(p);
      s += std::to_string(q);
    }
    return s.empty() ? "I" : s;
  }

  /// Embed into a layout whose first subsystems are the qubits. Includes phase.
  [[nodiscard]] SparseOperator to_operator(const Layout& layout) const {
    std::vector<std::size_t> subs;
    CMatrix local = CMatrix::Identity(1, 1);
    for (auto [q, p] : letters_) {
      subs.push_back(q);
      CMatrix next = Eigen::kroneckerProduct(local, pauli_matrix(p));
      local = std::move(next);
    }
    local *= phase_factor();
    if (subs.empty()) return phase_factor() * SparseOperator::identity(static_cast<Index>(layout.dim()));
    return embed(layout, subs, local);
  }

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.phase_ == b.phase_ && a.letters_ == b.letters_;
  }

 private:
  std::map<std::size_t, Pauli> letters_;
  int phase_ = 0;
};

/// For R = exp(-i pi/4 A) with Pauli A anticommuting with T:
/// R^dagger T R = -i T A. Commuting generators leave T unchanged.
inline PauliString conjugate_by_quarter_rotation(const PauliString& t, const PauliString& a) {
  if (t.commutes_with(a)) return t;
  PauliString out = t * a;
  out.multiply_phase(3);
  return out;
}

}  // namespace hhdaqc
