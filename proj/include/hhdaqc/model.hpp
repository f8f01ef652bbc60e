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

// Hubbard-Holstein Hamiltonians.
//
// Conventions used throughout the library:
//   * site s in an l x h lattice sits at column c = s / l, row r = s % l, so
//     Jordan-Wigner order runs along the short dimension first;
//   * spin up of site s is qubit 2s ("L"), spin down is qubit 2s+1 ("R");
//   * a fermion mode is occupied when its qubit is |0> (sigma_z = +1), so
//     n = (1 + sigma_z) / 2 and the annihilator is sigma_minus = |1><0|;
//   * boson mode of site s is subsystem 2N + s.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hhdaqc/pauli_string.hpp"
#include "hhdaqc/tensor.hpp"

namespace hhdaqc {

enum class Spin : std::size_t { Up = 0, Down = 1 };

struct Lattice {
  std::size_t rows = 1;  ///< l, the short dimension
  std::size_t cols = 2;  ///< h

  [[nodiscard]] std::size_t sites() const { return rows * cols; }
  [[nodiscard]] std::size_t site(std::size_t col, std::size_t row) const { return col * rows + row; }

  void validate() const {
    if (rows == 0 || cols == 0) throw DomainError("Lattice: rows and cols must be >= 1");
    if (rows > cols) throw DomainError("Lattice: rows (l) must not exceed cols (h)");
  }
};

struct HHParams {
  double omega0 = 1.0;
  double U = 0.0;
  double k = 1.0;
  double g = 0.0;
  Lattice lattice{};
  std::size_t boson_levels = 8;

  /// Renormalized on-site interaction U - 4 g^2 / omega0.
  [[nodiscard]] double ubar() const {
    if (g == 0.0) return U;
    if (omega0 == 0.0) throw DomainError("HHParams: omega0 = 0 with g != 0 leaves Ubar undefined");
    return U - 4.0 * g * g / omega0;
  }

  void validate() const {
    lattice.validate();
    if (boson_levels < 2) throw DomainError("HHParams: boson truncation must be >= 2");
    if (g != 0.0 && omega0 <= 0.0) throw DomainError("HHParams: omega0 must be > 0 when g != 0");
    for (double v : {omega0, U, k, g}) {
      if (!std::isfinite(v)) throw DomainError("HHParams: non-finite parameter");
    }
  }

  /// Energies in units of the hopping k (k itself becomes 1).
  [[nodiscard]] HHParams normalized() const {
    if (k == 0.0) throw DomainError("HHParams: cannot normalize by k = 0");
    HHParams p = *this;
    p.omega0 /= k;
    p.U /= k;
    p.g /= k;
    p.k = 1.0;
    return p;
  }

  [[nodiscard]] std::size_t sites() const { return lattice.sites(); }
  [[nodiscard]] std::size_t n_qubits() const { return 2 * sites(); }
};

inline std::size_t fermion_qubit(std::size_t site, Spin spin) {
  return 2 * site + static_cast<std::size_t>(spin);
}

inline HilbertSpace make_space(const HHParams& p) {
  return HilbertSpace(p.n_qubits(), std::vector<std::size_t>(p.sites(), p.boson_levels));
}

struct Bond {
  std::size_t from;  ///< lower JW index
  std::size_t to;
  /// Consecutive JW sites; the hopping string crosses a single qubit.
  [[nodiscard]] bool horizontal() const { return to == from + 1; }
};

/// Open-boundary nearest-neighbour bonds, sorted by (from, to).
inline std::vector<Bond> lattice_bonds(const Lattice& lat) {
  lat.validate();
  std::vector<Bond> bonds;
  for (std::size_t s = 0; s < lat.sites(); ++s) {
    const std::size_t row = s % lat.rows;
    const std::size_t col = s / lat.rows;
    if (lat.rows > 1 && row + 1 < lat.rows) bonds.push_back({s, s + 1});
    if (col + 1 < lat.cols) bonds.push_back({s, s + lat.rows});
  }
  std::sort(bonds.begin(), bonds.end(),
            [](const Bond& a, const Bond& b) { return a.from != b.from ? a.from < b.from : a.to < b.to; });
  return bonds;
}

inline bool are_neighbors(const Lattice& lat, std::size_t a, std::size_t b) {
  if (a > b) std::swap(a, b);
  for (const auto& bond : lattice_bonds(lat)) {
    if (bond.from == a && bond.to == b) return true;
  }
  return false;
}

/// P_p Z_{p+1} ... Z_{q-1} P_q.
inline PauliString string_operator(std::size_t p, std::size_t q, Pauli end) {
  if (q <= p) throw DomainError("string_operator: need p < q");
  PauliString s;
  s.set(p, end);
  for (std::size_t m = p + 1; m < q; ++m) s.set(m, Pauli::Z);
  s.set(q, end);
  return s;
}

/// One hopping channel as weighted Pauli strings:
/// sigma+_p prod(-sigma_z) sigma-_q + h.c. = (-1)^m / 2 (X Z..Z X + Y Z..Z Y),
/// with m the number of qubits strictly between p and q.
struct StringTerm {
  PauliString string;
  double coeff;
};

inline std::vector<StringTerm> hopping_strings(std::size_t p, std::size_t q) {
  const double sign = ((q - p - 1) % 2 == 0) ? 1.0 : -1.0;
  return {{string_operator(p, q, Pauli::X), 0.5 * sign}, {string_operator(p, q, Pauli::Y), 0.5 * sign}};
}

/// Jordan-Wigner image of c^dagger_{j,s} c_{l,s} + h.c. for a nearest-neighbour bond.
inline SparseOperator jw_string_term(const Lattice& lat, std::size_t j, std::size_t l, Spin spin,
                                     const HilbertSpace& space) {
  if (j > l) std::swap(j, l);
  if (!are_neighbors(lat, j, l)) throw DomainError("jw_string_term: sites are not nearest neighbours");
  const auto p = fermion_qubit(j, spin);
  const auto q = fermion_qubit(l, spin);
  if (q >= space.n_qubits()) throw DomainError("jw_string_term: bond outside the register");
  SparseOperator out(static_cast<Index>(space.dim()));
  for (const auto& term : hopping_strings(p, q)) {
    out = out + term.coeff * term.string.to_operator(space.layout());
  }
  return out;
}

/// The five-way split of the mapped spin-boson Hamiltonian.
struct TermDecomposition {
  SparseOperator h_free;        ///< omega0 sum a^dag a + (Ubar/4) sum (Z_L + Z_R)
  SparseOperator h_onsite;      ///< (U/4) sum Z_L Z_R
  SparseOperator h_eph;         ///< (g/2) sum (Z_L + Z_R)(a^dag + a)
  SparseOperator h_horizontal;  ///< strings over consecutive JW sites
  SparseOperator h_vertical;    ///< strings spanning 2l-1 qubits; empty when l = 1

  [[nodiscard]] SparseOperator total() const {
    return h_free + h_onsite + h_eph + h_horizontal + h_vertical;
  }
  /// Site-local part realized by the analog star block.
  [[nodiscard]] SparseOperator star() const { return h_free + h_onsite + h_eph; }
};

/// Weighted hopping strings of the mapped Hamiltonian, split by bond class.
struct HoppingTerms {
  std::vector<StringTerm> horizontal;
  std::vector<StringTerm> vertical;
};

inline HoppingTerms hopping_terms(const HHParams& p) {
  HoppingTerms out;
  for (const auto& bond : lattice_bonds(p.lattice)) {
    for (Spin s : {Spin::Up, Spin::Down}) {
      for (auto term : hopping_strings(fermion_qubit(bond.from, s), fermion_qubit(bond.to, s))) {
        term.coeff *= -p.k;
        (bond.horizontal() ? out.horizontal : out.vertical).push_back(term);
      }
    }
  }
  return out;
}

/// Generator of one site block on the local layout [qubit L, qubit R, mode]:
/// omega0 a^dag a + (Ubar/4)(Z_L + Z_R) + (U/4) Z_L Z_R + (g/2)(Z_L + Z_R)(a^dag + a).
inline CMatrix site_block_generator(const HHParams& p) {
  const auto n = static_cast<Index>(p.boson_levels);
  const CMatrix id2 = CMatrix::Identity(2, 2);
  const CMatrix idn = CMatrix::Identity(n, n);
  const CMatrix z = pauli_matrix(Pauli::Z);
  const CMatrix num = ladder(p.boson_levels, LadderKind::Number).dense();
  const CMatrix a = ladder(p.boson_levels, LadderKind::Annihilate).dense();
  const CMatrix x = a + a.adjoint();
  auto kron3 = [](const CMatrix& l, const CMatrix& r, const CMatrix& m) -> CMatrix {
    return Eigen::kroneckerProduct(Eigen::kroneckerProduct(l, r).eval(), m).eval();
  };
  const CMatrix zsum = kron3(z, id2, idn) + kron3(id2, z, idn);
  CMatrix h = p.omega0 * kron3(id2, id2, num);
  h += (p.ubar() / 4.0) * zsum;
  h += (p.U / 4.0) * kron3(z, z, idn);
  h += (p.g / 2.0) * (zsum * kron3(id2, id2, x));
  return h;
}

/// Mapped spin-boson Hamiltonian with the boson displacement applied analytically.
inline TermDecomposition build_spin_boson(const HHParams& p) {
  p.validate();
  const HilbertSpace space = make_space(p);
  const Layout& layout = space.layout();
  const auto dim = static_cast<Index>(space.dim());
  const double ubar = p.ubar();

  const CMatrix num = ladder(p.boson_levels, LadderKind::Number).dense();
  const CMatrix a = ladder(p.boson_levels, LadderKind::Annihilate).dense();
  const CMatrix x = a + a.adjoint();
  const CMatrix z = pauli_matrix(Pauli::Z);

  TermDecomposition t{SparseOperator(dim), SparseOperator(dim), SparseOperator(dim), SparseOperator(dim),
                      SparseOperator(dim)};
  for (std::size_t s = 0; s < p.sites(); ++s) {
    const std::size_t qL = fermion_qubit(s, Spin::Up);
    const std::size_t qR = fermion_qubit(s, Spin::Down);
    const std::size_t m = space.mode(s);
    const std::size_t sub_m[] = {m};
    t.h_free = t.h_free + p.omega0 * embed(layout, sub_m, num);
    for (std::size_t q : {qL, qR}) {
      const std::size_t sub_q[] = {q};
      t.h_free = t.h_free + (ubar / 4.0) * embed(layout, sub_q, z);
      const std::size_t sub_qm[] = {q, m};
      t.h_eph = t.h_eph + (p.g / 2.0) * embed(layout, sub_qm, Eigen::kroneckerProduct(z, x).eval());
    }
    const std::size_t sub_lr[] = {qL, qR};
    t.h_onsite = t.h_onsite + (p.U / 4.0) * embed(layout, sub_lr, Eigen::kroneckerProduct(z, z).eval());
  }
  const HoppingTerms hop = hopping_terms(p);
  for (const auto& term : hop.horizontal) t.h_horizontal = t.h_horizontal + term.coeff * term.string.to_operator(layout);
  for (const auto& term : hop.vertical) t.h_vertical = t.h_vertical + term.coeff * term.string.to_operator(layout);
  return t;
}

/// Constant by which the fermion-boson spectrum exceeds the mapped one:
/// N (U/4 - g^2/omega0), from n = (1 + Z)/2 and the shift a -> a - g/omega0.
inline double spin_boson_energy_offset(const HHParams& p) {
  const double polaron = (p.g == 0.0) ? 0.0 : p.g * p.g / p.omega0;
  return static_cast<double>(p.sites()) * (p.U / 4.0 - polaron);
}

/// Fermionic annihilator of JW mode `mode` built by occupation-basis
/// enumeration: c_m |..n_m..> = (-1)^{sum_{i<m} n_i} n_m |..n_m - 1..>.
inline SparseOperator fermion_annihilator(const HilbertSpace& space, std::size_t mode) {
  if (mode >= space.n_qubits()) throw DomainError("fermion_annihilator: mode out of range");
  const Layout& layout = space.layout();
  std::vector<Eigen::Triplet<Complex>> t;
  for (std::size_t g = 0; g < layout.dim(); ++g) {
    auto d = layout.digits(g);
    if (d[mode] != 0) continue;  // empty
    int occupied_before = 0;
    for (std::size_t i = 0; i < mode; ++i) occupied_before += (d[i] == 0) ? 1 : 0;
    d[mode] = 1;
    t.emplace_back(static_cast<Index>(layout.index(d)), static_cast<Index>(g),
                   (occupied_before % 2 == 0) ? 1.0 : -1.0);
  }
  return SparseOperator::from_triplets(static_cast<Index>(layout.dim()), t);
}

/// Fermion-boson Hamiltonian in the occupation-number basis (no displacement):
/// omega0 sum a^dag a + U sum n_up n_dn - k sum (c^dag c + h.c.) + g sum n (a^dag + a).
inline SparseOperator build_fermion_boson(const HHParams& p) {
  p.validate();
  const HilbertSpace space = make_space(p);
  const auto dim = static_cast<Index>(space.dim());
  std::vector<SparseOperator> c;
  std::vector<SparseOperator> n;
  for (std::size_t m = 0; m < space.n_qubits(); ++m) {
    c.push_back(fermion_annihilator(space, m));
    n.push_back(c.back().adjoint() * c.back());
  }
  const SparseOperator a_loc = ladder(p.boson_levels, LadderKind::Annihilate);
  SparseOperator h(dim);
  for (std::size_t s = 0; s < p.sites(); ++s) {
    const auto a = embed_single(space, space.mode(s), a_loc);
    const auto ad = a.adjoint();
    const auto nup = n[fermion_qubit(s, Spin::Up)];
    const auto ndn = n[fermion_qubit(s, Spin::Down)];
    h = h + p.omega0 * (ad * a);
    h = h + p.U * (nup * ndn);
    h = h + p.g * ((nup + ndn) * (ad + a));
  }
  for (const auto& bond : lattice_bonds(p.lattice)) {
    for (Spin sp : {Spin::Up, Spin::Down}) {
      const auto& ci = c[fermion_qubit(bond.from, sp)];
      const auto& cl = c[fermion_qubit(bond.to, sp)];
      h = h + (-p.k) * (ci.adjoint() * cl + cl.adjoint() * ci);
    }
  }
  return h;
}

/// Total fermion number sum_m (1 + Z_m)/2.
inline SparseOperator fermion_number_operator(const HilbertSpace& space) {
  SparseOperator out(static_cast<Index>(space.dim()));
  CMatrix occ = CMatrix::Zero(2, 2);
  occ(0, 0) = 1.0;
  for (std::size_t q = 0; q < space.n_qubits(); ++q) {
    const std::size_t sub[] = {q};
    out = out + embed(space.layout(), sub, occ);
  }
  return out;
}

}  // namespace hhdaqc
