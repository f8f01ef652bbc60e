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

// Quantum Shannon decomposition into {Ry, Rz, CNOT}: cosine-sine split,
// demultiplexing of block-diagonal unitaries, and Gray-code multiplexed
// rotations. No peephole cancellation, so counts follow the textbook recursion
// c(q) = 4 c(q - 1) + 3 * 2^(q - 1).

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "hhdaqc/tensor.hpp"

namespace hhdaqc {

enum class GateType { RY, RZ, CNOT };

struct Gate {
  GateType type;
  std::size_t target;
  std::size_t control = 0;  ///< CNOT only
  double angle = 0.0;       ///< RY / RZ only
};

/// Qubit 0 is the most significant bit of the basis index.
struct Circuit {
  std::size_t n_qubits = 0;
  std::vector<Gate> gates;  ///< time order
  double global_phase = 0.0;

  [[nodiscard]] std::size_t cnot_count() const {
    std::size_t c = 0;
    for (const auto& g : gates) c += g.type == GateType::CNOT ? 1 : 0;
    return c;
  }
  [[nodiscard]] std::size_t one_qubit_count() const { return gates.size() - cnot_count(); }

  void append(const Circuit& other) {
    if (other.n_qubits != n_qubits) throw DomainError("Circuit::append: width mismatch");
    gates.insert(gates.end(), other.gates.begin(), other.gates.end());
    global_phase += other.global_phase;
  }

  /// Dense matrix of the whole circuit, for verification.
  [[nodiscard]] CMatrix unitary() const;
};

inline CMatrix gate_matrix(const Gate& g) {
  CMatrix m(2, 2);
  const double h = g.angle / 2.0;
  switch (g.type) {
    case GateType::RY: m << std::cos(h), -std::sin(h), std::sin(h), std::cos(h); break;
    case GateType::RZ: m << std::exp(Complex(0.0, -h)), 0.0, 0.0, std::exp(Complex(0.0, h)); break;
    case GateType::CNOT:
      m.resize(4, 4);
      m << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0;
      break;
  }
  return m;
}

/// Subsystem list a gate acts on (control first for CNOT).
inline std::vector<std::size_t> gate_support(const Gate& g) {
  if (g.type == GateType::CNOT) return {g.control, g.target};
  return {g.target};
}

inline CMatrix Circuit::unitary() const {
  const Layout layout(std::vector<std::size_t>(n_qubits, 2));
  const auto dim = static_cast<Index>(layout.dim());
  CMatrix u = CMatrix::Identity(dim, dim);
  for (Index c = 0; c < dim; ++c) {
    CVector col = u.col(c);
    for (const auto& g : gates) apply_local(col, layout, gate_support(g), gate_matrix(g));
    u.col(c) = col;
  }
  return std::exp(Complex(0.0, global_phase)) * u;
}

namespace detail {

inline std::size_t gray(std::size_t i) { return i ^ (i >> 1); }

/// Multiplexed rotation on `target`: for control value j (controls[0] is the
/// most significant bit) the target sees R(angles[j]). 2^k rotations, 2^k CNOTs.
inline void multiplexed_rotation(Circuit& c, GateType axis, std::size_t target, const std::vector<std::size_t>& controls,
                                 const std::vector<double>& angles) {
  const std::size_t k = controls.size();
  const std::size_t m = std::size_t{1} << k;
  if (angles.size() != m) throw DomainError("multiplexed_rotation: need 2^k angles");
  if (k == 0) {
    c.gates.push_back({axis, target, 0, angles[0]});
    return;
  }
  // alpha_i = 2^-k sum_j (-1)^{popcount(j & gray(i))} theta_j.
  std::vector<double> alpha(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t gi = gray(i);
    for (std::size_t j = 0; j < m; ++j) {
      const bool odd = (std::popcount(j & gi) & 1U) != 0;
      alpha[i] += odd ? -angles[j] : angles[j];
    }
    alpha[i] /= static_cast<double>(m);
  }
  for (std::size_t i = 0; i < m; ++i) {
    c.gates.push_back({axis, target, 0, alpha[i]});
    const std::size_t diff = gray(i) ^ gray((i + 1) % m);
    const auto bit = static_cast<std::size_t>(std::countr_zero(diff));
    c.gates.push_back({GateType::CNOT, target, controls[k - 1 - bit], 0.0});
  }
}

inline void single_qubit(Circuit& c, const CMatrix& u, std::size_t q) {
  // u = e^{i a} Rz(b) Ry(g) Rz(d).
  const Complex det = u.determinant();
  const double a = std::arg(det) / 2.0;
  const CMatrix v = u * std::exp(Complex(0.0, -a));
  const double g = 2.0 * std::atan2(std::abs(v(1, 0)), std::abs(v(0, 0)));
  const double sum = -2.0 * std::arg(v(0, 0));   // b + d
  const double diff = 2.0 * std::arg(v(1, 0));   // b - d
  double b = (sum + diff) / 2.0;
  double d = (sum - diff) / 2.0;
  if (std::abs(v(1, 0)) < 1e-14) {
    b = sum;
    d = 0.0;
  } else if (std::abs(v(0, 0)) < 1e-14) {
    b = diff;
    d = 0.0;
  }
  c.gates.push_back({GateType::RZ, q, 0, d});
  c.gates.push_back({GateType::RY, q, 0, g});
  c.gates.push_back({GateType::RZ, q, 0, b});
  c.global_phase += a;
}

inline std::vector<std::size_t> range(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> r;
  for (std::size_t i = lo; i < hi; ++i) r.push_back(i);
  return r;
}

void qsd(Circuit& c, const CMatrix& u, std::size_t first);

/// A (+) B on qubit `first` (block index) = (I (x) V)(D (+) D^dag)(I (x) W).
inline void demultiplex(Circuit& c, const CMatrix& a, const CMatrix& b, std::size_t first) {
  const CMatrix abd = a * b.adjoint();
  Eigen::ComplexSchur<CMatrix> schur(abd);
  const CMatrix v = schur.matrixU();
  const Index m = a.rows();
  CVector dvals(m);
  std::vector<double> angles(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    const Complex lam = schur.matrixT()(i, i);
    dvals(i) = std::exp(Complex(0.0, std::arg(lam) / 2.0));
    // diag(d, conj d) = Rz(phi) with d = e^{-i phi / 2}.
    angles[static_cast<std::size_t>(i)] = -2.0 * std::arg(dvals(i));
  }
  const CMatrix w = dvals.asDiagonal() * v.adjoint() * b;
  const std::size_t width = static_cast<std::size_t>(std::countr_zero(static_cast<std::size_t>(m)));
  qsd(c, w, first + 1);
  multiplexed_rotation(c, GateType::RZ, first, range(first + 1, first + 1 + width), angles);
  qsd(c, v, first + 1);
}

/// Decompose u (2^w x 2^w) acting on qubits first .. first + w - 1.
inline void qsd(Circuit& c, const CMatrix& u, std::size_t first) {
  const Index dim = u.rows();
  if (dim == 1) {
    c.global_phase += std::arg(u(0, 0));
    return;
  }
  if (dim == 2) {
    single_qubit(c, u, first);
    return;
  }
  const Index m = dim / 2;
  const CMatrix u00 = u.topLeftCorner(m, m);
  const CMatrix u01 = u.topRightCorner(m, m);
  const CMatrix u10 = u.bottomLeftCorner(m, m);
  const CMatrix u11 = u.bottomRightCorner(m, m);

  // Cosine-sine: u = (L0 (+) L1) [[C, -S], [S, C]] (R0 (+) R1).
  Eigen::JacobiSVD<CMatrix> svd(u00, Eigen::ComputeFullU | Eigen::ComputeFullV);
  CMatrix l0 = svd.matrixU();
  CMatrix r0 = svd.matrixV().adjoint();
  Eigen::VectorXd cs = svd.singularValues().cwiseMin(1.0);
  // Sines from column norms; sqrt(1 - c^2) cancels badly for small s.
  CMatrix x = u10 * r0.adjoint();
  Eigen::VectorXd sn(m);
  for (Index i = 0; i < m; ++i) sn(i) = x.col(i).norm();

  // Where c ~ 1 the SVD of u00 cannot separate singular vectors, so the frame
  // is re-chosen from the SVD of the u10 columns, which resolves small sines.
  std::vector<Index> small;
  for (Index i = 0; i < m; ++i) {
    if (sn(i) < 0.5) small.push_back(i);
  }
  if (small.size() > 1) {
    const auto k = static_cast<Index>(small.size());
    CMatrix xk(m, k);
    CMatrix r0k(k, m);
    for (Index j = 0; j < k; ++j) {
      xk.col(j) = x.col(small[static_cast<std::size_t>(j)]);
      r0k.row(j) = r0.row(small[static_cast<std::size_t>(j)]);
    }
    Eigen::JacobiSVD<CMatrix> sk(xk, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const CMatrix r0k_new = sk.matrixV().adjoint() * r0k;
    for (Index j = 0; j < k; ++j) {
      const Index i = small[static_cast<std::size_t>(j)];
      r0.row(i) = r0k_new.row(j);
      x.col(i) = u10 * r0.row(i).adjoint();
      sn(i) = x.col(i).norm();
      const CVector y = u00 * r0.row(i).adjoint();
      cs(i) = std::min(1.0, y.norm());
      l0.col(i) = y / cs(i);
    }
  }

  // Modified Gram-Schmidt in order of decreasing s: well-conditioned columns
  // first, so noise in columns with tiny s cannot leak into them.
  std::vector<Index> order(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return sn(a) > sn(b); });
  CMatrix l1 = CMatrix::Zero(m, m);
  std::vector<Index> done;
  auto project_out = [&](CVector v) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Index j : done) v -= l1.col(j).dot(v) * l1.col(j);
    }
    return v;
  };
  Index next_unit = 0;
  for (Index i : order) {
    CVector v = sn(i) > 1e-13 ? CVector(x.col(i) / sn(i)) : CVector(CVector::Zero(m));
    v = project_out(v);
    while (v.norm() < 0.5) {
      if (next_unit >= m) throw NumericalError("cosine-sine split: cannot complete basis");
      v = project_out(CVector::Unit(m, next_unit++));
    }
    l1.col(i) = v.normalized();
    done.push_back(i);
  }
  // R1 rows from whichever of C, S is larger.
  const CMatrix from_c = l1.adjoint() * u11;
  const CMatrix from_s = -(l0.adjoint() * u01);
  CMatrix r1(m, m);
  for (Index i = 0; i < m; ++i) r1.row(i) = cs(i) >= sn(i) ? CMatrix(from_c.row(i) / cs(i)) : CMatrix(from_s.row(i) / sn(i));

  const std::size_t width = static_cast<std::size_t>(std::countr_zero(static_cast<std::size_t>(m)));
  std::vector<double> theta(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) theta[static_cast<std::size_t>(i)] = 2.0 * std::atan2(sn(i), cs(i));

  demultiplex(c, r0, r1, first);
  multiplexed_rotation(c, GateType::RY, first, range(first + 1, first + 1 + width), theta);
  demultiplex(c, l0, l1, first);
}

}  // namespace detail

/// Full QSD of a 2^q x 2^q unitary.
inline Circuit synthesize_unitary(const CMatrix& u) {
  const auto dim = static_cast<std::size_t>(u.rows());
  if (u.rows() != u.cols() || dim == 0 || (dim & (dim - 1)) != 0) {
    throw DomainError("synthesize_unitary: matrix must be square with power-of-two size");
  }
  if ((u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).norm() > 1e-9) {
    throw DomainError("synthesize_unitary: matrix is not unitary");
  }
  Circuit c;
  c.n_qubits = static_cast<std::size_t>(std::countr_zero(dim));
  detail::qsd(c, u, 0);
  return c;
}

/// diag-block A (+) B with qubit 0 selecting the block: one demultiplexing step.
inline Circuit synthesize_multiplexor(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows()) throw DomainError("synthesize_multiplexor: block size mismatch");
  const auto dim = static_cast<std::size_t>(a.rows());
  if (dim == 0 || (dim & (dim - 1)) != 0) throw DomainError("synthesize_multiplexor: block size must be 2^q");
  Circuit c;
  c.n_qubits = 1 + static_cast<std::size_t>(std::countr_zero(dim));
  detail::demultiplex(c, a, b, 0);
  return c;
}

/// Closed form of the recursion above for a q-qubit QSD.
inline std::size_t qsd_cnot_count(std::size_t q) {
  if (q <= 1) return 0;
  return 4 * qsd_cnot_count(q - 1) + 3 * (std::size_t{1} << (q - 1));
}

}  // namespace hhdaqc
