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
#include <complex>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace hhdaqc {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Pure state. Normalized to 1 after every unitary update.
using StateVector = CVector;
/// Mixed state. Hermitian, unit trace, positive semidefinite.
using DensityMatrix = CMatrix;

inline constexpr Complex kI{0.0, 1.0};

/// Raised when inputs violate a documented precondition (dimension mismatch,
/// bad index, invalid parameter).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical routine fails (non-finite values, failed
/// decomposition, lost normalization).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Layout: mixed-radix index bookkeeping.
// ---------------------------------------------------------------------------

/// Mixed-radix tensor layout. Subsystem 0 is the most significant digit.
class Layout {
 public:
  Layout() = default;
  explicit Layout(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    strides_.assign(dims_.size(), 1);
    std::size_t stride = 1;
    for (std::size_t k = dims_.size(); k-- > 0;) {
      if (dims_[k] == 0) throw DomainError("Layout: zero-dimensional subsystem");
      strides_[k] = stride;
      stride *= dims_[k];
    }
    dim_ = stride;
  }

  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] std::size_t size() const { return dims_.size(); }
  [[nodiscard]] std::size_t dim_of(std::size_t k) const { return dims_.at(k); }
  [[nodiscard]] std::size_t stride_of(std::size_t k) const { return strides_.at(k); }
  [[nodiscard]] const std::vector<std::size_t>& dims() const { return dims_; }

  [[nodiscard]] std::vector<std::size_t> digits(std::size_t global) const {
    if (global >= dim_) throw DomainError("Layout::digits: index out of range");
    std::vector<std::size_t> out(dims_.size());
    for (std::size_t k = 0; k < dims_.size(); ++k) {
      out[k] = (global / strides_[k]) % dims_[k];
    }
    return out;
  }

  [[nodiscard]] std::size_t index(std::span<const std::size_t> digits) const {
    if (digits.size() != dims_.size()) throw DomainError("Layout::index: wrong digit count");
    std::size_t g = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
      if (digits[k] >= dims_[k]) throw DomainError("Layout::index: digit out of range");
      g += digits[k] * strides_[k];
    }
    return g;
  }

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> strides_;
  std::size_t dim_ = 1;
};

/// Hybrid register: qubits first, then bosonic modes, each mode truncated to
/// its own number of levels.
class HilbertSpace {
 public:
  HilbertSpace(std::size_t n_qubits, std::vector<std::size_t> boson_levels)
      : n_qubits_(n_qubits), levels_(std::move(boson_levels)) {
    for (auto n : levels_) {
      if (n < 2) throw DomainError("HilbertSpace: boson truncation must be >= 2");
    }
    std::vector<std::size_t> dims(n_qubits_, 2);
    dims.insert(dims.end(), levels_.begin(), levels_.end());
    layout_ = Layout(std::move(dims));
  }

  [[nodiscard]] std::size_t dim() const { return layout_.dim(); }
  [[nodiscard]] std::size_t n_qubits() const { return n_qubits_; }
  [[nodiscard]] std::size_t n_modes() const { return levels_.size(); }
  [[nodiscard]] std::size_t n_subsystems() const { return layout_.size(); }
  [[nodiscard]] const std::vector<std::size_t>& boson_levels() const { return levels_; }
  [[nodiscard]] std::size_t subsystem_dim(std::size_t k) const {
    check_subsystem(k);
    return layout_.dim_of(k);
  }
  [[nodiscard]] std::size_t qubit(std::size_t q) const {
    if (q >= n_qubits_) throw DomainError("HilbertSpace: qubit index out of range");
    return q;
  }
  [[nodiscard]] std::size_t mode(std::size_t j) const {
    if (j >= levels_.size()) throw DomainError("HilbertSpace: mode index out of range");
    return n_qubits_ + j;
  }
  [[nodiscard]] const Layout& layout() const { return layout_; }

  void check_subsystem(std::size_t k) const {
    if (k >= layout_.size()) throw DomainError("HilbertSpace: subsystem index out of range");
  }

  /// Same global ordering, with every power-of-two mode split into its binary
  /// digits (most significant bit first). Used for binary-encoded digital noise.
  [[nodiscard]] Layout binary_layout() const {
    std::vector<std::size_t> dims(n_qubits_, 2);
    for (auto n : levels_) {
      std::size_t bits = 0;
      while ((std::size_t{1} << bits) < n) ++bits;
      if ((std::size_t{1} << bits) != n) {
        throw DomainError("HilbertSpace::binary_layout: truncation is not a power of two");
      }
      dims.insert(dims.end(), bits, 2);
    }
    return Layout(std::move(dims));
  }

  /// Product basis state from per-subsystem occupations.
  [[nodiscard]] StateVector basis_state(std::span<const std::size_t> occupation) const {
    StateVector psi = StateVector::Zero(static_cast<Index>(dim()));
    psi(static_cast<Index>(layout_.index(occupation))) = 1.0;
    return psi;
  }

 private:
  std::size_t n_qubits_;
  std::vector<std::size_t> levels_;
  Layout layout_;
};

// ---------------------------------------------------------------------------
// Local kernels: operators acting on a subset of subsystems.
// ---------------------------------------------------------------------------

/// Precomputed gather/scatter offsets for an operator acting on `subsystems`
/// (listed most-significant first in the local operator's own ordering).
class LocalIndexer {
 public:
  LocalIndexer(const Layout& layout, std::span<const std::size_t> subsystems) {
    std::vector<bool> used(layout.size(), false);
    std::size_t local_dim = 1;
    for (auto s : subsystems) {
      if (s >= layout.size()) throw DomainError("LocalIndexer: subsystem out of range");
      if (used[s]) throw DomainError("LocalIndexer: repeated subsystem");
      used[s] = true;
      local_dim *= layout.dim_of(s);
    }
    offsets_.assign(local_dim, 0);
    for (std::size_t l = 0; l < local_dim; ++l) {
      std::size_t rem = l;
      std::size_t off = 0;
      for (std::size_t k = subsystems.size(); k-- > 0;) {
        const auto s = subsystems[k];
        off += (rem % layout.dim_of(s)) * layout.stride_of(s);
        rem /= layout.dim_of(s);
      }
      offsets_[l] = off;
    }
    // Enumerate global indices whose digits on `subsystems` are all zero.
    std::vector<std::size_t> free;
    for (std::size_t k = 0; k < layout.size(); ++k) {
      if (!used[k]) free.push_back(k);
    }
    const std::size_t n_bases = layout.dim() / local_dim;
    bases_.reserve(n_bases);
    std::vector<std::size_t> digit(free.size(), 0);
    for (std::size_t b = 0; b < n_bases; ++b) {
      std::size_t g = 0;
      for (std::size_t k = 0; k < free.size(); ++k) g += digit[k] * layout.stride_of(free[k]);
      bases_.push_back(g);
      for (std::size_t k = free.size(); k-- > 0;) {
        if (++digit[k] < layout.dim_of(free[k])) break;
        digit[k] = 0;
      }
    }
  }

  [[nodiscard]] std::size_t local_dim() const { return offsets_.size(); }
  [[nodiscard]] const std::vector<std::size_t>& offsets() const { return offsets_; }
  [[nodiscard]] const std::vector<std::size_t>& bases() const { return bases_; }

  /// v <- op v on the strided vector data[i * stride].
  void apply(const CMatrix& op, Complex* data, std::size_t stride = 1) const {
    const auto d = static_cast<Index>(local_dim());
    if (op.rows() != d || op.cols() != d) throw DomainError("LocalIndexer::apply: operator size");
    // Plain loops: for d <= 16 the fixed overhead of small dynamic Eigen
    // products dominates the arithmetic.
    const auto n = static_cast<std::size_t>(d);
    std::vector<Complex> in(n);
    const Complex* m = op.data();  // column-major
    for (auto base : bases_) {
      for (std::size_t l = 0; l < n; ++l) in[l] = data[(base + offsets_[l]) * stride];
      for (std::size_t r = 0; r < n; ++r) {
        Complex acc = 0.0;
        for (std::size_t c = 0; c < n; ++c) acc += m[c * n + r] * in[c];
        data[(base + offsets_[r]) * stride] = acc;
      }
    }
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> bases_;
};

inline void apply_local(StateVector& psi, const Layout& layout,
                        std::span<const std::size_t> subsystems, const CMatrix& op) {
  if (static_cast<std::size_t>(psi.size()) != layout.dim()) {
    throw DomainError("apply_local: state dimension mismatch");
  }
  LocalIndexer(layout, subsystems).apply(op, psi.data());
}

/// rho <- op rho op^dagger.
inline void conjugate_local(DensityMatrix& rho, const LocalIndexer& idx, const CMatrix& op) {
  const auto dim = rho.rows();
  // op rho op^dag = (op (op rho)^dag)^dag; only contiguous column passes.
  for (int pass = 0; pass < 2; ++pass) {
    for (Index c = 0; c < dim; ++c) idx.apply(op, rho.data() + c * dim, 1);
    rho.adjointInPlace();
  }
}

inline void conjugate_local(DensityMatrix& rho, const Layout& layout,
                            std::span<const std::size_t> subsystems, const CMatrix& op) {
  if (static_cast<std::size_t>(rho.rows()) != layout.dim() || rho.rows() != rho.cols()) {
    throw DomainError("conjugate_local: density matrix dimension mismatch");
  }
  conjugate_local(rho, LocalIndexer(layout, subsystems), op);
}

// ---------------------------------------------------------------------------
// SparseOperator
// ---------------------------------------------------------------------------

/// Immutable sparse complex operator in canonical compressed storage.
class SparseOperator {
 public:
  using Storage = Eigen::SparseMatrix<Complex, Eigen::ColMajor, Index>;
  static constexpr double kDefaultDropTol = 1e-14;
  static constexpr Index kDenseFallbackDim = 256;

  SparseOperator() = default;
  explicit SparseOperator(Index dim) : m_(dim, dim) {}

  explicit SparseOperator(Storage m, double drop_tol = kDefaultDropTol) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw DomainError("SparseOperator: matrix must be square");
    m_.prune([drop_tol](Index, Index, const Complex& v) { return std::abs(v) > drop_tol; });
    m_.makeCompressed();
    if (m_.rows() <= kDenseFallbackDim) dense_cache_ = CMatrix(m_);
  }

  static SparseOperator from_triplets(Index dim, const std::vector<Eigen::Triplet<Complex>>& t,
                                      double drop_tol = kDefaultDropTol) {
    Storage m(dim, dim);
    m.setFromTriplets(t.begin(), t.end());
    return SparseOperator(std::move(m), drop_tol);
  }

  static SparseOperator from_dense(const CMatrix& d, double drop_tol = kDefaultDropTol) {
    if (d.rows() != d.cols()) throw DomainError("SparseOperator: matrix must be square");
    return SparseOperator(Storage(d.sparseView(1.0, drop_tol)), drop_tol);
  }

  static SparseOperator identity(Index dim) {
    Storage m(dim, dim);
    m.setIdentity();
    return SparseOperator(std::move(m));
  }

  [[nodiscard]] Index dim() const { return m_.rows(); }
  [[nodiscard]] Index nonzeros() const { return m_.nonZeros(); }
  [[nodiscard]] const Storage& matrix() const { return m_; }
  [[nodiscard]] CMatrix dense() const { return dense_cache_ ? *dense_cache_ : CMatrix(m_); }

  [[nodiscard]] CVector apply(const CVector& v) const {
    if (v.size() != dim()) throw DomainError("SparseOperator::apply: dimension mismatch");
    if (dense_cache_) return *dense_cache_ * v;
    return m_ * v;
  }

  [[nodiscard]] double hermiticity_error() const {
    Storage diff = m_ - Storage(m_.adjoint());
    double worst = 0.0;
    for (Index k = 0; k < diff.outerSize(); ++k) {
      for (Storage::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    }
    return worst;
  }
  [[nodiscard]] bool is_hermitian(double tol = 1e-12) const { return hermiticity_error() <= tol; }

  [[nodiscard]] SparseOperator adjoint() const { return SparseOperator(Storage(m_.adjoint())); }

  friend SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) {
    check_same(a, b);
    return SparseOperator(Storage(a.m_ + b.m_));
  }
  friend SparseOperator operator-(const SparseOperator& a, const SparseOperator& b) {
    check_same(a, b);
    return SparseOperator(Storage(a.m_ - b.m_));
  }
  friend SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
    check_same(a, b);
    return SparseOperator(Storage(a.m_ * b.m_));
  }
  friend SparseOperator operator*(Complex s, const SparseOperator& a) {
    return SparseOperator(Storage(s * a.m_));
  }
  friend SparseOperator operator*(double s, const SparseOperator& a) { return Complex(s, 0.0) * a; }

  /// Largest entrywise deviation between two operators.
  [[nodiscard]] static double max_abs_diff(const SparseOperator& a, const SparseOperator& b) {
    check_same(a, b);
    Storage diff = a.m_ - b.m_;
    double worst = 0.0;
    for (Index k = 0; k < diff.outerSize(); ++k) {
      for (Storage::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    }
    return worst;
  }

 private:
  static void check_same(const SparseOperator& a, const SparseOperator& b) {
    if (a.dim() != b.dim()) throw DomainError("SparseOperator: dimension mismatch");
  }

  Storage m_;
  std::optional<CMatrix> dense_cache_;
};

/// Commutator [A, B].
inline SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) {
  return a * b - b * a;
}

// ---------------------------------------------------------------------------
// Elementary local operators.
// ---------------------------------------------------------------------------

enum class PauliKind { X, Y, Z, Plus, Minus };

/// Single-qubit operators in the convention |0> = sigma_z eigenvalue +1.
/// sigma_plus = |0><1| raises to the +1 eigenstate.
inline SparseOperator pauli(PauliKind which) {
  CMatrix m = CMatrix::Zero(2, 2);
  switch (which) {
    case PauliKind::X: m << 0, 1, 1, 0; break;
    case PauliKind::Y: m << 0, -kI, kI, 0; break;
    case PauliKind::Z: m << 1, 0, 0, -1; break;
    case PauliKind::Plus: m(0, 1) = 1; break;
    case PauliKind::Minus: m(1, 0) = 1; break;
  }
  return SparseOperator::from_dense(m);
}

enum class LadderKind { Annihilate, Create, Number };

/// Truncated bosonic ladder operators: a|m> = sqrt(m)|m-1>.
inline SparseOperator ladder(std::size_t n, LadderKind which) {
  if (n < 2) throw DomainError("ladder: truncation must be >= 2");
  std::vector<Eigen::Triplet<Complex>> t;
  const auto dim = static_cast<Index>(n);
  for (Index m = 1; m < dim; ++m) {
    const double amp = std::sqrt(static_cast<double>(m));
    switch (which) {
      case LadderKind::Annihilate: t.emplace_back(m - 1, m, amp); break;
      case LadderKind::Create: t.emplace_back(m, m - 1, amp); break;
      case LadderKind::Number: t.emplace_back(m, m, static_cast<double>(m)); break;
    }
  }
  return SparseOperator::from_triplets(dim, t);
}

/// Embed a dense local operator acting on `subsystems` into the full space.
inline SparseOperator embed(const Layout& layout, std::span<const std::size_t> subsystems,
                            const CMatrix& local, double drop_tol = SparseOperator::kDefaultDropTol) {
  LocalIndexer idx(layout, subsystems);
  const auto d = static_cast<Index>(idx.local_dim());
  if (local.rows() != d || local.cols() != d) throw DomainError("embed: local operator dimension mismatch");
  std::vector<Eigen::Triplet<Complex>> t;
  for (Index c = 0; c < d; ++c) {
    for (Index r = 0; r < d; ++r) {
      const Complex v = local(r, c);
      if (std::abs(v) <= drop_tol) continue;
      for (auto base : idx.bases()) {
        t.emplace_back(static_cast<Index>(base + idx.offsets()[r]),
                       static_cast<Index>(base + idx.offsets()[c]), v);
      }
    }
  }
  return SparseOperator::from_triplets(static_cast<Index>(layout.dim()), t, drop_tol);
}

/// I x ... x local_op x ... x I in the space's fixed ordering.
inline SparseOperator embed_single(const HilbertSpace& space, std::size_t subsystem,
                                   const SparseOperator& local_op) {
  space.check_subsystem(subsystem);
  if (static_cast<std::size_t>(local_op.dim()) != space.subsystem_dim(subsystem)) {
    throw DomainError("embed_single: local operator dimension does not match subsystem");
  }
  const std::size_t subs[] = {subsystem};
  return embed(space.layout(), subs, local_op.dense());
}

// ---------------------------------------------------------------------------
// Matrix exponential action.
// ---------------------------------------------------------------------------

struct ExpmOptions {
  /// Dense eigendecomposition is used up to this dimension.
  Index dense_limit = 4096;
  bool require_hermitian = true;
};

/// Hermitian eigendecomposition H = V diag(w) V^dagger, reusable for many times.
class Spectral {
 public:
  explicit Spectral(const CMatrix& h) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    if (es.info() != Eigen::Success) throw NumericalError("Spectral: eigendecomposition failed");
    values_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
  }

  [[nodiscard]] const Eigen::VectorXd& values() const { return values_; }
  [[nodiscard]] const CMatrix& vectors() const { return vectors_; }

  [[nodiscard]] CVector coefficients(const CVector& psi) const { return vectors_.adjoint() * psi; }

  /// e^{-iHt} psi given precomputed coefficients c = V^dagger psi.
  [[nodiscard]] CVector evolve_coefficients(const CVector& c, double t) const {
    CVector phased(c.size());
    for (Index k = 0; k < c.size(); ++k) phased(k) = std::exp(-kI * values_(k) * t) * c(k);
    return vectors_ * phased;
  }

  [[nodiscard]] CMatrix unitary(double t) const {
    CVector ph(values_.size());
    for (Index k = 0; k < values_.size(); ++k) ph(k) = std::exp(-kI * values_(k) * t);
    return vectors_ * ph.asDiagonal() * vectors_.adjoint();
  }

 private:
  Eigen::VectorXd values_;
  CMatrix vectors_;
};

/// Dense e^{-iHt} for a Hermitian matrix.
inline CMatrix expm_hermitian(const CMatrix& h, double t) { return Spectral(h).unitary(t); }

namespace detail {

inline double one_norm(const SparseOperator::Storage& m) {
  double best = 0.0;
  for (Index k = 0; k < m.outerSize(); ++k) {
    double col = 0.0;
    for (SparseOperator::Storage::InnerIterator it(m, k); it; ++it) col += std::abs(it.value());
    best = std::max(best, col);
  }
  return best;
}

/// Truncated Taylor series with time slicing so each slice has ||H dt|| <= 1.
inline CVector taylor_expm_apply(const SparseOperator& h, CVector psi, double t) {
  const double norm = one_norm(h.matrix()) * std::abs(t);
  const auto slices = std::max<long>(1, static_cast<long>(std::ceil(norm)));
  const double dt = t / static_cast<double>(slices);
  for (long s = 0; s < slices; ++s) {
    CVector term = psi;
    CVector acc = psi;
    for (int k = 1; k < 60; ++k) {
      term = h.apply(term) * (-kI * dt / static_cast<double>(k));
      acc += term;
      if (term.norm() <= 1e-17 * acc.norm()) break;
    }
    psi = std::move(acc);
  }
  return psi;
}

}  // namespace detail

/// e^{-iHt} psi. Dense eigendecomposition up to `dense_limit`, sliced Taylor
/// polynomial action above it.
inline StateVector expm_apply(const SparseOperator& h, const StateVector& psi, double t,
                              const ExpmOptions& opts = {}) {
  if (psi.size() != h.dim()) throw DomainError("expm_apply: dimension mismatch");
  if (opts.require_hermitian && !h.is_hermitian()) {
    throw DomainError("expm_apply: operator is not Hermitian");
  }
  if (t == 0.0) return psi;
  if (h.dim() <= opts.dense_limit) {
    Spectral sp(h.dense());
    return sp.evolve_coefficients(sp.coefficients(psi), t);
  }
  return detail::taylor_expm_apply(h, psi, t);
}

}  // namespace hhdaqc
