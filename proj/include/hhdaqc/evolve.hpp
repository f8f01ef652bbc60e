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

#include <deque>
#include <vector>

#include "hhdaqc/tensor.hpp"

namespace hhdaqc {

template <class State>
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;

  [[nodiscard]] std::size_t size() const { return times.size(); }
  void push(double t, State s) {
    times.push_back(t);
    states.push_back(std::move(s));
  }
};

using PureTrajectory = Trajectory<StateVector>;
using MixedTrajectory = Trajectory<DensityMatrix>;

inline void check_time_grid(const std::vector<double>& times) {
  if (times.empty()) throw DomainError("time grid is empty");
  if (times.front() < 0.0) throw DomainError("time grid must start at t >= 0");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw DomainError("time grid must be strictly increasing");
  }
}

/// Uniform grid 0, dt, ..., t_final with `steps` intervals.
inline std::vector<double> uniform_times(double t_final, std::size_t steps) {
  if (steps == 0) return {0.0};
  std::vector<double> out(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) out[i] = t_final * static_cast<double>(i) / static_cast<double>(steps);
  return out;
}

/// Basis indices reachable from the support of `psi` through nonzero entries of `h`.
/// h is block diagonal over these components, so evolution stays inside.
inline std::vector<Index> reachable_subspace(const SparseOperator& h, const StateVector& psi,
                                             double tol = 0.0) {
  const Index dim = h.dim();
  std::vector<char> seen(static_cast<std::size_t>(dim), 0);
  std::deque<Index> frontier;
  for (Index i = 0; i < dim; ++i) {
    if (std::abs(psi(i)) > tol) {
      seen[static_cast<std::size_t>(i)] = 1;
      frontier.push_back(i);
    }
  }
  // Column-major storage: column c lists rows r with H(r, c) != 0.
  const auto& m = h.matrix();
  while (!frontier.empty()) {
    const Index c = frontier.front();
    frontier.pop_front();
    for (SparseOperator::Storage::InnerIterator it(m, c); it; ++it) {
      const auto r = static_cast<std::size_t>(it.row());
      if (!seen[r]) {
        seen[r] = 1;
        frontier.push_back(it.row());
      }
    }
  }
  std::vector<Index> out;
  for (Index i = 0; i < dim; ++i) {
    if (seen[static_cast<std::size_t>(i)]) out.push_back(i);
  }
  return out;
}

/// Exact propagator for a fixed (H, psi0): one eigendecomposition of the block
/// of H that psi0 can reach, reused for every time.
class ExactPropagator {
 public:
  ExactPropagator(const SparseOperator& h, const StateVector& psi0, const ExpmOptions& opts = {})
      : h_(h), psi0_(psi0), opts_(opts) {
    if (psi0.size() != h.dim()) throw DomainError("ExactPropagator: dimension mismatch");
    if (opts.require_hermitian && !h.is_hermitian()) throw DomainError("ExactPropagator: H is not Hermitian");
    support_ = reachable_subspace(h, psi0);
    const auto n = static_cast<Index>(support_.size());
    if (n <= opts.dense_limit) {
      CMatrix block(n, n);
      const CMatrix full = (h.dim() <= opts.dense_limit) ? h.dense() : CMatrix();
      if (full.size() > 0) {
        for (Index c = 0; c < n; ++c) {
          for (Index r = 0; r < n; ++r) block(r, c) = full(support_[r], support_[c]);
        }
      } else {
        block.setZero();
        std::vector<Index> pos(static_cast<std::size_t>(h.dim()), -1);
        for (Index i = 0; i < n; ++i) pos[static_cast<std::size_t>(support_[i])] = i;
        const auto& m = h.matrix();
        for (Index c = 0; c < n; ++c) {
          for (SparseOperator::Storage::InnerIterator it(m, support_[c]); it; ++it) {
            block(pos[static_cast<std::size_t>(it.row())], c) = it.value();
          }
        }
      }
      CVector local(n);
      for (Index i = 0; i < n; ++i) local(i) = psi0(support_[i]);
      spectral_.emplace(block);
      coeffs_ = spectral_->coefficients(local);
    }
  }

  [[nodiscard]] StateVector at(double t) const {
    if (t == 0.0) return psi0_;
    if (!spectral_) return expm_apply(h_, psi0_, t, {.dense_limit = opts_.dense_limit, .require_hermitian = false});
    const CVector local = spectral_->evolve_coefficients(coeffs_, t);
    StateVector out = StateVector::Zero(psi0_.size());
    for (std::size_t i = 0; i < support_.size(); ++i) out(support_[i]) = local(static_cast<Index>(i));
    return out;
  }

  [[nodiscard]] std::size_t reduced_dim() const { return support_.size(); }

 private:
  SparseOperator h_;
  StateVector psi0_;
  ExpmOptions opts_;
  std::vector<Index> support_;
  std::optional<Spectral> spectral_;
  CVector coeffs_;
};

/// states[i] = e^{-iH times[i]} psi0.
inline PureTrajectory exact_trajectory(const SparseOperator& h, const StateVector& psi0,
                                       const std::vector<double>& times, const ExpmOptions& opts = {}) {
  check_time_grid(times);
  ExactPropagator prop(h, psi0, opts);
  PureTrajectory out;
  for (double t : times) out.push(t, prop.at(t));
  return out;
}

}  // namespace hhdaqc
