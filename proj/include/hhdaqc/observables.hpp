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
#include <numbers>
#include <vector>

#include "hhdaqc/model.hpp"
#include "hhdaqc/tensor.hpp"

namespace hhdaqc {

/// |<ref|psi>|^2.
inline double fidelity(const StateVector& ref, const StateVector& psi) {
  if (ref.size() != psi.size()) throw DomainError("fidelity: dimension mismatch");
  return std::norm(ref.dot(psi));
}

/// <ref|rho|ref>.
inline double fidelity(const StateVector& ref, const DensityMatrix& rho) {
  if (rho.rows() != ref.size() || rho.cols() != ref.size()) throw DomainError("fidelity: dimension mismatch");
  return std::real(ref.dot(rho * ref));
}

inline DensityMatrix pure_density(const StateVector& psi) { return psi * psi.adjoint(); }

namespace detail {

/// Diagonal observable: sum_g w(g) |psi_g|^2 or sum_g w(g) rho_gg.
template <class Weight>
double diagonal_expectation(const Layout& layout, const StateVector& psi, Weight w) {
  if (static_cast<std::size_t>(psi.size()) != layout.dim()) throw DomainError("observable: dimension mismatch");
  double acc = 0.0;
  for (std::size_t g = 0; g < layout.dim(); ++g) acc += w(layout.digits(g)) * std::norm(psi(static_cast<Index>(g)));
  return acc;
}

template <class Weight>
double diagonal_expectation(const Layout& layout, const DensityMatrix& rho, Weight w) {
  if (static_cast<std::size_t>(rho.rows()) != layout.dim()) throw DomainError("observable: dimension mismatch");
  double acc = 0.0;
  for (std::size_t g = 0; g < layout.dim(); ++g) {
    acc += w(layout.digits(g)) * std::real(rho(static_cast<Index>(g), static_cast<Index>(g)));
  }
  return acc;
}

}  // namespace detail

/// <n_{j,up} n_{j,down}>: projector onto both qubits of site j occupied (|0>).
template <class State>
double double_occupation(const HilbertSpace& space, const State& state, std::size_t site) {
  const std::size_t up = 2 * site;
  const std::size_t dn = 2 * site + 1;
  if (dn >= space.n_qubits()) throw DomainError("double_occupation: invalid site");
  return detail::diagonal_expectation(space.layout(), state, [&](const std::vector<std::size_t>& d) {
    return (d[up] == 0 && d[dn] == 0) ? 1.0 : 0.0;
  });
}

/// sum_j <a_j^dag a_j> over all modes.
template <class State>
double phonon_number(const HilbertSpace& space, const State& state) {
  return detail::diagonal_expectation(space.layout(), state, [&](const std::vector<std::size_t>& d) {
    double n = 0.0;
    for (std::size_t j = 0; j < space.n_modes(); ++j) n += static_cast<double>(d[space.mode(j)]);
    return n;
  });
}

/// Total fermion number sum_m <(1 + Z_m)/2>.
template <class State>
double fermion_number(const HilbertSpace& space, const State& state) {
  return detail::diagonal_expectation(space.layout(), state, [&](const std::vector<std::size_t>& d) {
    double n = 0.0;
    for (std::size_t q = 0; q < space.n_qubits(); ++q) n += (d[q] == 0) ? 1.0 : 0.0;
    return n;
  });
}

/// Angular frequency of the largest periodogram peak (mean removed, no window,
/// zero bin excluded). Resolution is 2 pi / (M dt).
inline double dominant_frequency(const std::vector<double>& times, const std::vector<double>& series) {
  const std::size_t m = series.size();
  if (times.size() != m) throw DomainError("dominant_frequency: times and series differ in length");
  if (m < 64) throw DomainError("dominant_frequency: need at least 64 samples");
  const double dt = times[1] - times[0];
  if (!(dt > 0.0)) throw DomainError("dominant_frequency: non-increasing grid");
  for (std::size_t i = 1; i < m; ++i) {
    if (std::abs((times[i] - times[i - 1]) - dt) > 1e-9 * std::max(1.0, std::abs(dt))) {
      throw DomainError("dominant_frequency: non-uniform time grid");
    }
  }
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(m);

  double best_power = 0.0;
  std::size_t best_bin = 0;
  for (std::size_t j = 1; j <= m / 2; ++j) {
    Complex acc = 0.0;
    const double w = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) acc += (series[i] - mean) * std::exp(-kI * (w * static_cast<double>(i)));
    const double power = std::norm(acc);
    if (power > best_power) {
      best_power = power;
      best_bin = j;
    }
  }
  double variance = 0.0;
  for (double v : series) variance += (v - mean) * (v - mean);
  if (best_bin == 0 || variance <= 1e-24 * static_cast<double>(m)) {
    throw DomainError("dominant_frequency: series has no nonzero spectral peak");
  }
  return 2.0 * std::numbers::pi * static_cast<double>(best_bin) / (static_cast<double>(m) * dt);
}

/// Peak-to-trough amplitude of the fluctuations about a least-squares
/// quadratic trend (removes slow decay before measuring oscillations).
inline double oscillation_amplitude(const std::vector<double>& times, const std::vector<double>& series) {
  const std::size_t m = series.size();
  if (times.size() != m) throw DomainError("oscillation_amplitude: times and series differ in length");
  if (m < 4) throw DomainError("oscillation_amplitude: need at least 4 samples");
  const double t0 = times.front();
  const double span = times.back() - t0;
  if (!(span > 0.0)) throw DomainError("oscillation_amplitude: degenerate time grid");
  Eigen::MatrixXd a(static_cast<Index>(m), 3);
  Eigen::VectorXd y(static_cast<Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const double x = (times[i] - t0) / span;
    a.row(static_cast<Index>(i)) << 1.0, x, x * x;
    y(static_cast<Index>(i)) = series[i];
  }
  const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd r = y - a * coef;
  return r.maxCoeff() - r.minCoeff();
}

}  // namespace hhdaqc
