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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "hhdaqc/evolve.hpp"
#include "hhdaqc/model.hpp"
#include "hhdaqc/observables.hpp"

using namespace hhdaqc;

namespace {

HHParams pair_params(double g, std::size_t n) {
  HHParams p;
  p.omega0 = 8.0;
  p.U = 8.0;
  p.k = 1.0;
  p.g = g;
  p.lattice = {1, 2};
  p.boson_levels = n;
  return p;
}

}  // namespace

TEST_CASE("single time returns the initial state", "[evolve]") {
  const HHParams p = pair_params(0.1, 4);
  const auto space = make_space(p);
  const std::size_t occ[] = {0, 0, 1, 1, 0, 0};
  const CVector psi = space.basis_state(occ);
  const auto traj = exact_trajectory(build_spin_boson(p).total(), psi, {0.0});
  REQUIRE(traj.size() == 1);
  REQUIRE((traj.states[0] - psi).norm() == 0.0);
}

TEST_CASE("number state returns after one oscillator period", "[evolve]") {
  const double omega0 = 1.7;
  const SparseOperator h = omega0 * ladder(8, LadderKind::Number);
  CVector one = CVector::Zero(8);
  one(1) = 1.0;
  const auto traj = exact_trajectory(h, one, {0.0, 2 * std::numbers::pi / omega0});
  REQUIRE(fidelity(one, traj.states[1]) == Catch::Approx(1.0).margin(1e-13));
}

TEST_CASE("time grid validation", "[evolve]") {
  const SparseOperator h = ladder(3, LadderKind::Number);
  CVector v = CVector::Zero(3);
  v(0) = 1.0;
  REQUIRE_THROWS_AS(exact_trajectory(h, v, {0.0, 2.0, 1.0}), DomainError);
  REQUIRE_THROWS_AS(exact_trajectory(h, v, {-1.0, 0.0}), DomainError);
  REQUIRE_THROWS_AS(exact_trajectory(h, v, {}), DomainError);
  REQUIRE_THROWS_AS(exact_trajectory(h, CVector::Zero(2), {0.0}), DomainError);
  REQUIRE(uniform_times(1.0, 4).size() == 5);
  REQUIRE(uniform_times(1.0, 4).back() == 1.0);
}

TEST_CASE("propagator matches a dense Pade exponential", "[evolve]") {
  HHParams p = pair_params(1.2, 4);
  p.U = 3.0;
  p.omega0 = 2.0;
  const auto space = make_space(p);
  const auto h = build_spin_boson(p).total();
  const std::size_t occ[] = {0, 1, 1, 0, 0, 0};
  const CVector psi = space.basis_state(occ);
  const ExactPropagator prop(h, psi);
  REQUIRE(prop.reduced_dim() < space.dim());
  for (double t : {0.3, 1.7}) {
    const CMatrix u = ((-kI * t) * h.dense()).exp();
    REQUIRE((prop.at(t) - u * psi).norm() < 1e-10);
  }
}

TEST_CASE("sparse fallback agrees with the spectral path", "[evolve]") {
  HHParams p = pair_params(0.8, 4);
  p.lattice = {1, 3};
  const auto space = make_space(p);
  const auto h = build_spin_boson(p).total();
  const std::size_t occ[] = {0, 0, 1, 1, 1, 1, 0, 0, 0};
  const CVector psi = space.basis_state(occ);
  const ExactPropagator dense(h, psi);
  const ExactPropagator sparse(h, psi, {.dense_limit = 16});
  REQUIRE((dense.at(0.9) - sparse.at(0.9)).norm() < 1e-9);
}

TEST_CASE("norm, energy and particle number are conserved", "[evolve][property]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(0.0, 4.0);
  for (int trial = 0; trial < 5; ++trial) {
    HHParams p = pair_params(uni(rng), 5);
    p.U = uni(rng) * 2;
    p.omega0 = 0.5 + uni(rng);
    const auto space = make_space(p);
    const auto h = build_spin_boson(p).total();
    const std::size_t occ[] = {0, 1, 1, 0, 0, 0};
    const CVector psi = space.basis_state(occ);
    const double e0 = std::real(psi.dot(h.apply(psi)));
    const auto traj = exact_trajectory(h, psi, uniform_times(5.0, 20));
    for (const auto& s : traj.states) {
      REQUIRE(std::abs(s.norm() - 1.0) < 1e-10);
      REQUIRE(std::abs(std::real(s.dot(h.apply(s))) - e0) < 1e-8);
      REQUIRE(std::abs(fermion_number(space, s) - 2.0) < 1e-8);
    }
  }
}

TEST_CASE("pair dynamics at U = omega0 = 8k", "[evolve]") {
  // g = 0: the pair-breaking amplitude gives min total double occupation
  // 1 - 8k^2 / (U^2 + 16k^2) = 0.9 exactly.
  // g = 0.1k: the resonance omega0 = U pulls it slightly lower (about 0.891).
  for (double g : {0.0, 0.1}) {
    const HHParams p = pair_params(g, 6);
    const auto space = make_space(p);
    const std::size_t occ[] = {0, 0, 1, 1, 0, 0};
    const auto traj =
        exact_trajectory(build_spin_boson(p).total(), space.basis_state(occ), uniform_times(20.0, 4000));
    double min_total = 1.0;
    double max_ph = 0.0;
    for (const auto& s : traj.states) {
      min_total = std::min(min_total, double_occupation(space, s, 0) + double_occupation(space, s, 1));
      max_ph = std::max(max_ph, phonon_number(space, s));
    }
    if (g == 0.0) {
      REQUIRE(min_total == Catch::Approx(1.0 - 8.0 / 80.0).margin(1e-5));
      REQUIRE(max_ph == 0.0);
    } else {
      REQUIRE(min_total == Catch::Approx(0.8911).margin(1e-3));
      REQUIRE(max_ph <= 0.1);
    }
  }
}
