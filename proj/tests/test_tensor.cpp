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

#include "hhdaqc/tensor.hpp"

using namespace hhdaqc;
using Catch::Approx;

namespace {

CMatrix random_hermitian(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  CMatrix a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = Complex(nd(rng), nd(rng));
  return 0.5 * (a + a.adjoint());
}

CVector random_state(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  CVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = Complex(nd(rng), nd(rng));
  return v.normalized();
}

// Independent reference: Pade-based matrix exponential from Eigen's unsupported module.
CVector pade_reference(const CMatrix& h, const CVector& psi, double t) {
  const CMatrix gen = (-kI * t) * h;
  return gen.exp() * psi;
}

}  // namespace

TEST_CASE("layout digits and index are mutually inverse", "[tensor]") {
  const HilbertSpace space(3, {3, 4});
  REQUIRE(space.dim() == 2 * 2 * 2 * 3 * 4);
  for (std::size_t g = 0; g < space.dim(); ++g) {
    const auto d = space.layout().digits(g);
    REQUIRE(space.layout().index(d) == g);
  }
  REQUIRE_THROWS_AS(HilbertSpace(1, {1}), DomainError);
}

TEST_CASE("embed sigma_z on the first qubit is qubit-0-major", "[tensor]") {
  const HilbertSpace space(2, {});
  const CMatrix z0 = embed_single(space, 0, pauli(PauliKind::Z)).dense();
  CMatrix expected = CMatrix::Zero(4, 4);
  expected.diagonal() << 1, 1, -1, -1;
  REQUIRE((z0 - expected).norm() == 0.0);
}

TEST_CASE("embedding the identity gives the global identity", "[tensor]") {
  const HilbertSpace space(2, {3});
  for (std::size_t s = 0; s < space.n_subsystems(); ++s) {
    const auto id = SparseOperator::identity(static_cast<Index>(space.subsystem_dim(s)));
    const CMatrix e = embed_single(space, s, id).dense();
    REQUIRE((e - CMatrix::Identity(12, 12)).norm() == 0.0);
  }
}

TEST_CASE("embedded annihilator matches basis enumeration", "[tensor]") {
  const HilbertSpace space(1, {3});
  const CMatrix a = embed_single(space, 1, ladder(3, LadderKind::Annihilate)).dense();
  // Oracle: |q, m> -> sqrt(m) |q, m-1>, index = 3 q + m.
  CMatrix oracle = CMatrix::Zero(6, 6);
  for (int q = 0; q < 2; ++q)
    for (int m = 1; m < 3; ++m) oracle(3 * q + m - 1, 3 * q + m) = std::sqrt(static_cast<double>(m));
  REQUIRE((a - oracle).norm() < 1e-15);
  REQUIRE(a(0, 1) == Complex(1.0, 0.0));
  REQUIRE(std::abs(a(1, 2) - std::sqrt(2.0)) < 1e-15);

  const CMatrix a2 = a * a;
  for (int q = 0; q < 2; ++q)
    for (int m = 0; m < 2; ++m) {
      CVector e = CVector::Zero(6);
      e(3 * q + m) = 1.0;
      REQUIRE((a2 * e).norm() == 0.0);
    }
}

TEST_CASE("embedding errors", "[tensor]") {
  const HilbertSpace space(2, {4});
  REQUIRE_THROWS_AS(embed_single(space, 2, pauli(PauliKind::X)), DomainError);
  REQUIRE_THROWS_AS(embed_single(space, 5, pauli(PauliKind::X)), DomainError);
}

TEST_CASE("pauli and ladder elementary matrices", "[tensor]") {
  CMatrix n2 = ladder(2, LadderKind::Number).dense();
  REQUIRE(n2(0, 0) == Complex(0.0));
  REQUIRE(n2(1, 1) == Complex(1.0));

  const CMatrix pm = pauli(PauliKind::Plus).dense() * pauli(PauliKind::Minus).dense();
  CMatrix proj = CMatrix::Zero(2, 2);
  proj(0, 0) = 1.0;
  REQUIRE((pm - proj).norm() == 0.0);

  REQUIRE(std::abs(ladder(8, LadderKind::Create).dense()(5, 4) - std::sqrt(5.0)) < 1e-15);
  REQUIRE_THROWS_AS(ladder(1, LadderKind::Number), DomainError);
}

TEST_CASE("sparse operator drops zeros and tracks hermiticity", "[tensor]") {
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 1) = 1e-20;
  d(1, 2) = 2.0;
  d(2, 1) = 2.0;
  const auto op = SparseOperator::from_dense(d);
  REQUIRE(op.nonzeros() == 2);
  REQUIRE(op.is_hermitian());
  d(2, 1) = 1.0;
  REQUIRE_FALSE(SparseOperator::from_dense(d).is_hermitian());
}

TEST_CASE("expm_apply elementary cases", "[tensor][expm]") {
  const auto z = pauli(PauliKind::Z);
  CVector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  REQUIRE((expm_apply(z, plus, 0.0) - plus).norm() == 0.0);

  CVector minus(2);
  minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  const CVector out = expm_apply(z, plus, std::numbers::pi / 2);
  REQUIRE(std::norm(minus.dot(out)) == Approx(1.0).margin(1e-14));

  CMatrix nh = CMatrix::Zero(2, 2);
  nh(0, 1) = 1.0;
  REQUIRE_THROWS_AS(expm_apply(SparseOperator::from_dense(nh), plus, 1.0), DomainError);
}

TEST_CASE("expm_apply matches an independent Pade exponential", "[tensor][expm]") {
  std::mt19937_64 rng(20261019);
  const CMatrix h = random_hermitian(64, rng);
  const CVector psi = random_state(64, rng);
  const auto op = SparseOperator::from_dense(h);
  const CVector ref = pade_reference(h, psi, 0.37);

  const CVector dense_path = expm_apply(op, psi, 0.37);
  REQUIRE((dense_path - ref).norm() / ref.norm() < 1e-9);

  const CVector taylor_path = expm_apply(op, psi, 0.37, {.dense_limit = 0});
  REQUIRE((taylor_path - ref).norm() / ref.norm() < 1e-9);
}

TEST_CASE("expm_apply properties over random instances", "[tensor][expm][property]") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ut(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 40);
    const auto h = SparseOperator::from_dense(random_hermitian(n, rng));
    const CVector psi = random_state(n, rng);
    const double t1 = ut(rng);
    const double t2 = ut(rng);
    for (Index limit : {Index{4096}, Index{0}}) {
      const ExpmOptions opts{.dense_limit = limit};
      const CVector a = expm_apply(h, psi, t1, opts);
      REQUIRE(std::abs(a.norm() - 1.0) < 1e-10);
      const CVector whole = expm_apply(h, psi, t1 + t2, opts);
      const CVector split = expm_apply(h, a, t2, opts);
      REQUIRE((whole - split).norm() < 1e-9);
    }
  }
}

TEST_CASE("embeddings on disjoint subsystems commute exactly", "[tensor][property]") {
  std::mt19937_64 rng(11);
  const HilbertSpace space(3, {3});
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t s1 = rng() % space.n_subsystems();
    std::size_t s2 = rng() % space.n_subsystems();
    if (s2 == s1) s2 = (s1 + 1) % space.n_subsystems();
    const auto a = SparseOperator::from_dense(random_hermitian(static_cast<Index>(space.subsystem_dim(s1)), rng));
    const auto b = SparseOperator::from_dense(random_hermitian(static_cast<Index>(space.subsystem_dim(s2)), rng));
    const auto ea = embed_single(space, s1, a);
    const auto eb = embed_single(space, s2, b);
    REQUIRE(SparseOperator::max_abs_diff(ea * eb, eb * ea) == 0.0);
  }
}

TEST_CASE("local kernels agree with embedded operators", "[tensor]") {
  std::mt19937_64 rng(3);
  const HilbertSpace space(3, {4});
  const std::size_t subs[] = {3, 1};
  const CMatrix local = random_hermitian(8, rng);
  const auto full = embed(space.layout(), subs, local);
  CVector psi = random_state(static_cast<Index>(space.dim()), rng);
  const CVector ref = full.apply(psi);
  apply_local(psi, space.layout(), subs, local);
  REQUIRE((psi - ref).norm() < 1e-12);

  DensityMatrix rho = random_state(static_cast<Index>(space.dim()), rng) * random_state(static_cast<Index>(space.dim()), rng).adjoint();
  const CMatrix dense = full.dense();
  const CMatrix expected = dense * rho * dense.adjoint();
  conjugate_local(rho, space.layout(), subs, local);
  REQUIRE((rho - expected).norm() < 1e-12);
}
