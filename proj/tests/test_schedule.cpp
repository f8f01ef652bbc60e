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

#include "hhdaqc/device.hpp"
#include "hhdaqc/observables.hpp"
#include "hhdaqc/schedule.hpp"

using namespace hhdaqc;
constexpr double kPi = std::numbers::pi;

namespace {

HHParams params(std::size_t rows, std::size_t cols, double omega0, double U, double k, double g, std::size_t n) {
  HHParams p;
  p.omega0 = omega0;
  p.U = U;
  p.k = k;
  p.g = g;
  p.lattice = {rows, cols};
  p.boson_levels = n;
  return p;
}

CMatrix kron2(Pauli a, Pauli b) { return Eigen::kroneckerProduct(pauli_matrix(a), pauli_matrix(b)).eval(); }

CVector random_state(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  CVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = Complex(nd(rng), nd(rng));
  return v.normalized();
}

CMatrix dense_expm(const SparseOperator& h, double t) { return ((-kI * t) * h.dense()).exp(); }

SparseOperator line_operator(const std::vector<StringTerm>& terms, Pauli letter, const Layout& layout) {
  SparseOperator out(static_cast<Index>(layout.dim()));
  for (const auto& t : terms) {
    if (t.string.letters().begin()->second == letter) out = out + t.coeff * t.string.to_operator(layout);
  }
  return out;
}

}  // namespace

TEST_CASE("every preset generates its named operator", "[device]") {
  for (const auto& p : preset_table()) {
    const CMatrix got = preset_generator(p, 4);
    CMatrix target;
    if (p.coupling == CouplingKind::QubitQubit) {
      target = kron2(p.first, p.second);
    } else {
      const CMatrix a = ladder(4, LadderKind::Annihilate).dense();
      target = Eigen::kroneckerProduct(pauli_matrix(Pauli::X), CMatrix(a + a.adjoint())).eval();
    }
    INFO(p.name);
    REQUIRE((got - p.scale * target).norm() < 1e-14);
    REQUIRE((got - got.adjoint()).norm() < 1e-14);
  }
  REQUIRE(preset_name(Pauli::X, Pauli::Y, -0.3) == "XY-");
  REQUIRE_THROWS_AS(preset("nope"), DomainError);
}

TEST_CASE("XY + YX has no single phase setting", "[device]") {
  const CMatrix target = kron2(Pauli::X, Pauli::Y) + kron2(Pauli::Y, Pauli::X);
  for (int a = -8; a < 8; ++a) {
    for (int b = -8; b < 8; ++b) {
      const CMatrix g = qq_generator({a * kPi / 8, b * kPi / 8});
      // Proportional iff the projection residual vanishes.
      const Complex c = (target.adjoint() * g).trace() / (target.adjoint() * target).trace();
      REQUIRE((g - c * target).norm() > 1e-6);
    }
  }
  // The two halves commute, so consecutive settings realize it exactly.
  const CMatrix xy = kron2(Pauli::X, Pauli::Y);
  const CMatrix yx = kron2(Pauli::Y, Pauli::X);
  REQUIRE((xy * yx - yx * xy).norm() == 0.0);
}

TEST_CASE("analog star is the exact site-local exponential", "[schedule][star]") {
  SECTION("t = 0 is the identity") {
    const HHParams p = params(1, 2, 1.0, 2.0, 1.0, 0.5, 3);
    const CVector psi = random_state(static_cast<Index>(make_space(p).dim()), 1);
    CVector out = psi;
    analog_star(p, 0.0, out);
    REQUIRE((out - psi).norm() < 1e-14);
  }
  SECTION("g = 0, U = 4, t = pi/4 against the dense oracle") {
    const HHParams p = params(1, 2, 1.3, 4.0, 1.0, 0.0, 3);
    const auto star = build_spin_boson(p).star();
    const CVector psi = random_state(star.dim(), 2);
    CVector out = psi;
    analog_star(p, kPi / 4, out);
    REQUIRE((out - dense_expm(star, kPi / 4) * psi).norm() < 1e-12);
  }
  SECTION("fifty short blocks equal one long block") {
    const HHParams p = params(1, 2, 0.9, 3.0, 1.0, 0.7, 4);
    const auto star = build_spin_boson(p).star();
    const CVector psi = random_state(star.dim(), 3);
    CVector out = psi;
    for (int i = 0; i < 50; ++i) analog_star(p, 0.02, out);
    REQUIRE((out - dense_expm(star, 1.0) * psi).norm() < 1e-10);
  }
}

TEST_CASE("horizontal step", "[schedule][horizontal]") {
  SECTION("dt = 0 is the identity") {
    const HHParams p = params(1, 3, 1.0, 1.0, 1.0, 0.0, 2);
    const CVector psi = random_state(static_cast<Index>(make_space(p).dim()), 4);
    CVector out = psi;
    horizontal_step(p, 0.0, out);
    REQUIRE((out - psi).norm() < 1e-14);
  }
  SECTION("each conjugated line is exact on a single bond") {
    const HHParams p = params(1, 2, 1.0, 0.0, 1.0, 0.0, 2);
    const auto space = make_space(p);
    const auto terms = hopping_terms(p).horizontal;
    const auto blocks = horizontal_blocks(p, 0.1);
    REQUIRE(blocks.size() == 6);
    const CVector psi = random_state(static_cast<Index>(space.dim()), 5);
    CVector x_half = psi;
    apply_blocks(p, {blocks.begin(), blocks.begin() + 3}, x_half);
    REQUIRE((x_half - dense_expm(line_operator(terms, Pauli::X, space.layout()), 0.1) * psi).norm() < 1e-10);
    CVector y_half = psi;
    apply_blocks(p, {blocks.begin() + 3, blocks.end()}, y_half);
    REQUIRE((y_half - dense_expm(line_operator(terms, Pauli::Y, space.layout()), 0.1) * psi).norm() < 1e-10);
  }
  SECTION("cores of a single bond: XY on the up pair, YX on the down pair") {
    const HHParams p = params(1, 2, 1.0, 0.0, 1.0, 0.0, 2);
    const auto blocks = horizontal_blocks(p, 0.1);
    REQUIRE(blocks[0].label == "U_xx^dag");
    REQUIRE(blocks[1].label == "U_xy");
    REQUIRE(blocks[1].gates.size() == 2);
    REQUIRE(blocks[1].gates[0].terms[0].string.label() == "X0Y1");
    REQUIRE(blocks[1].gates[1].terms[0].string.label() == "Y2X3");
    REQUIRE(blocks[0].presets() == std::vector<std::string>{"XX-"});
    REQUIRE(blocks[2].presets() == std::vector<std::string>{"XX+"});
  }
  SECTION("middle sites carry a composite XY + YX core") {
    const HHParams p = params(1, 3, 1.0, 0.0, 1.0, 0.0, 2);
    const auto blocks = horizontal_blocks(p, 0.1);
    bool composite = false;
    for (const auto& g : blocks[1].gates) composite = composite || g.terms.size() == 2;
    REQUIRE(composite);
  }
  SECTION("two bonds: local Trotter error is second order") {
    const HHParams p = params(1, 3, 1.0, 0.0, 1.0, 0.0, 2);
    const auto space = make_space(p);
    const auto h = build_spin_boson(p).h_horizontal;
    const CVector psi = random_state(static_cast<Index>(space.dim()), 6);
    auto err = [&](double dt) {
      CVector out = psi;
      horizontal_step(p, dt, out);
      return (out - dense_expm(h, dt) * psi).norm();
    };
    const double e1 = err(0.05);
    const double e2 = err(0.025);
    REQUIRE(e1 > 1e-8);
    REQUIRE(e1 / e2 == Catch::Approx(4.0).margin(0.2));
  }
}

TEST_CASE("vertical step", "[schedule][vertical]") {
  SECTION("l = 1 has no vertical layers") {
    const HHParams p = params(1, 4, 1.0, 1.0, 1.0, 0.0, 2);
    REQUIRE(vertical_blocks(p, 0.1).empty());
    REQUIRE_FALSE(has_vertical_bonds(p.lattice));
    const CVector psi = random_state(static_cast<Index>(make_space(p).dim()), 7);
    CVector out = psi;
    vertical_step(p, 0.1, out);
    REQUIRE((out - psi).norm() == 0.0);
  }
  SECTION("l = 2 equals the exact exponential of all vertical strings") {
    const HHParams p = params(2, 2, 1.0, 0.0, 0.8, 0.0, 2);
    const auto space = make_space(p);
    const auto h = build_spin_boson(p).h_vertical;
    const CVector psi = random_state(static_cast<Index>(space.dim()), 8);
    CVector out = psi;
    vertical_step(p, 0.3, out);
    const CVector ref = expm_apply(h, psi, 0.3, {.dense_limit = 0});
    REQUIRE((out - ref).norm() < 1e-10);
  }
  SECTION("l = 3 strings, checked on their own supports") {
    const HHParams p = params(3, 3, 1.0, 0.0, 1.0, 0.0, 2);
    const std::size_t rows = 3;
    const std::size_t span = 2 * rows + 1;
    const auto blocks = vertical_blocks(p, 0.2);
    const auto terms = hopping_terms(p).vertical;
    REQUIRE(blocks.size() % span == 0);
    // 12 strings per direction, 7 residues: 2 * 7 chunks of 7 layers.
    REQUIRE(blocks.size() == 2 * 7 * span);
    std::size_t checked = 0;
    for (std::size_t chunk = 0; chunk < blocks.size() / span; ++chunk) {
      for (const auto& t : terms) {
        const std::size_t lo = t.string.letters().begin()->first;
        const std::size_t hi = lo + 2 * rows;
        // The owning chunk has its core on (lo + l - 1, lo + l).
        const Block& core = blocks[chunk * span + rows];
        bool owns = false;
        for (const auto& g : core.gates) owns = owns || g.a == lo + rows - 1;
        if (!owns || core.label.front() != 'c' ||
            core.label.find(std::string(1, pauli_char(t.string.letters().begin()->second))) == std::string::npos) {
          continue;
        }
        const HilbertSpace local(span, {});
        CVector psi = random_state(1 << span, 100 + checked);
        const CVector start = psi;
        for (std::size_t b = chunk * span; b < (chunk + 1) * span; ++b) {
          for (const auto& g : blocks[b].gates) {
            if (g.a < lo || g.b > hi) continue;
            apply_local(psi, local.layout(), std::vector{g.a - lo, g.b - lo}, g.unitary());
          }
        }
        PauliString shifted;
        for (auto [q, l] : t.string.letters()) shifted.set(q - lo, l);
        const SparseOperator gen = t.coeff * shifted.to_operator(local.layout());
        REQUIRE((psi - dense_expm(gen, 0.2) * start).norm() < 1e-10);
        ++checked;
      }
    }
    REQUIRE(checked == terms.size());
  }
  SECTION("every layer is legal") {
    for (auto lat : {Lattice{2, 2}, Lattice{2, 3}, Lattice{3, 3}, Lattice{3, 5}}) {
      HHParams p = params(lat.rows, lat.cols, 1.0, 1.0, 1.0, 0.0, 2);
      for (const auto& b : vertical_blocks(p, 0.1)) REQUIRE_NOTHROW(b.validate());
    }
  }
}

TEST_CASE("block validation rejects overlapping gates", "[schedule]") {
  Block b{BlockKind::Rotation, TrotterPart::Horizontal, "bad", 0.0, {}};
  TwoQubitGate g;
  g.a = 0;
  g.b = 1;
  g.angle = 0.1;
  g.terms.push_back({PauliString{{0, Pauli::X}, {1, Pauli::X}}, 1.0});
  b.gates = {g, g};
  REQUIRE_THROWS_AS(b.validate(), DomainError);
}

TEST_CASE("one DAQC step is the ordered product of exact parts for l = 1", "[schedule][daqc]") {
  const HHParams p = params(1, 2, 1.5, 3.0, 1.0, 0.6, 4);
  const auto space = make_space(p);
  const auto t = build_spin_boson(p);
  const auto terms = hopping_terms(p).horizontal;
  const double dt = 0.07;
  const CVector psi = random_state(static_cast<Index>(space.dim()), 9);
  const CVector ref = dense_expm(line_operator(terms, Pauli::Y, space.layout()), dt) *
                      (dense_expm(line_operator(terms, Pauli::X, space.layout()), dt) * (dense_expm(t.star(), dt) * psi));
  const auto traj = daqc_evolve(p, psi, dt, 1);
  REQUIRE(traj.size() == 2);
  REQUIRE((traj.states[1] - ref).norm() < 1e-10);
}

TEST_CASE("zero couplings give the identity", "[schedule][daqc]") {
  for (auto lat : {Lattice{1, 2}, Lattice{2, 2}}) {
    const HHParams p = params(lat.rows, lat.cols, 0.0, 0.0, 0.0, 0.0, 2);
    const CVector psi = random_state(static_cast<Index>(make_space(p).dim()), 10);
    const auto traj = daqc_evolve(p, psi, 3.0, 7);
    for (const auto& s : traj.states) {
      REQUIRE((s - psi).norm() < 1e-10);
      REQUIRE(fidelity(psi, s) == Catch::Approx(1.0).margin(1e-12));
    }
  }
}

TEST_CASE("DAQC conserves norm and particle number", "[schedule][daqc][property]") {
  const HHParams p = params(2, 2, 1.0, 2.0, 1.0, 0.4, 2);
  const auto space = make_space(p);
  const std::size_t occ[] = {0, 1, 1, 0, 1, 1, 1, 1, 0, 0, 0, 0};
  const CVector psi = space.basis_state(occ);
  const auto traj = daqc_evolve(p, psi, 1.0, 5);
  for (const auto& s : traj.states) {
    REQUIRE(std::abs(s.norm() - 1.0) < 1e-10);
    REQUIRE(std::abs(fermion_number(space, s) - 2.0) < 1e-8);
  }
}

TEST_CASE("first-order Trotter convergence on two sites", "[schedule][daqc]") {
  const HHParams p = params(1, 2, 1.0, 2.0, 1.0, 0.5, 6);
  const auto space = make_space(p);
  const std::size_t occ[] = {0, 1, 1, 0, 0, 0};
  const CVector psi = space.basis_state(occ);
  const double t = 2.0;
  const CVector exact = ExactPropagator(build_spin_boson(p).total(), psi).at(t);
  auto err = [&](std::size_t n) { return (daqc_evolve(p, psi, t, n).states.back() - exact).norm(); };
  const double ratio = err(100) / err(50);
  REQUIRE(ratio == Catch::Approx(0.5).margin(0.05));
}

TEST_CASE("Trotter order is configurable", "[schedule]") {
  const HHParams p = params(1, 2, 1.0, 2.0, 1.0, 0.5, 3);
  const auto s = schedule_compile(p, 1.0, 2, {TrotterPart::Horizontal, TrotterPart::Star, TrotterPart::Vertical});
  REQUIRE(s.step.front().part == TrotterPart::Horizontal);
  REQUIRE_THROWS_AS(schedule_compile(p, 1.0, 2, {TrotterPart::Star, TrotterPart::Star, TrotterPart::Vertical}),
                    DomainError);
}

TEST_CASE("circuit depth", "[schedule][depth]") {
  for (std::size_t h = 2; h <= 10; ++h) {
    const auto d = circuit_depth(1, h, 1);
    REQUIRE(d.per_step == 9);
    REQUIRE(d.compiled_per_step == 9);
  }
  REQUIRE(circuit_depth(1, 100, 1).per_step == 9);
  REQUIRE(circuit_depth(3, 3, 2).total == 93);
  REQUIRE(circuit_depth(2, 2, 1).total == 29);
  // Compiled vertical layers: 2 directions * min(2l + 1, 2l(h - 1)) groups * (2l + 1).
  REQUIRE(circuit_depth(2, 2, 1).compiled_per_step == 9 + 2 * 4 * 5);
  REQUIRE(circuit_depth(3, 3, 1).compiled_per_step == 9 + 2 * 7 * 7);
  REQUIRE_THROWS_AS(circuit_depth(3, 2, 1), DomainError);

  const HHParams p = params(1, 2, 1.0, 8.0, 1.0, 0.1, 2);
  const auto s = schedule_compile(p, 1.0, 1);
  REQUIRE(s.depth() == 9);
  REQUIRE(s.step[0].kind == BlockKind::HadamardAll);
  REQUIRE(s.step[1].kind == BlockKind::AnalogStar);
  REQUIRE(schedule_compile(p, 1.0, 0).depth() == 0);
}

TEST_CASE("schedule JSON round trip", "[schedule][json]") {
  const HHParams p = params(2, 2, 1.0, 2.0, 1.0, 0.3, 2);
  const auto s = schedule_compile(p, 0.5, 3);
  const auto j = schedule_to_json(s);
  REQUIRE(j.at("format") == "hhdaqc.schedule");
  REQUIRE(j.at("version") == 1);
  const auto back = schedule_from_json(nlohmann::json::parse(j.dump()));
  REQUIRE(schedule_to_json(back) == j);

  const auto space = make_space(p);
  const CVector psi = random_state(static_cast<Index>(space.dim()), 11);
  const auto a = ScheduleExecutor(s).run(psi);
  const auto b = ScheduleExecutor(back).run(psi);
  REQUIRE((a.states.back() - b.states.back()).norm() < 1e-12);

  auto bad = j;
  bad["version"] = 2;
  REQUIRE_THROWS_AS(schedule_from_json(bad), DomainError);
}

TEST_CASE("empty schedule is the identity", "[schedule]") {
  const HHParams p = params(1, 2, 1.0, 2.0, 1.0, 0.3, 2);
  const CVector psi = random_state(static_cast<Index>(make_space(p).dim()), 12);
  const auto traj = ScheduleExecutor(schedule_compile(p, 1.0, 0)).run(psi);
  REQUIRE(traj.size() == 1);
  REQUIRE((traj.states[0] - psi).norm() == 0.0);
  REQUIRE_THROWS_AS(daqc_evolve(p, psi, 1.0, 0), DomainError);
}
