// Copyright 2026 The imlind Authors
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

#include <cmath>

#include <catch2/catch_amalgamated.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "imlind/models.hpp"

using namespace imlind;

namespace {

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

bool sums_equal(const OperatorSum& a, const OperatorSum& b, double tol = 1e-14) {
  if (a.n_qubits() != b.n_qubits()) return false;
  if (a.terms().size() != b.terms().size()) return false;
  for (std::size_t i = 0; i < a.terms().size(); ++i) {
    if (a.terms()[i].x != b.terms()[i].x) return false;
    if (a.terms()[i].z != b.terms()[i].z) return false;
    if (std::abs(a.terms()[i].coeff - b.terms()[i].coeff) > tol) return false;
  }
  return true;
}

/// The ring of bond-centered cluster words Z X Z on consecutive qubits, plus
/// the Z excitation at the center of each; the standard two-site example.
GibbsSpec ring_cluster_gibbs(int n_sites, double beta) {
  const LatticeSpec lat(n_sites, Boundary::periodic);
  std::vector<PauliString> stabs, excs;
  for (int i = 0; i < n_sites; ++i) {
    stabs.push_back(lat.cluster_a(i));
    excs.push_back(lat.tau(i, 'Z'));
    stabs.push_back(lat.cluster_b(i));
    excs.push_back(lat.sigma(i, 'Z'));
  }
  return {stabs, excs, beta};
}

}  // namespace

TEST_CASE("corner 00: product Hamiltonian, no jumps") {
  const LatticeSpec lat(3, Boundary::periodic);
  const auto gen = build_corner(Corner::c00, lat);
  CHECK(gen.jumps().empty());
  OperatorSum want(lat.n_qubits());
  for (int i = 0; i < 3; ++i) {
    want.add_word(lat.tau(i, 'X'), -1.0);
    want.add_word(lat.sigma(i, 'X'), -1.0);
  }
  CHECK(sums_equal(gen.hamiltonian(), want));
}

TEST_CASE("corner 11: cluster Hamiltonian with per-site jump pair") {
  const LatticeSpec lat(3, Boundary::periodic);
  const auto gen = build_corner(Corner::c11, lat);
  OperatorSum want(lat.n_qubits());
  for (int i = 0; i < 3; ++i) want.add_word(lat.cluster_a(i), -1.0);
  CHECK(sums_equal(gen.hamiltonian(), want));
  REQUIRE(gen.jumps().size() == 6);
  // Pairs (sigma^z_i, tau^z sigma^x tau^z at i) in site order.
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(gen.jumps()[2 * i].coeff_of(lat.sigma(i, 'Z')) - 1.0) <
          1e-15);
    CHECK(std::abs(gen.jumps()[2 * i + 1].coeff_of(lat.cluster_b(i)) - 1.0) <
          1e-15);
  }
}

TEST_CASE("corner 10 at one site matches the direct 4x4 construction") {
  const LatticeSpec lat(1, Boundary::periodic);
  const auto gen = build_corner(Corner::c10, lat);
  REQUIRE(gen.jumps().size() == 2);
  CHECK(std::abs(gen.jumps()[0].coeff_of(lat.sigma(0, 'Z')) - 1.0) < 1e-15);
  CHECK(std::abs(gen.jumps()[1].coeff_of(lat.sigma(0, 'X')) - 1.0) < 1e-15);
  const Mat direct = -realize(PauliString::parse("IX"));
  CHECK(max_abs(gen.hamiltonian().realize_dense() - direct) < 1e-15);
}

TEST_CASE("open boundary drops crossing terms entirely") {
  const LatticeSpec lat(3, Boundary::open);
  const auto g01 = build_corner(Corner::c01, lat);
  // Two cluster-a words (i=0,1) and two cluster-b words (i=1,2).
  CHECK(g01.hamiltonian().terms().size() == 4);
  const auto g11 = build_corner(Corner::c11, lat);
  CHECK(g11.hamiltonian().terms().size() == 2);
  CHECK(g11.jumps().size() == 5);  // three sigma^z, two cluster-b
}

TEST_CASE("interpolation endpoints reproduce the corners term-for-term") {
  for (auto boundary : {Boundary::periodic, Boundary::open}) {
    const LatticeSpec lat(3, boundary);
    const std::pair<Corner, std::pair<double, double>> cases[] = {
        {Corner::c00, {0, 0}},
        {Corner::c01, {0, 1}},
        {Corner::c10, {1, 0}},
        {Corner::c11, {1, 1}},
    };
    for (const auto& [corner, ab] : cases) {
      const auto direct = build_corner(corner, lat);
      const auto interp = build_interpolated({ab.first, ab.second}, lat);
      CHECK(sums_equal(direct.hamiltonian(), interp.hamiltonian()));
      REQUIRE(direct.jumps().size() == interp.jumps().size());
      for (std::size_t k = 0; k < direct.jumps().size(); ++k)
        CHECK(sums_equal(direct.jumps()[k], interp.jumps()[k]));
    }
  }
}

TEST_CASE("interpolation interior: closed line and midpoint coefficients") {
  const LatticeSpec lat(2, Boundary::periodic);
  const double b = 0.3;
  const auto closed = build_interpolated({0.0, b}, lat);
  CHECK(closed.jumps().empty());
  OperatorSum want(lat.n_qubits());
  for (int i = 0; i < 2; ++i) {
    want.add_word(lat.tau(i, 'X'), -(1 - b));
    want.add_word(lat.cluster_a(i), -b);
    want.add_word(lat.sigma(i, 'X'), -(1 - b));
    want.add_word(lat.cluster_b(i), -b);
  }
  CHECK(sums_equal(closed.hamiltonian(), want));

  const auto mid = build_interpolated({0.5, 0.5}, lat);
  REQUIRE(mid.jumps().size() == 6);  // three jump flavors per site
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(mid.jumps()[3 * i].coeff_of(lat.sigma(i, 'Z')) -
                   std::sqrt(0.5)) < 1e-15);
    CHECK(std::abs(mid.jumps()[3 * i + 1].coeff_of(lat.sigma(i, 'X')) - 0.5) <
          1e-15);
    CHECK(std::abs(mid.jumps()[3 * i + 2].coeff_of(lat.cluster_b(i)) - 0.5) <
          1e-15);
  }
}

TEST_CASE("every library jump satisfies L^dag L = identity word") {
  const LatticeSpec lat(2, Boundary::periodic);
  for (double a : {0.25, 0.5, 1.0})
    for (double b : {0.0, 0.4, 1.0}) {
      const auto gen = build_interpolated({a, b}, lat);
      for (const auto& jump : gen.jumps()) {
        const auto gram = jump.adjoint() * jump;
        REQUIRE(gram.terms().size() == 1);
        CHECK(gram.terms()[0].x == 0);
        CHECK(gram.terms()[0].z == 0);
        CHECK(std::abs(gram.terms()[0].coeff.imag()) < 1e-15);
      }
    }
}

TEST_CASE("strong and weak symmetry words") {
  const LatticeSpec lat(3, Boundary::periodic);
  const auto k = lat.tau_parity();
  const auto u = lat.sigma_parity();
  for (double a : {0.0, 0.3, 1.0})
    for (double b : {0.0, 0.5, 1.0}) {
      const auto gen = build_interpolated({a, b}, lat);
      for (const auto& t : gen.hamiltonian().terms()) {
        const PauliString w(lat.n_qubits(), t.x, t.z, 0);
        CHECK(commutes(k, w));
        CHECK(commutes(u, w));
      }
      for (const auto& jump : gen.jumps()) {
        REQUIRE(jump.terms().size() == 1);
        const PauliString w(lat.n_qubits(), jump.terms()[0].x,
                            jump.terms()[0].z, 0);
        CHECK(commutes(k, w));  // strong: commutes with every jump
        // weak: the sigma^z jumps anticommute with U, the rest commute.
        const bool is_sigma_z = w.x_mask() == 0 && w.weight() == 1;
        CHECK(commutes(u, w) == !is_sigma_z);
      }
    }
}

TEST_CASE("gibbs coupling strength") {
  auto spec = ring_cluster_gibbs(2, 0.5);
  CHECK(std::abs(spec.gamma() - 1.7018362564786431) < 1e-12);
  // Closed form against the exponential representation of sinh.
  const double e = std::exp(1.0);
  CHECK(std::abs(spec.gamma() - 4.0 / (e - 1.0 / e)) < 1e-14);
  // Large beta: the coupling dies off.
  auto cold = ring_cluster_gibbs(2, 20.0);
  CHECK(cold.gamma() < 1e-15);
}

TEST_CASE("gibbs generator assembles H = sum h_i and sqrt(gamma) jumps") {
  const auto spec = ring_cluster_gibbs(2, 0.7);
  const auto gen = build_stabilizer_gibbs(spec);
  OperatorSum want(spec.n_qubits());
  for (const auto& h : spec.stabilizers) want.add_word(h);
  CHECK(sums_equal(gen.hamiltonian(), want));
  REQUIRE(gen.jumps().size() == spec.excitations.size());
  const double root_gamma = std::sqrt(spec.gamma());
  for (std::size_t i = 0; i < spec.excitations.size(); ++i)
    CHECK(std::abs(gen.jumps()[i].coeff_of(spec.excitations[i]) - root_gamma) <
          1e-14);
}

TEST_CASE("gibbs spec validation pinpoints the offending pair") {
  const auto z = PauliString::parse("ZI");
  const auto z2 = PauliString::parse("IZ");
  const auto x = PauliString::parse("XI");
  const auto x2 = PauliString::parse("IX");

  // o_1 commutes with h_1: must be rejected with the pair named.
  try {
    GibbsSpec bad({z, z2}, {x, z}, 0.5);
    FAIL("expected rejection");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("(1, 1)") != std::string::npos);
  }

  // o_0 anticommutes with a foreign stabilizer h_1.
  try {
    GibbsSpec bad({z, x2}, {PauliString::parse("XZ"), z2}, 0.5);
    FAIL("expected rejection");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("(0, 1)") != std::string::npos);
  }

  // Non-commuting stabilizers.
  CHECK_THROWS_AS(GibbsSpec({z, x}, {x, z}, 0.5), ValidationError);
  // Dependent stabilizers.
  CHECK_THROWS_AS(GibbsSpec({z, z}, {x, x}, 0.5), ValidationError);
  // Valid set passes.
  CHECK_NOTHROW(GibbsSpec({z, z2}, {x, x2}, 0.5));
  CHECK_THROWS_AS(GibbsSpec({z}, {x}, -1.0), ValidationError);
}

TEST_CASE("gibbs state limits and factorization") {
  const auto z = PauliString::parse("Z");
  // Infinite temperature: maximally mixed.
  const auto hot = gibbs_state({z}, 0.0);
  CHECK(max_abs(hot.mat - 0.5 * Mat::Identity(2, 2)) < 1e-14);

  // Deep cold: projector onto the -1 eigenstate of Z.
  const auto cold = gibbs_state({z}, 10.0);
  Mat proj = Mat::Zero(2, 2);
  proj(1, 1) = 1.0;
  CHECK(max_abs(cold.mat - proj) < 1e-8);

  // Commuting single-qubit words factorize; oracle is the direct matrix
  // exponential of -beta H, normalized.
  const double beta = 0.7;
  const auto two = gibbs_state(
      {PauliString::parse("ZI"), PauliString::parse("IZ")}, beta);
  OperatorSum h(2);
  h.add_word(PauliString::parse("ZI"));
  h.add_word(PauliString::parse("IZ"));
  const Mat expm = (-beta * h.realize_dense()).exp();
  const Mat oracle = expm / expm.trace();
  CHECK(max_abs(two.mat - oracle) < 1e-12);

  const auto one = gibbs_state({PauliString::parse("Z")}, beta);
  Mat prod = Mat::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          prod(2 * i + k, 2 * j + l) = one.mat(i, j) * one.mat(k, l);
  CHECK(max_abs(two.mat - prod) < 1e-12);

  two.validate();
  cold.validate();
}

TEST_CASE("interpolation parameter range is enforced") {
  const LatticeSpec lat(2, Boundary::periodic);
  CHECK_THROWS_AS(build_interpolated({-0.1, 0.5}, lat), ValidationError);
  CHECK_THROWS_AS(build_interpolated({0.5, 1.2}, lat), ValidationError);
}

TEST_CASE("generator rejects a non-Hermitian Hamiltonian") {
  OperatorSum h(1);
  h.add_word(PauliString::parse("X"), cplx(0, 1));
  CHECK_THROWS_AS(LindbladGenerator(h, {}), ValidationError);
}
