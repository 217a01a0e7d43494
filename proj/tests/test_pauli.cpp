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

#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "imlind/lattice.hpp"
#include "imlind/pauli.hpp"

using namespace imlind;

namespace {

PauliString random_word(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> mask(0, (1ull << n) - 1);
  std::uniform_int_distribution<int> ph(0, 3);
  return {n, mask(rng), mask(rng), ph(rng)};
}

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("single-qubit products carry the exact phase") {
  const auto x = PauliString::single(1, 0, 'X');
  const auto y = PauliString::single(1, 0, 'Y');
  const auto z = PauliString::single(1, 0, 'Z');

  // X Z = -i Y
  const auto xz = pauli_mul(x, z);
  CHECK(xz.str() == "-iY");
  CHECK(max_abs(realize(xz) - cplx(0, -1) * realize(y)) < 1e-15);

  // Z Z = I
  const auto zz = pauli_mul(z, z);
  CHECK(zz.is_identity());
  CHECK(zz.str() == "I");
}

TEST_CASE("two-qubit product matches the dense matrix product") {
  const auto p = PauliString::parse("XZ");
  const auto q = PauliString::parse("ZZ");
  const Mat oracle = realize(p) * realize(q);
  CHECK(max_abs(realize(pauli_mul(p, q)) - oracle) < 1e-12);
}

TEST_CASE("pauli_mul is associative and unimodular") {
  std::mt19937_64 rng(101);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const auto a = random_word(n, rng), b = random_word(n, rng),
               c = random_word(n, rng);
    CHECK(pauli_mul(pauli_mul(a, b), c) == pauli_mul(a, pauli_mul(b, c)));
    CHECK(std::abs(std::abs(pauli_mul(a, b).phase()) - 1.0) < 1e-15);
  }
}

TEST_CASE("commutes agrees with the pq = +-qp phase") {
  const auto x = PauliString::single(1, 0, 'X');
  const auto z = PauliString::single(1, 0, 'Z');
  CHECK_FALSE(commutes(x, z));
  CHECK(commutes(PauliString::parse("XX"), PauliString::parse("ZZ")));

  std::mt19937_64 rng(202);
  for (int rep = 0; rep < 300; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const auto p = random_word(n, rng), q = random_word(n, rng);
    const auto pq = pauli_mul(p, q), qp = pauli_mul(q, p);
    REQUIRE(pq.x_mask() == qp.x_mask());
    REQUIRE(pq.z_mask() == qp.z_mask());
    const int dt = ((pq.phase_exponent() - qp.phase_exponent()) % 4 + 4) % 4;
    // Products differ by exactly a +-1 phase, matching commutes().
    CHECK((dt == 0 || dt == 2));
    CHECK(commutes(p, q) == (dt == 0));
  }
}

TEST_CASE("cluster stabilizer vs candidate excitations") {
  // Two-site chain: four qubits sigma0 tau0 sigma1 tau1.
  const LatticeSpec lat(2, Boundary::periodic);
  const auto stab = lat.cluster_a(0);          // Z X Z I
  const auto exc_same = lat.tau(0, 'Z');       // I Z I I
  const auto exc_other = lat.tau(1, 'Z');      // I I I Z
  CHECK_FALSE(commutes(stab, exc_same));
  CHECK(commutes(stab, exc_other));

  // Brute-force commutator oracle on the dense realizations.
  const Mat s = realize(stab);
  CHECK(max_abs(s * realize(exc_same) + realize(exc_same) * s) < 1e-12);
  CHECK(max_abs(s * realize(exc_other) - realize(exc_other) * s) < 1e-12);
}

TEST_CASE("realize basics") {
  const Mat z = realize(PauliString::single(1, 0, 'Z'));
  CHECK(std::abs(z(0, 0) - cplx(1)) < 1e-15);
  CHECK(std::abs(z(1, 1) - cplx(-1)) < 1e-15);
  CHECK(std::abs(z(0, 1)) + std::abs(z(1, 0)) < 1e-15);

  // Qubit 0 is the leftmost tensor factor.
  const Mat zi = realize(PauliString::parse("ZI"));
  CHECK(std::abs(zi(0, 0) - cplx(1)) < 1e-15);
  CHECK(std::abs(zi(1, 1) - cplx(1)) < 1e-15);
  CHECK(std::abs(zi(2, 2) - cplx(-1)) < 1e-15);
  CHECK(std::abs(zi(3, 3) - cplx(-1)) < 1e-15);

  // -tau^x - sigma^x on one site has eigenvalues {-2, 0, 0, 2}.
  OperatorSum h(2);
  h.add_word(PauliString::parse("IX"), -1.0);
  h.add_word(PauliString::parse("XI"), -1.0);
  Eigen::SelfAdjointEigenSolver<Mat> es(h.realize_dense());
  const RealVec e = es.eigenvalues();
  CHECK(std::abs(e[0] + 2.0) < 1e-12);
  CHECK(std::abs(e[1]) < 1e-12);
  CHECK(std::abs(e[2]) < 1e-12);
  CHECK(std::abs(e[3] - 2.0) < 1e-12);

  // Non-identity words are traceless.
  std::mt19937_64 rng(303);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const auto w = random_word(n, rng);
    if (w.x_mask() == 0 && w.z_mask() == 0) continue;
    CHECK(std::abs(realize(w).trace()) < 1e-12);
  }
}

TEST_CASE("realize of a sum is the weighted sum of word realizations") {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 3);
    OperatorSum sum(n);
    Mat oracle = Mat::Zero(1 << n, 1 << n);
    for (int t = 0; t < 5; ++t) {
      const auto w = random_word(n, rng);
      const cplx c(coeff(rng), coeff(rng));
      sum.add_word(w, c);
      oracle += c * realize(w);
    }
    CHECK(max_abs(sum.realize_dense() - oracle) < 1e-12);
  }
}

TEST_CASE("realize of products matches dense multiplication") {
  std::mt19937_64 rng(505);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const auto p = random_word(n, rng), q = random_word(n, rng);
    CHECK(max_abs(realize(pauli_mul(p, q)) - realize(p) * realize(q)) < 1e-12);
  }
}

TEST_CASE("sparse realization agrees with dense") {
  std::mt19937_64 rng(606);
  OperatorSum sum(3);
  for (int t = 0; t < 4; ++t) sum.add_word(random_word(3, rng), cplx(1.0, 0.5));
  CHECK(max_abs(Mat(sum.realize_sparse()) - sum.realize_dense()) < 1e-14);
}

TEST_CASE("matrix-free application matches dense") {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> u(-1, 1);
  OperatorSum sum(3);
  for (int t = 0; t < 4; ++t) sum.add_word(random_word(3, rng), cplx(u(rng), u(rng)));
  Vec x(8);
  for (int i = 0; i < 8; ++i) x[i] = cplx(u(rng), u(rng));
  CHECK((sum.apply(x) - sum.realize_dense() * x).norm() < 1e-12);
}

TEST_CASE("dense realization above the size policy is rejected") {
  RealizeOptions opts;
  opts.dense_max_qubits = 3;
  OperatorSum sum = OperatorSum::identity(4);
  CHECK_THROWS_AS(sum.realize_dense(opts), DimensionOverflowError);
}

TEST_CASE("size mismatch is rejected") {
  CHECK_THROWS_AS(
      pauli_mul(PauliString::parse("X"), PauliString::parse("XX")),
      SizeMismatchError);
  CHECK_THROWS_AS(commutes(PauliString::parse("X"), PauliString::parse("XX")),
                  SizeMismatchError);
}

TEST_CASE("textual notation round-trips") {
  for (const char* text :
       {"XZIIY", "-X", "+iZZ", "-iYX", "I", "Y", "ZIZ"}) {
    const auto w = PauliString::parse(text);
    const std::string printed = w.str();
    CHECK(PauliString::parse(printed) == w);
  }
  CHECK(PauliString::parse("XZIIY").str() == "XZIIY");
  CHECK(PauliString::parse("+iZZ").str() == "+iZZ");
  CHECK_THROWS_AS(PauliString::parse("XQ"), ParseError);
  CHECK_THROWS_AS(PauliString::parse(""), ParseError);
}

TEST_CASE("hermiticity bookkeeping") {
  CHECK(PauliString::parse("Y").is_hermitian());
  CHECK(PauliString::parse("XZY").is_hermitian());
  CHECK_FALSE(PauliString::parse("+iX").is_hermitian());

  OperatorSum h(2);
  h.add_word(PauliString::parse("XY"), 0.7);
  h.add_word(PauliString::parse("ZI"), -1.3);
  CHECK(h.is_hermitian());
  const Mat m = h.realize_dense();
  CHECK(max_abs(m - m.adjoint()) < 1e-14);

  OperatorSum g(1);
  g.add_word(PauliString::parse("X"), cplx(0, 1));
  CHECK_FALSE(g.is_hermitian());
}

TEST_CASE("canonical form merges words and drops zeros") {
  OperatorSum s(2);
  s.add_word(PauliString::parse("XZ"), 1.0);
  s.add_word(PauliString::parse("XZ"), 2.0);
  REQUIRE(s.terms().size() == 1);
  CHECK(std::abs(s.terms()[0].coeff - cplx(3.0)) < 1e-15);
  s.add_word(PauliString::parse("XZ"), -3.0);
  CHECK(s.is_zero());

  // Y folds into the coefficient as i * XZ.
  OperatorSum y = OperatorSum::from_word(PauliString::parse("Y"));
  REQUIRE(y.terms().size() == 1);
  CHECK(std::abs(y.terms()[0].coeff - cplx(0, 1)) < 1e-15);
}

TEST_CASE("symbolic adjoint and products") {
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 3);
    OperatorSum a(n), b(n);
    for (int t = 0; t < 3; ++t) {
      a.add_word(random_word(n, rng), cplx(u(rng), u(rng)));
      b.add_word(random_word(n, rng), cplx(u(rng), u(rng)));
    }
    CHECK(max_abs((a * b).realize_dense() -
                  a.realize_dense() * b.realize_dense()) < 1e-12);
    CHECK(max_abs(a.adjoint().realize_dense() - a.realize_dense().adjoint()) <
          1e-12);
  }
}
