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

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "imlind/common.hpp"
#include "imlind/lattice.hpp"
#include "imlind/pauli.hpp"
#include "imlind/states.hpp"

namespace imlind {

/// An open system (H, {L_k}): Hermitian Hamiltonian plus a list of jump
/// operators, all as exact Pauli sums. Values are immutable after
/// construction and safe to share between threads.
class LindbladGenerator {
 public:
  LindbladGenerator(OperatorSum hamiltonian, std::vector<OperatorSum> jumps,
                    std::optional<LatticeSpec> lattice = std::nullopt)
      : n_(hamiltonian.n_qubits()),
        hamiltonian_(std::move(hamiltonian)),
        jumps_(std::move(jumps)),
        lattice_(std::move(lattice)) {
    if (!hamiltonian_.is_hermitian())
      throw ValidationError("LindbladGenerator: Hamiltonian is not Hermitian");
    for (const auto& j : jumps_)
      if (j.n_qubits() != n_)
        throw SizeMismatchError("LindbladGenerator: jump size mismatch");
    if (lattice_ && lattice_->n_qubits() != n_)
      throw SizeMismatchError("LindbladGenerator: lattice size mismatch");
  }

  int n_qubits() const { return n_; }
  const OperatorSum& hamiltonian() const { return hamiltonian_; }
  const std::vector<OperatorSum>& jumps() const { return jumps_; }
  const std::optional<LatticeSpec>& lattice() const { return lattice_; }

  /// sum_k L_k^dag L_k, computed symbolically.
  OperatorSum jump_gram() const {
    OperatorSum g(n_);
    for (const auto& j : jumps_) g += j.adjoint() * j;
    return g;
  }

  /// H - (1/2) sum_k L_k^dag L_k; Hermitian.
  OperatorSum effective_imag_hamiltonian() const {
    return hamiltonian_ - 0.5 * jump_gram();
  }

 private:
  int n_;
  OperatorSum hamiltonian_;
  std::vector<OperatorSum> jumps_;
  std::optional<LatticeSpec> lattice_;
};

enum class Corner { c00, c01, c10, c11 };

inline Corner corner_from_string(const std::string& s) {
  if (s == "00") return Corner::c00;
  if (s == "01") return Corner::c01;
  if (s == "10") return Corner::c10;
  if (s == "11") return Corner::c11;
  throw ParseError("unknown corner \"" + s + "\" (expected 00|01|10|11)");
}

inline std::string to_string(Corner c) {
  switch (c) {
    case Corner::c00:
      return "00";
    case Corner::c01:
      return "01";
    case Corner::c10:
      return "10";
    default:
      return "11";
  }
}

namespace detail {

inline void add_terms(OperatorSum& h, const LatticeSpec& lat, double coeff,
                      char which) {
  if (coeff == 0.0) return;
  for (int i = 0; i < lat.n_sites; ++i) {
    switch (which) {
      case 't':  // tau^x_{i+1/2}
        h.add_word(lat.tau(i, 'X'), coeff);
        break;
      case 's':  // sigma^x_i
        h.add_word(lat.sigma(i, 'X'), coeff);
        break;
      case 'a':  // sigma^z tau^x sigma^z
        if (lat.cluster_a_exists(i)) h.add_word(lat.cluster_a(i), coeff);
        break;
      case 'b':  // tau^z sigma^x tau^z
        if (lat.cluster_b_exists(i)) h.add_word(lat.cluster_b(i), coeff);
        break;
    }
  }
}

}  // namespace detail

/// The four fixed-point generators of the Z2 x Z2 family.
///
///   00  trivial pure:   H = -sum tau^x - sum sigma^x,          no jumps
///   01  cluster (SPT):  H = -sum s^z t^x s^z - sum t^z s^x t^z, no jumps
///   10  trivial mixed:  H = -sum tau^x,      L = {s^z_i, s^x_i}
///   11  decohered SPT:  H = -sum s^z t^x s^z, L = {s^z_i, t^z s^x t^z}
inline LindbladGenerator build_corner(Corner corner, const LatticeSpec& lat) {
  OperatorSum h(lat.n_qubits());
  std::vector<OperatorSum> jumps;
  switch (corner) {
    case Corner::c00:
      detail::add_terms(h, lat, -1.0, 't');
      detail::add_terms(h, lat, -1.0, 's');
      break;
    case Corner::c01:
      detail::add_terms(h, lat, -1.0, 'a');
      detail::add_terms(h, lat, -1.0, 'b');
      break;
    case Corner::c10:
      detail::add_terms(h, lat, -1.0, 't');
      for (int i = 0; i < lat.n_sites; ++i) {
        jumps.push_back(OperatorSum::from_word(lat.sigma(i, 'Z')));
        jumps.push_back(OperatorSum::from_word(lat.sigma(i, 'X')));
      }
      break;
    case Corner::c11:
      detail::add_terms(h, lat, -1.0, 'a');
      for (int i = 0; i < lat.n_sites; ++i) {
        jumps.push_back(OperatorSum::from_word(lat.sigma(i, 'Z')));
        if (lat.cluster_b_exists(i))
          jumps.push_back(OperatorSum::from_word(lat.cluster_b(i)));
      }
      break;
  }
  return {std::move(h), std::move(jumps), lat};
}

struct InterpolationParams {
  double a;
  double b;

  InterpolationParams(double a_, double b_) : a(a_), b(b_) {
    if (a < 0.0 || a > 1.0 || b < 0.0 || b > 1.0)
      throw ValidationError("interpolation parameters must lie in [0,1]");
  }
};

/// Two-parameter family joining the four corners. Hamiltonian
///   H(a,b) = (1-b)(-sum t^x) + b(-sum s^z t^x s^z)
///          + (1-a)[(1-b)(-sum s^x) + b(-sum t^z s^x t^z)],
/// jumps per site sqrt(a) s^z, sqrt(a(1-b)) s^x, sqrt(ab) t^z s^x t^z,
/// with zero-coefficient jumps dropped.
inline LindbladGenerator build_interpolated(const InterpolationParams& p,
                                            const LatticeSpec& lat) {
  const double a = p.a, b = p.b;
  OperatorSum h(lat.n_qubits());
  detail::add_terms(h, lat, -(1.0 - b), 't');
  detail::add_terms(h, lat, -b, 'a');
  detail::add_terms(h, lat, -(1.0 - a) * (1.0 - b), 's');
  detail::add_terms(h, lat, -(1.0 - a) * b, 'b');

  std::vector<OperatorSum> jumps;
  const double c1 = std::sqrt(a), c2 = std::sqrt(a * (1.0 - b)),
               c3 = std::sqrt(a * b);
  for (int i = 0; i < lat.n_sites; ++i) {
    if (c1 != 0.0)
      jumps.push_back(OperatorSum::from_word(lat.sigma(i, 'Z'), c1));
    if (c2 != 0.0)
      jumps.push_back(OperatorSum::from_word(lat.sigma(i, 'X'), c2));
    if (c3 != 0.0 && lat.cluster_b_exists(i))
      jumps.push_back(OperatorSum::from_word(lat.cluster_b(i), c3));
  }
  return {std::move(h), std::move(jumps), lat};
}

/// Commuting stabilizer words h_i plus one excitation word o_i per stabilizer
/// (o_i anticommutes with h_i and commutes with every other h_j), and an
/// inverse temperature. The jump strength gamma = 2/sinh(2 beta_T) makes the
/// Gibbs state of H = sum h_i the steady state of the imaginary-time flow.
struct GibbsSpec {
  std::vector<PauliString> stabilizers;
  std::vector<PauliString> excitations;
  double beta_T;

  GibbsSpec(std::vector<PauliString> stabs, std::vector<PauliString> excs,
            double beta)
      : stabilizers(std::move(stabs)), excitations(std::move(excs)), beta_T(beta) {
    validate();
  }

  double gamma() const { return 2.0 / std::sinh(2.0 * beta_T); }

  int n_qubits() const { return stabilizers.front().n_qubits(); }

  void validate() const {
    if (stabilizers.empty())
      throw ValidationError("GibbsSpec: no stabilizers given");
    if (excitations.size() != stabilizers.size())
      throw ValidationError("GibbsSpec: need one excitation per stabilizer");
    if (!(beta_T > 0.0))
      throw ValidationError("GibbsSpec: beta_T must be positive");
    const int n = stabilizers.front().n_qubits();
    for (const auto& w : stabilizers) {
      if (w.n_qubits() != n)
        throw SizeMismatchError("GibbsSpec: stabilizer size mismatch");
      if (!w.is_hermitian())
        throw ValidationError("GibbsSpec: stabilizer " + w.str() +
                              " is not Hermitian");
    }
    for (const auto& w : excitations)
      if (w.n_qubits() != n)
        throw SizeMismatchError("GibbsSpec: excitation size mismatch");
    const auto n_stab = stabilizers.size();
    for (std::size_t i = 0; i < n_stab; ++i)
      for (std::size_t j = i + 1; j < n_stab; ++j)
        if (!commutes(stabilizers[i], stabilizers[j]))
          throw ValidationError("GibbsSpec: stabilizers (" +
                                std::to_string(i) + ", " + std::to_string(j) +
                                ") do not commute");
    if (!words_independent(stabilizers))
      throw ValidationError("GibbsSpec: stabilizers are not independent");
    for (std::size_t i = 0; i < n_stab; ++i)
      for (std::size_t j = 0; j < n_stab; ++j) {
        const bool want_anticommute = i == j;
        if (commutes(excitations[i], stabilizers[j]) == want_anticommute)
          throw ValidationError(
              "GibbsSpec: excitation/stabilizer pair (" + std::to_string(i) +
              ", " + std::to_string(j) +
              (want_anticommute ? ") commutes but must anticommute"
                                : ") anticommutes but must commute"));
      }
  }

  /// GF(2) rank test on the (x|z) rows.
  static bool words_independent(const std::vector<PauliString>& words) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> rows;
    rows.reserve(words.size());
    for (const auto& w : words) rows.emplace_back(w.x_mask(), w.z_mask());
    std::size_t rank = 0;
    for (int bit = 0; bit < 128 && rank < rows.size(); ++bit) {
      const bool in_x = bit < 64;
      const std::uint64_t m = std::uint64_t{1} << (bit % 64);
      std::size_t pivot = rank;
      while (pivot < rows.size() &&
             !((in_x ? rows[pivot].first : rows[pivot].second) & m))
        ++pivot;
      if (pivot == rows.size()) continue;
      std::swap(rows[rank], rows[pivot]);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (r == rank) continue;
        if ((in_x ? rows[r].first : rows[r].second) & m) {
          rows[r].first ^= rows[rank].first;
          rows[r].second ^= rows[rank].second;
        }
      }
      ++rank;
    }
    return rank == rows.size();
  }
};

inline LindbladGenerator build_stabilizer_gibbs(const GibbsSpec& spec) {
  const int n = spec.n_qubits();
  OperatorSum h(n);
  for (const auto& w : spec.stabilizers) h.add_word(w);
  std::vector<OperatorSum> jumps;
  const double root_gamma = std::sqrt(spec.gamma());
  for (const auto& w : spec.excitations)
    jumps.push_back(OperatorSum::from_word(w, root_gamma));
  return {std::move(h), std::move(jumps), std::nullopt};
}

/// Exact e^{-beta H}/Z for H = sum of the given stabilizer words, via dense
/// diagonalization. Hermitian, positive, unit trace by construction.
inline DensityMatrix gibbs_state(const std::vector<PauliString>& stabilizers,
                                 double beta_T, const RealizeOptions& opts = {}) {
  if (stabilizers.empty()) throw ValidationError("gibbs_state: no stabilizers");
  const int n = stabilizers.front().n_qubits();
  OperatorSum h(n);
  for (const auto& w : stabilizers) h.add_word(w);
  if (!h.is_hermitian())
    throw ValidationError("gibbs_state: Hamiltonian is not Hermitian");
  const Mat hm = h.realize_dense(opts);
  Eigen::SelfAdjointEigenSolver<Mat> es(hm);
  // Shift by the ground energy before exponentiating to avoid overflow.
  const RealVec e = es.eigenvalues();
  RealVec w = (-(beta_T) * (e.array() - e.minCoeff())).exp();
  const double z = w.sum();
  Mat rho = es.eigenvectors() * (w / z).asDiagonal() *
            es.eigenvectors().adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(std::move(rho));
}

}  // namespace imlind
