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

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <utility>
#include <vector>

#include "imlind/common.hpp"
#include "imlind/models.hpp"
#include "imlind/pauli.hpp"
#include "imlind/states.hpp"

namespace imlind {

enum class SuperKind { real_time, imag_time };

/// Superoperator on the doubled space, stored as a sum of Kronecker words
///   M = sum_t f_t * (A_t o conj(B_t)) - shift * Id,
/// where A_t, B_t are Pauli words. Each term touches exactly one entry per
/// row, so application is matrix-free at any size; a dense matrix can be
/// materialized below the configured dimension cap. The recorded scalar shift
/// is the identity component of sum_k L_k^dag L_k that the effective
/// Hamiltonian subtracts, so spectra can be compared with or without it.
class Superoperator {
 public:
  struct KronTerm {
    cplx f;            // prefactor including all word phases
    std::uint64_t x2;  // combined index-space X mask (ket bits high, bra low)
    std::uint64_t z2;  // combined index-space Z mask
  };

  Superoperator(int n_qubits, SuperKind kind)
      : n_(n_qubits), kind_(kind), shift_(0.0) {
    if (n_qubits < 1 || n_qubits > 15)
      throw DimensionOverflowError(
          "Superoperator supports 1..15 system qubits, got " +
          std::to_string(n_qubits));
  }

  int n_qubits() const { return n_; }
  SuperKind kind() const { return kind_; }
  std::int64_t dim() const { return std::int64_t{1} << (2 * n_); }
  double shift() const { return shift_; }
  void set_shift(double s) { shift_ = s; }
  const std::vector<KronTerm>& terms() const { return terms_; }

  /// Adds coeff * (A o conj(B)). Word phases are folded into the prefactor.
  void add_kron(const OperatorSum& a, const OperatorSum& b, cplx coeff = 1.0) {
    if (a.n_qubits() != n_ || b.n_qubits() != n_)
      throw SizeMismatchError("Superoperator::add_kron: size mismatch");
    for (const auto& ta : a.terms())
      for (const auto& tb : b.terms()) {
        const std::uint64_t x2 =
            (PauliString::reverse_bits(ta.x, n_) << n_) |
            PauliString::reverse_bits(tb.x, n_);
        const std::uint64_t z2 =
            (PauliString::reverse_bits(ta.z, n_) << n_) |
            PauliString::reverse_bits(tb.z, n_);
        insert(coeff * ta.coeff * std::conj(tb.coeff), x2, z2);
      }
  }

  /// y += M x (including the -shift * Id part).
  void apply_add(const Vec& x, Vec& y) const {
    check_vec(x.size());
    check_vec(y.size());
    for (const KronTerm& t : terms_) {
      const std::int64_t d = dim();
      for (std::int64_t p = 0; p < d; ++p) {
        const double sign = bit_parity(t.z2 & static_cast<std::uint64_t>(p))
                                ? -1.0
                                : 1.0;
        y[static_cast<Eigen::Index>(p ^ static_cast<std::int64_t>(t.x2))] +=
            t.f * sign * x[p];
      }
    }
    if (shift_ != 0.0) y -= shift_ * x;
  }

  Vec apply(const Vec& x) const {
    Vec y = Vec::Zero(x.size());
    apply_add(x, y);
    return y;
  }

  /// Real-arithmetic application; valid only when is_real_matrix().
  void apply_add_real(const RealVec& x, RealVec& y) const {
    check_vec(x.size());
    for (const KronTerm& t : terms_) {
      const double f = t.f.real();
      const std::int64_t d = dim();
      for (std::int64_t p = 0; p < d; ++p) {
        const double sign = bit_parity(t.z2 & static_cast<std::uint64_t>(p))
                                ? -1.0
                                : 1.0;
        y[static_cast<Eigen::Index>(p ^ static_cast<std::int64_t>(t.x2))] +=
            f * sign * x[p];
      }
    }
    if (shift_ != 0.0) y -= shift_ * x;
  }

  /// All matrix entries real (each Kronecker word contributes +-1 entries).
  bool is_real_matrix(double tol = 1e-14) const {
    for (const KronTerm& t : terms_)
      if (std::abs(t.f.imag()) > tol * std::max(1.0, std::abs(t.f.real())))
        return false;
    return true;
  }

  /// Exact Hermiticity from the term list: a Kronecker word is its own
  /// adjoint up to the sign (-1)^{|x2 & z2|}, so each merged term can be
  /// checked in place.
  bool is_hermitian(double tol = 1e-12) const {
    for (const KronTerm& t : terms_) {
      const double sign = (popcount64(t.x2 & t.z2) & 1) ? -1.0 : 1.0;
      if (std::abs(std::conj(t.f) * sign - t.f) >
          tol * std::max(1.0, std::abs(t.f)))
        return false;
    }
    return true;
  }

  /// Invariance under ket/bra swap plus conjugation (the antiunitary symmetry
  /// of imaginary-time generators built from Hermitian Hamiltonians).
  bool is_s_symmetric(double tol = 1e-12) const {
    for (const KronTerm& t : terms_) {
      const std::uint64_t mask = PauliString::mask_all(n_);
      const std::uint64_t x2s = ((t.x2 & mask) << n_) | (t.x2 >> n_);
      const std::uint64_t z2s = ((t.z2 & mask) << n_) | (t.z2 >> n_);
      const cplx want = std::conj(t.f);
      bool found = false;
      for (const KronTerm& u : terms_)
        if (u.x2 == x2s && u.z2 == z2s) {
          found = std::abs(u.f - want) <= tol * std::max(1.0, std::abs(want));
          break;
        }
      if (!found) return false;
    }
    return true;
  }

  /// Upper bound on the spectral radius of M + shift*Id plus the shift, i.e.
  /// every eigenvalue of M lies in [-(B+shift), B-shift] with B = sum |f|.
  double term_norm_bound() const {
    double b = 0;
    for (const KronTerm& t : terms_) b += std::abs(t.f);
    return b;
  }

  Mat to_dense(std::int64_t max_dim = 4096) const {
    if (dim() > max_dim)
      throw DimensionOverflowError(
          "Superoperator::to_dense: dimension " + std::to_string(dim()) +
          " exceeds the dense cap " + std::to_string(max_dim));
    const std::int64_t d = dim();
    Mat m = Mat::Zero(d, d);
    for (const KronTerm& t : terms_)
      for (std::int64_t p = 0; p < d; ++p) {
        const double sign = bit_parity(t.z2 & static_cast<std::uint64_t>(p))
                                ? -1.0
                                : 1.0;
        m(static_cast<Eigen::Index>(p ^ static_cast<std::int64_t>(t.x2)), p) +=
            t.f * sign;
      }
    if (shift_ != 0.0) m -= shift_ * Mat::Identity(d, d);
    return m;
  }

  /// Sorted coordinate triplets of the full matrix (shift included).
  std::vector<std::tuple<std::uint64_t, std::uint64_t, cplx>> to_coo(
      std::int64_t max_dim = 1 << 18) const {
    if (dim() > max_dim)
      throw DimensionOverflowError("Superoperator::to_coo: dimension too large");
    std::map<std::pair<std::uint64_t, std::uint64_t>, cplx> acc;
    const std::int64_t d = dim();
    for (const KronTerm& t : terms_)
      for (std::int64_t p = 0; p < d; ++p) {
        const double sign = bit_parity(t.z2 & static_cast<std::uint64_t>(p))
                                ? -1.0
                                : 1.0;
        acc[{static_cast<std::uint64_t>(p ^ static_cast<std::int64_t>(t.x2)),
             static_cast<std::uint64_t>(p)}] += t.f * sign;
      }
    if (shift_ != 0.0)
      for (std::int64_t p = 0; p < d; ++p)
        acc[{static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(p)}] -=
            shift_;
    std::vector<std::tuple<std::uint64_t, std::uint64_t, cplx>> out;
    out.reserve(acc.size());
    for (const auto& [rc, v] : acc)
      if (v != cplx(0.0)) out.emplace_back(rc.first, rc.second, v);
    return out;
  }

  /// Binary dump: u64 dimension, u64 nnz, then (u64 row, u64 col, f64 re,
  /// f64 im) triplets sorted by (row, col). Little-endian, for
  /// cross-implementation diffing.
  void dump_binary(std::ostream& os) const {
    const auto coo = to_coo();
    const std::uint64_t d = static_cast<std::uint64_t>(dim());
    const std::uint64_t nnz = coo.size();
    os.write(reinterpret_cast<const char*>(&d), 8);
    os.write(reinterpret_cast<const char*>(&nnz), 8);
    for (const auto& [r, c, v] : coo) {
      const double re = v.real(), im = v.imag();
      os.write(reinterpret_cast<const char*>(&r), 8);
      os.write(reinterpret_cast<const char*>(&c), 8);
      os.write(reinterpret_cast<const char*>(&re), 8);
      os.write(reinterpret_cast<const char*>(&im), 8);
    }
  }

  void dump_binary(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open \"" + path + "\" for writing");
    dump_binary(os);
  }

  static std::vector<std::tuple<std::uint64_t, std::uint64_t, cplx>>
  read_binary(std::istream& is, std::uint64_t* dim_out = nullptr) {
    std::uint64_t d = 0, nnz = 0;
    is.read(reinterpret_cast<char*>(&d), 8);
    is.read(reinterpret_cast<char*>(&nnz), 8);
    if (!is) throw Error("truncated superoperator dump header");
    std::vector<std::tuple<std::uint64_t, std::uint64_t, cplx>> out;
    out.reserve(nnz);
    for (std::uint64_t k = 0; k < nnz; ++k) {
      std::uint64_t r, c;
      double re, im;
      is.read(reinterpret_cast<char*>(&r), 8);
      is.read(reinterpret_cast<char*>(&c), 8);
      is.read(reinterpret_cast<char*>(&re), 8);
      is.read(reinterpret_cast<char*>(&im), 8);
      if (!is) throw Error("truncated superoperator dump payload");
      out.emplace_back(r, c, cplx{re, im});
    }
    if (dim_out) *dim_out = d;
    return out;
  }

 private:
  void check_vec(Eigen::Index len) const {
    if (len != dim())
      throw SizeMismatchError("Superoperator: vector length " +
                              std::to_string(len) + " != dimension " +
                              std::to_string(dim()));
  }

  void insert(cplx f, std::uint64_t x2, std::uint64_t z2) {
    if (f == cplx(0.0)) return;
    auto it = std::lower_bound(
        terms_.begin(), terms_.end(), std::pair{x2, z2},
        [](const KronTerm& t, const std::pair<std::uint64_t, std::uint64_t>& k) {
          return std::pair{t.x2, t.z2} < k;
        });
    if (it != terms_.end() && it->x2 == x2 && it->z2 == z2) {
      it->f += f;
      if (it->f == cplx(0.0)) terms_.erase(it);
    } else {
      terms_.insert(it, KronTerm{f, x2, z2});
    }
  }

  int n_;
  SuperKind kind_;
  double shift_;
  std::vector<KronTerm> terms_;
};

/// Imaginary-time generator in matrix form,
///   L^I = H_eff^I o I + I o (H_eff^I)* - sum_k L_k o L_k*,
/// with H_eff^I = H - (1/2) sum_k L_k^dag L_k. The identity component of the
/// Gram sum is recorded as the scalar shift instead of being dropped.
inline Superoperator build_imag_superop(const LindbladGenerator& gen) {
  Superoperator s(gen.n_qubits(), SuperKind::imag_time);
  const auto [scalar, gram_rest] = gen.jump_gram().split_scalar();
  if (std::abs(scalar.imag()) > 1e-12 * std::max(1.0, std::abs(scalar.real())))
    throw ValidationError("jump Gram sum has a complex identity component");
  const OperatorSum h_eff = gen.hamiltonian() - 0.5 * gram_rest;
  const OperatorSum id = OperatorSum::identity(gen.n_qubits());
  s.add_kron(h_eff, id);
  s.add_kron(id, h_eff);  // I o conj(H_eff)
  for (const auto& jump : gen.jumps()) s.add_kron(jump, jump, -1.0);
  s.set_shift(scalar.real());
  return s;
}

/// Real-time Lindblad generator in matrix form,
///   L = -i H o I + i I o H* - (1/2)(G o I + I o G*) + sum_k L_k o L_k*,
/// with G = sum_k L_k^dag L_k. The trace functional is a left null vector.
inline Superoperator build_real_superop(const LindbladGenerator& gen) {
  Superoperator s(gen.n_qubits(), SuperKind::real_time);
  const OperatorSum id = OperatorSum::identity(gen.n_qubits());
  const OperatorSum gram = gen.jump_gram();
  s.add_kron(gen.hamiltonian(), id, cplx(0, -1));
  s.add_kron(id, gen.hamiltonian(), cplx(0, 1));
  s.add_kron(gram, id, -0.5);
  s.add_kron(id, gram, -0.5);
  for (const auto& jump : gen.jumps()) s.add_kron(jump, jump, 1.0);
  return s;
}

namespace detail {

inline Mat anticommutator(const Mat& a, const Mat& b) { return a * b + b * a; }

}  // namespace detail

/// Direct density-matrix application of the real-time generator,
///   L(rho) = -i[H, rho] + sum_k (L_k rho L_k^dag - (1/2){L_k^dag L_k, rho}).
/// Independent of the Kronecker route; used as a cross-check oracle.
inline Mat apply_real_generator_dense(const LindbladGenerator& gen,
                                      const Mat& rho,
                                      const RealizeOptions& opts = {}) {
  const Mat h = gen.hamiltonian().realize_dense(opts);
  Mat out = cplx(0, -1) * (h * rho - rho * h);
  for (const auto& jump : gen.jumps()) {
    const Mat l = jump.realize_dense(opts);
    out += l * rho * l.adjoint() -
           0.5 * detail::anticommutator(l.adjoint() * l, rho);
  }
  return out;
}

/// Direct application of the imaginary-time generator,
///   L^I(rho) = {H_eff^I, rho} - sum_k L_k rho L_k^dag.
inline Mat apply_imag_generator_dense(const LindbladGenerator& gen,
                                      const Mat& rho,
                                      const RealizeOptions& opts = {}) {
  const Mat h_eff = gen.effective_imag_hamiltonian().realize_dense(opts);
  Mat out = detail::anticommutator(h_eff, rho);
  for (const auto& jump : gen.jumps()) {
    const Mat l = jump.realize_dense(opts);
    out -= l * rho * l.adjoint();
  }
  return out;
}

}  // namespace imlind
