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
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "imlind/common.hpp"

namespace imlind {

/// Exact n-qubit Pauli word  i^t * prod_q X_q^{x_q} Z_q^{z_q}.
///
/// The phase exponent t lives in Z_4 and is tracked exactly, so products and
/// Clifford conjugations never touch floating point. Qubit q corresponds to
/// bit q of the masks and to the q-th tensor factor counted from the left,
/// i.e. qubit 0 is the most significant bit of a computational basis index.
class PauliString {
 public:
  PauliString(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask,
              int phase_exponent = 0)
      : n_(n_qubits),
        x_(x_mask),
        z_(z_mask),
        t_(static_cast<std::uint8_t>(((phase_exponent % 4) + 4) % 4)) {
    if (n_qubits < 1 || n_qubits > 32)
      throw DimensionOverflowError("PauliString supports 1..32 qubits, got " +
                                   std::to_string(n_qubits));
    const std::uint64_t all = mask_all(n_);
    if ((x_ & ~all) || (z_ & ~all))
      throw ValidationError("Pauli mask has bits outside the qubit range");
  }

  static PauliString identity(int n_qubits) { return {n_qubits, 0, 0, 0}; }

  /// Single-qubit X/Y/Z embedded in an n-qubit register. Y is stored as i*X*Z.
  static PauliString single(int n_qubits, int qubit, char axis) {
    const std::uint64_t b = std::uint64_t{1} << qubit;
    switch (axis) {
      case 'X':
        return {n_qubits, b, 0, 0};
      case 'Z':
        return {n_qubits, 0, b, 0};
      case 'Y':
        return {n_qubits, b, b, 1};
      default:
        throw ParseError(std::string("unknown Pauli axis '") + axis + "'");
    }
  }

  /// Parses text such as "XZIIY", "-XZ", "+iZZ", "iY". One letter per qubit.
  static PauliString parse(const std::string& text) {
    std::size_t pos = 0;
    int t = 0;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      if (text[pos] == '-') t = 2;
      ++pos;
    }
    if (pos < text.size() && text[pos] == 'i') {
      t += 1;
      ++pos;
    }
    const std::string body = text.substr(pos);
    if (body.empty()) throw ParseError("empty Pauli word in \"" + text + "\"");
    std::uint64_t x = 0, z = 0;
    for (std::size_t q = 0; q < body.size(); ++q) {
      const std::uint64_t b = std::uint64_t{1} << q;
      switch (body[q]) {
        case 'I':
          break;
        case 'X':
          x |= b;
          break;
        case 'Z':
          z |= b;
          break;
        case 'Y':
          x |= b;
          z |= b;
          t += 1;
          break;
        default:
          throw ParseError(std::string("unknown Pauli letter '") + body[q] +
                           "' in \"" + text + "\"");
      }
    }
    return {static_cast<int>(body.size()), x, z, t};
  }

  int n_qubits() const { return n_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }
  int phase_exponent() const { return t_; }

  /// The phase i^t as a complex number; always a fourth root of unity.
  cplx phase() const { return phase_from_exponent(t_); }

  bool is_identity() const { return x_ == 0 && z_ == 0 && t_ == 0; }

  /// Number of qubits acted on non-trivially.
  int weight() const { return popcount64(x_ | z_); }

  PauliString adjoint() const {
    // (X^x Z^z)^dag = (-1)^{|x&z|} X^x Z^z.
    const int t = (-t_ + 2 * popcount64(x_ & z_)) % 4;
    return {n_, x_, z_, t};
  }

  bool is_hermitian() const { return adjoint().t_ == t_; }

  /// The word with phase exponent forced to zero (the bare X^x Z^z part).
  PauliString bare() const { return {n_, x_, z_, 0}; }

  bool operator==(const PauliString& o) const {
    return n_ == o.n_ && x_ == o.x_ && z_ == o.z_ && t_ == o.t_;
  }
  bool operator!=(const PauliString& o) const { return !(*this == o); }

  /// Masks in basis-index bit positions (qubit 0 maps to the top bit).
  std::uint64_t x_index_mask() const { return reverse_bits(x_, n_); }
  std::uint64_t z_index_mask() const { return reverse_bits(z_, n_); }

  std::string str() const {
    std::string out;
    int extra = (t_ - popcount64(x_ & z_)) % 4;
    extra = (extra + 4) % 4;
    switch (extra) {
      case 0:
        break;
      case 1:
        out += "+i";
        break;
      case 2:
        out += "-";
        break;
      case 3:
        out += "-i";
        break;
    }
    for (int q = 0; q < n_; ++q) {
      const bool bx = (x_ >> q) & 1, bz = (z_ >> q) & 1;
      out += bx ? (bz ? 'Y' : 'X') : (bz ? 'Z' : 'I');
    }
    return out;
  }

  static cplx phase_from_exponent(int t) {
    switch (((t % 4) + 4) % 4) {
      case 0:
        return {1, 0};
      case 1:
        return {0, 1};
      case 2:
        return {-1, 0};
      default:
        return {0, -1};
    }
  }

  static std::uint64_t mask_all(int n) {
    return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  }

  static std::uint64_t reverse_bits(std::uint64_t v, int n) {
    std::uint64_t r = 0;
    for (int q = 0; q < n; ++q)
      if ((v >> q) & 1) r |= std::uint64_t{1} << (n - 1 - q);
    return r;
  }

 private:
  int n_;
  std::uint64_t x_;
  std::uint64_t z_;
  std::uint8_t t_;
};

/// Exact product p*q with the accumulated Z_4 phase.
inline PauliString pauli_mul(const PauliString& p, const PauliString& q) {
  if (p.n_qubits() != q.n_qubits())
    throw SizeMismatchError("pauli_mul: operand sizes differ (" +
                            std::to_string(p.n_qubits()) + " vs " +
                            std::to_string(q.n_qubits()) + ")");
  // Moving Z^{z_p} through X^{x_q} picks up (-1) per overlapping qubit.
  const int t = p.phase_exponent() + q.phase_exponent() +
                2 * popcount64(p.z_mask() & q.x_mask());
  return {p.n_qubits(), p.x_mask() ^ q.x_mask(), p.z_mask() ^ q.z_mask(), t};
}

inline PauliString operator*(const PauliString& p, const PauliString& q) {
  return pauli_mul(p, q);
}

/// True iff p q == q p, from the symplectic inner product of the masks.
inline bool commutes(const PauliString& p, const PauliString& q) {
  if (p.n_qubits() != q.n_qubits())
    throw SizeMismatchError("commutes: operand sizes differ");
  return ((bit_parity(p.x_mask() & q.z_mask()) +
           bit_parity(p.z_mask() & q.x_mask())) &
          1) == 0;
}

inline std::ostream& operator<<(std::ostream& os, const PauliString& p) {
  return os << p.str();
}

/// Size policy for materializing operators as explicit matrices.
struct RealizeOptions {
  int dense_max_qubits = 12;
  int sparse_max_qubits = 16;
};

/// Complex-weighted sum of Pauli words in canonical form: the stored words are
/// phase-free (X^x Z^z), all phases live in the coefficients, no two terms
/// share a word, and zero coefficients are dropped.
class OperatorSum {
 public:
  struct Term {
    cplx coeff;
    std::uint64_t x;
    std::uint64_t z;
  };

  explicit OperatorSum(int n_qubits) : n_(check_n(n_qubits)) {}

  static OperatorSum zero(int n_qubits) { return OperatorSum(n_qubits); }

  static OperatorSum identity(int n_qubits, cplx coeff = 1.0) {
    OperatorSum s(n_qubits);
    s.add_word(PauliString::identity(n_qubits), coeff);
    return s;
  }

  static OperatorSum from_word(const PauliString& w, cplx coeff = 1.0) {
    OperatorSum s(w.n_qubits());
    s.add_word(w, coeff);
    return s;
  }

  /// Parses a single weighted word in textual notation (phase prefix folded
  /// into the coefficient).
  static OperatorSum parse(const std::string& text) {
    return from_word(PauliString::parse(text));
  }

  int n_qubits() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Adds coeff * w, folding the word's own phase into the coefficient.
  void add_word(const PauliString& w, cplx coeff = 1.0) {
    if (w.n_qubits() != n_)
      throw SizeMismatchError("OperatorSum::add_word: size mismatch");
    insert(coeff * w.phase(), w.x_mask(), w.z_mask());
  }

  OperatorSum& operator+=(const OperatorSum& o) {
    if (o.n_ != n_) throw SizeMismatchError("OperatorSum +=: size mismatch");
    for (const Term& t : o.terms_) insert(t.coeff, t.x, t.z);
    return *this;
  }

  OperatorSum& operator-=(const OperatorSum& o) {
    if (o.n_ != n_) throw SizeMismatchError("OperatorSum -=: size mismatch");
    for (const Term& t : o.terms_) insert(-t.coeff, t.x, t.z);
    return *this;
  }

  OperatorSum& operator*=(cplx s) {
    if (s == cplx(0.0)) {
      terms_.clear();
      return *this;
    }
    for (Term& t : terms_) t.coeff *= s;
    return *this;
  }

  friend OperatorSum operator+(OperatorSum a, const OperatorSum& b) {
    a += b;
    return a;
  }
  friend OperatorSum operator-(OperatorSum a, const OperatorSum& b) {
    a -= b;
    return a;
  }
  friend OperatorSum operator*(OperatorSum a, cplx s) {
    a *= s;
    return a;
  }
  friend OperatorSum operator*(cplx s, OperatorSum a) {
    a *= s;
    return a;
  }

  /// Exact symbolic product (used e.g. for L^dag L).
  friend OperatorSum operator*(const OperatorSum& a, const OperatorSum& b) {
    if (a.n_ != b.n_) throw SizeMismatchError("OperatorSum *: size mismatch");
    OperatorSum out(a.n_);
    for (const Term& ta : a.terms_)
      for (const Term& tb : b.terms_) {
        const PauliString prod = pauli_mul(PauliString(a.n_, ta.x, ta.z, 0),
                                           PauliString(a.n_, tb.x, tb.z, 0));
        out.insert(ta.coeff * tb.coeff * prod.phase(), prod.x_mask(),
                   prod.z_mask());
      }
    return out;
  }

  OperatorSum adjoint() const {
    OperatorSum out(n_);
    for (const Term& t : terms_) {
      // (X^x Z^z)^dag = (-1)^{|x&z|} X^x Z^z.
      const double sign = (popcount64(t.x & t.z) & 1) ? -1.0 : 1.0;
      out.insert(std::conj(t.coeff) * sign, t.x, t.z);
    }
    return out;
  }

  /// Hermitian iff each coefficient times the word's intrinsic phase is real.
  bool is_hermitian(double tol = 1e-12) const {
    for (const Term& t : terms_) {
      const cplx herm = t.coeff * PauliString::phase_from_exponent(
                                      -popcount64(t.x & t.z));
      if (std::abs(herm.imag()) > tol * std::max(1.0, std::abs(herm.real())))
        return false;
    }
    return true;
  }

  /// Coefficient of a given bare word (0 if absent).
  cplx coeff_of(const PauliString& w) const {
    for (const Term& t : terms_)
      if (t.x == w.x_mask() && t.z == w.z_mask()) return t.coeff * w.phase();
    return 0.0;
  }

  cplx trace() const {
    for (const Term& t : terms_)
      if (t.x == 0 && t.z == 0)
        return t.coeff * static_cast<double>(std::uint64_t{1} << n_);
    return 0.0;
  }

  /// Splits off the identity component: returns (scalar, traceless rest).
  std::pair<cplx, OperatorSum> split_scalar() const {
    cplx scalar = 0.0;
    OperatorSum rest(n_);
    for (const Term& t : terms_) {
      if (t.x == 0 && t.z == 0)
        scalar = t.coeff;
      else
        rest.insert(t.coeff, t.x, t.z);
    }
    return {scalar, rest};
  }

  /// y += scale * A x without materializing the matrix.
  void apply_add(const Vec& x, Vec& y, cplx scale = 1.0) const {
    const std::uint64_t dim = std::uint64_t{1} << n_;
    if (static_cast<std::uint64_t>(x.size()) != dim ||
        static_cast<std::uint64_t>(y.size()) != dim)
      throw SizeMismatchError("OperatorSum::apply_add: vector size mismatch");
    for (const Term& t : terms_) {
      const std::uint64_t xm = PauliString::reverse_bits(t.x, n_);
      const std::uint64_t zm = PauliString::reverse_bits(t.z, n_);
      const cplx f = scale * t.coeff;
      for (std::uint64_t b = 0; b < dim; ++b) {
        const double sign = bit_parity(zm & b) ? -1.0 : 1.0;
        y[static_cast<Eigen::Index>(b ^ xm)] +=
            f * sign * x[static_cast<Eigen::Index>(b)];
      }
    }
  }

  Vec apply(const Vec& x) const {
    Vec y = Vec::Zero(x.size());
    apply_add(x, y);
    return y;
  }

  /// Exact dense matrix realization (column b carries entries at b ^ x).
  Mat realize_dense(const RealizeOptions& opts = {}) const {
    if (n_ > opts.dense_max_qubits)
      throw DimensionOverflowError(
          "realize_dense: " + std::to_string(n_) + " qubits exceeds the " +
          std::to_string(opts.dense_max_qubits) + "-qubit dense policy");
    const std::uint64_t dim = std::uint64_t{1} << n_;
    Mat m = Mat::Zero(static_cast<Eigen::Index>(dim),
                      static_cast<Eigen::Index>(dim));
    for (const Term& t : terms_) {
      const std::uint64_t xm = PauliString::reverse_bits(t.x, n_);
      const std::uint64_t zm = PauliString::reverse_bits(t.z, n_);
      for (std::uint64_t b = 0; b < dim; ++b) {
        const double sign = bit_parity(zm & b) ? -1.0 : 1.0;
        m(static_cast<Eigen::Index>(b ^ xm), static_cast<Eigen::Index>(b)) +=
            t.coeff * sign;
      }
    }
    return m;
  }

  SparseMat realize_sparse(const RealizeOptions& opts = {}) const {
    if (n_ > opts.sparse_max_qubits)
      throw DimensionOverflowError(
          "realize_sparse: " + std::to_string(n_) + " qubits exceeds the " +
          std::to_string(opts.sparse_max_qubits) + "-qubit sparse policy");
    const std::uint64_t dim = std::uint64_t{1} << n_;
    std::vector<Eigen::Triplet<cplx>> trips;
    trips.reserve(terms_.size() * dim);
    for (const Term& t : terms_) {
      const std::uint64_t xm = PauliString::reverse_bits(t.x, n_);
      const std::uint64_t zm = PauliString::reverse_bits(t.z, n_);
      for (std::uint64_t b = 0; b < dim; ++b) {
        const double sign = bit_parity(zm & b) ? -1.0 : 1.0;
        trips.emplace_back(static_cast<int>(b ^ xm), static_cast<int>(b),
                           t.coeff * sign);
      }
    }
    SparseMat m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      const Term& t = terms_[k];
      if (k > 0) out += " + ";
      out += "(" + std::to_string(t.coeff.real()) + "," +
             std::to_string(t.coeff.imag()) + ")*" +
             PauliString(n_, t.x, t.z, 0).str();
    }
    return out;
  }

 private:
  static int check_n(int n) {
    if (n < 1 || n > 32)
      throw DimensionOverflowError("OperatorSum supports 1..32 qubits");
    return n;
  }

  void insert(cplx coeff, std::uint64_t x, std::uint64_t z) {
    if (coeff == cplx(0.0)) return;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), std::pair{x, z},
                               [](const Term& t, const std::pair<std::uint64_t,
                                                                 std::uint64_t>& key) {
                                 return std::pair{t.x, t.z} < key;
                               });
    if (it != terms_.end() && it->x == x && it->z == z) {
      it->coeff += coeff;
      if (it->coeff == cplx(0.0)) terms_.erase(it);
    } else {
      terms_.insert(it, Term{coeff, x, z});
    }
  }

  int n_;
  std::vector<Term> terms_;
};

/// Dense realization of a single word including its phase.
inline Mat realize(const PauliString& w, const RealizeOptions& opts = {}) {
  return OperatorSum::from_word(w).realize_dense(opts);
}

inline Mat realize(const OperatorSum& s, const RealizeOptions& opts = {}) {
  return s.realize_dense(opts);
}

}  // namespace imlind
