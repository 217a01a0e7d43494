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

#include <utility>
#include <vector>

#include "imlind/common.hpp"
#include "imlind/lattice.hpp"
#include "imlind/liouville.hpp"
#include "imlind/models.hpp"
#include "imlind/pauli.hpp"
#include "imlind/spectral.hpp"

namespace imlind {

/// Domain-wall duality unitary: the product of controlled-Z gates
/// CZ(tau_{i-1/2}, sigma_i) CZ(sigma_i, tau_{i+1/2}) over all sites. Diagonal
/// with +-1 entries, involutive, and exchanges the two cluster-word families:
///   sigma^x_i      <-> tau^z sigma^x tau^z
///   tau^x_{i+1/2}  <-> sigma^z tau^x sigma^z
/// while sigma^z and tau^z stay put.
class DomainWallDuality {
 public:
  explicit DomainWallDuality(const LatticeSpec& lat) : lattice_(lat) {
    for (int i = 0; i < lat.n_sites; ++i) {
      if (lat.site_exists(i - 1))
        pairs_.emplace_back(lat.qubit_of_tau(i - 1), lat.qubit_of_sigma(i));
      pairs_.emplace_back(lat.qubit_of_sigma(i), lat.qubit_of_tau(i));
    }
  }

  const LatticeSpec& lattice() const { return lattice_; }
  const std::vector<std::pair<int, int>>& cz_pairs() const { return pairs_; }

  /// Exact conjugation U p U^dag through the tableau: each CZ(a,b) dresses an
  /// X on a with a Z on b (and vice versa) and contributes a -1 when both
  /// qubits carry X.
  PauliString conjugate(const PauliString& p) const {
    if (p.n_qubits() != lattice_.n_qubits())
      throw SizeMismatchError("DomainWallDuality: word size mismatch");
    PauliString out = p;
    for (const auto& [a, b] : pairs_) {
      const bool xa = (p.x_mask() >> a) & 1, xb = (p.x_mask() >> b) & 1;
      if (xa) out = out * PauliString::single(out.n_qubits(), b, 'Z');
      if (xb) out = out * PauliString::single(out.n_qubits(), a, 'Z');
      if (xa && xb)
        out = PauliString(out.n_qubits(), out.x_mask(), out.z_mask(),
                          out.phase_exponent() + 2);
    }
    return out;
  }

  OperatorSum conjugate(const OperatorSum& o) const {
    OperatorSum out(o.n_qubits());
    for (const auto& t : o.terms())
      out.add_word(conjugate(PauliString(o.n_qubits(), t.x, t.z, 0)), t.coeff);
    return out;
  }

  /// The +-1 diagonal in the computational basis.
  RealVec diagonal() const {
    const int n = lattice_.n_qubits();
    if (n > 24) throw DimensionOverflowError("duality diagonal too large");
    const std::int64_t dim = std::int64_t{1} << n;
    RealVec d(dim);
    for (std::int64_t b = 0; b < dim; ++b) {
      int par = 0;
      for (const auto& [qa, qb] : pairs_) {
        const int ba = (b >> (n - 1 - qa)) & 1, bb = (b >> (n - 1 - qb)) & 1;
        par ^= ba & bb;
      }
      d[b] = par ? -1.0 : 1.0;
    }
    return d;
  }

  Mat dense(const RealizeOptions& opts = {}) const {
    if (lattice_.n_qubits() > opts.dense_max_qubits)
      throw DimensionOverflowError("duality dense matrix too large");
    return diagonal().cast<cplx>().asDiagonal();
  }

 private:
  LatticeSpec lattice_;
  std::vector<std::pair<int, int>> pairs_;
};

/// Maximum elementwise distance between the sorted spectra of the
/// imaginary-time generators at (a, b) and (a, 1-b). Meaningful only with
/// periodic boundaries, where the duality is exact.
inline double check_duality(double a, double b, const LatticeSpec& lat,
                            std::int64_t max_dense_dim = 4096) {
  if (lat.boundary != Boundary::periodic)
    throw ValidationError(
        "check_duality: the b <-> 1-b map holds under periodic boundaries "
        "only; rerun with boundary = periodic");
  FullSpectrumOptions opts;
  opts.compute_vectors = false;
  opts.max_dense_dim = max_dense_dim;
  const auto s1 = full_spectrum(
      build_imag_superop(build_interpolated({a, b}, lat)), opts);
  const auto s2 = full_spectrum(
      build_imag_superop(build_interpolated({a, 1.0 - b}, lat)), opts);
  double dist = 0.0;
  for (std::size_t i = 0; i < s1.eigenvalues.size(); ++i)
    dist = std::max(dist, std::abs(s1.eigenvalues[i] - s2.eigenvalues[i]));
  return dist;
}

}  // namespace imlind
