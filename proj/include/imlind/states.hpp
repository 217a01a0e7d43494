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
#include <cstdint>

#include "imlind/common.hpp"

namespace imlind {

/// Density matrix on n qubits. The matrix is stored as-is; validate() checks
/// Hermiticity, positivity and (optionally) unit trace at the documented
/// tolerances.
struct DensityMatrix {
  Mat mat;

  DensityMatrix() = default;
  explicit DensityMatrix(Mat m) : mat(std::move(m)) {
    if (mat.rows() != mat.cols())
      throw SizeMismatchError("DensityMatrix must be square");
    if (dim() != (std::int64_t{1} << n_qubits()))
      throw SizeMismatchError("DensityMatrix dimension is not a power of two");
  }

  std::int64_t dim() const { return mat.rows(); }

  int n_qubits() const {
    int n = 0;
    std::int64_t d = mat.rows();
    while (d > 1) {
      d >>= 1;
      ++n;
    }
    return n;
  }

  cplx trace() const { return mat.trace(); }

  double purity() const { return mat.squaredNorm(); }  // Tr[rho^2] for Hermitian rho

  static DensityMatrix maximally_mixed(int n_qubits) {
    const auto d = std::int64_t{1} << n_qubits;
    return DensityMatrix(Mat::Identity(d, d) / static_cast<double>(d));
  }

  static DensityMatrix pure(const Vec& psi) {
    const Vec v = psi / psi.norm();
    return DensityMatrix(v * v.adjoint());
  }

  void validate(bool normalized = true, double herm_tol = 1e-10,
                double psd_tol = 1e-10, double trace_tol = 1e-10) const {
    if ((mat - mat.adjoint()).cwiseAbs().maxCoeff() > herm_tol)
      throw ValidationError("density matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(mat, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -psd_tol)
      throw ValidationError("density matrix has negative eigenvalues");
    if (normalized && std::abs(trace() - cplx(1.0)) > trace_tol)
      throw ValidationError("density matrix trace differs from one");
  }
};

/// Half the trace norm of rho1 - rho2.
inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim())
    throw SizeMismatchError("trace_distance: dimension mismatch");
  const Mat d = 0.5 * ((a.mat - b.mat) + (a.mat - b.mat).adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(d, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

/// Qubit orderings of the doubled (ket x bra) register. Blocked lists all ket
/// qubits first, then all bra qubits; interleaved alternates k1 b1 k2 b2 ...
enum class Ordering { blocked, interleaved };

/// Flattened density matrix |rho>> = sum_ij rho_ij |i>|j> in the doubled
/// space; under the blocked convention A rho B^dag maps to (A o B*) |rho>>.
struct SuperVector {
  int n_qubits = 0;  // system qubits; the vector has 4^n entries
  Ordering ordering = Ordering::blocked;
  Vec data;

  SuperVector() = default;
  SuperVector(int n, Ordering ord, Vec d)
      : n_qubits(n), ordering(ord), data(std::move(d)) {
    if (static_cast<std::int64_t>(data.size()) != (std::int64_t{1} << (2 * n)))
      throw SizeMismatchError("SuperVector length is not 4^n");
  }
};

inline SuperVector vectorize(const DensityMatrix& rho) {
  const int n = rho.n_qubits();
  const auto d = rho.dim();
  Vec v(d * d);
  for (std::int64_t i = 0; i < d; ++i)
    for (std::int64_t j = 0; j < d; ++j) v[i * d + j] = rho.mat(i, j);
  return {n, Ordering::blocked, std::move(v)};
}

/// Permutes between the blocked and interleaved qubit orderings; applying it
/// twice is the identity.
inline SuperVector reorder(const SuperVector& v, Ordering target) {
  if (v.ordering == target) return v;
  const int n = v.n_qubits;
  const std::int64_t dim = std::int64_t{1} << (2 * n);
  Vec out(dim);
  // Bit of ket qubit q sits at position 2n-1-q blocked / 2n-1-2q interleaved;
  // bra qubit q at n-1-q blocked / 2n-2-2q interleaved (LSB = position 0).
  for (std::int64_t p = 0; p < dim; ++p) {
    std::int64_t q = 0;
    for (int k = 0; k < n; ++k) {
      const int ket_blocked = 2 * n - 1 - k, bra_blocked = n - 1 - k;
      const int ket_inter = 2 * n - 1 - 2 * k, bra_inter = 2 * n - 2 - 2 * k;
      const int from_ket = target == Ordering::interleaved ? ket_blocked : ket_inter;
      const int to_ket = target == Ordering::interleaved ? ket_inter : ket_blocked;
      const int from_bra = target == Ordering::interleaved ? bra_blocked : bra_inter;
      const int to_bra = target == Ordering::interleaved ? bra_inter : bra_blocked;
      if ((p >> from_ket) & 1) q |= std::int64_t{1} << to_ket;
      if ((p >> from_bra) & 1) q |= std::int64_t{1} << to_bra;
    }
    out[q] = v.data[p];
  }
  return {n, target, std::move(out)};
}

/// Inverse of vectorize (accepts either ordering).
inline Mat devectorize(const SuperVector& v) {
  const SuperVector b =
      v.ordering == Ordering::blocked ? v : reorder(v, Ordering::blocked);
  const std::int64_t d = std::int64_t{1} << b.n_qubits;
  Mat m(d, d);
  for (std::int64_t i = 0; i < d; ++i)
    for (std::int64_t j = 0; j < d; ++j) m(i, j) = b.data[i * d + j];
  return m;
}

/// Trace functional on the flattened state: <<I|v>> = Tr[devectorize(v)].
inline cplx supervector_trace(const SuperVector& v) {
  const SuperVector b =
      v.ordering == Ordering::blocked ? v : reorder(v, Ordering::blocked);
  const std::int64_t d = std::int64_t{1} << b.n_qubits;
  cplx t = 0;
  for (std::int64_t i = 0; i < d; ++i) t += b.data[i * d + i];
  return t;
}

/// Ket/bra swap followed by complex conjugation, |rho>> -> |rho^dag>>; the
/// antiunitary symmetry whose fixed points are Hermitian density matrices.
inline SuperVector s_symmetry_apply(const SuperVector& v) {
  if (v.ordering != Ordering::blocked)
    return s_symmetry_apply(reorder(v, Ordering::blocked));
  const std::int64_t d = std::int64_t{1} << v.n_qubits;
  Vec out(d * d);
  for (std::int64_t i = 0; i < d; ++i)
    for (std::int64_t j = 0; j < d; ++j)
      out[i * d + j] = std::conj(v.data[j * d + i]);
  return {v.n_qubits, Ordering::blocked, std::move(out)};
}

}  // namespace imlind
