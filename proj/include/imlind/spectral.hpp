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
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "imlind/common.hpp"
#include "imlind/liouville.hpp"
#include "imlind/states.hpp"

namespace imlind {

/// Eigenvalues sorted by ascending real part (ties by ascending imaginary
/// part), with conjugate partners therefore adjacent. `shift` carries over the
/// scalar recorded on the superoperator, so `eigenvalues[i] + shift` is the
/// value in the convention that drops the jump-Gram constant.
struct SpectrumResult {
  std::vector<cplx> eigenvalues;
  Mat eigenvectors;  // columns match eigenvalues; empty when not computed
  double shift = 0.0;
  bool partial = false;
  bool ground_is_real = false;
  double gap = std::numeric_limits<double>::quiet_NaN();
  bool defective = false;
  double pair_mismatch = 0.0;
  int iterations = 0;
  // Index pairs (i, j) with eigenvalue_j = conj(eigenvalue_i) and, when
  // eigenvectors are present, column j locked to the ket/bra-swapped
  // conjugate of column i.
  std::vector<std::pair<int, int>> conjugate_partners;

  bool has_vectors() const { return eigenvectors.size() > 0; }

  double spread() const {
    if (eigenvalues.empty()) return 0.0;
    double lo = eigenvalues.front().real(), hi = lo;
    for (const cplx& e : eigenvalues) {
      lo = std::min(lo, e.real());
      hi = std::max(hi, e.real());
    }
    return hi - lo;
  }

  /// Eigenvalues whose real part lies within rel_tol * spread of Re E0.
  int count_ground_multiplicity(double rel_tol = 1e-7) const {
    if (eigenvalues.empty()) return 0;
    const double window = rel_tol * spread();
    const double e0 = eigenvalues.front().real();
    int count = 0;
    for (const cplx& e : eigenvalues)
      if (e.real() - e0 <= window) ++count;
    return count;
  }
};

namespace detail {

inline bool spectrum_less(const cplx& a, const cplx& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

inline void sort_with_vectors(std::vector<cplx>& vals, Mat* vecs) {
  std::vector<int> idx(vals.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) {
    return spectrum_less(vals[i], vals[j]);
  });
  std::vector<cplx> sorted(vals.size());
  for (std::size_t i = 0; i < idx.size(); ++i) sorted[i] = vals[idx[i]];
  vals = std::move(sorted);
  if (vecs && vecs->size() > 0) {
    Mat v(vecs->rows(), vecs->cols());
    for (std::size_t i = 0; i < idx.size(); ++i)
      v.col(static_cast<Eigen::Index>(i)) = vecs->col(idx[i]);
    *vecs = std::move(v);
  }
}

inline void finalize_spectrum(SpectrumResult& r) {
  if (r.eigenvalues.empty()) return;
  const double spread = r.spread();
  const double im_tol = 1e-9 * (spread + 1e-30);
  r.ground_is_real = std::abs(r.eigenvalues.front().imag()) < im_tol ||
                     std::abs(r.eigenvalues.front().imag()) < 1e-14;
  if (r.eigenvalues.size() >= 2)
    r.gap = r.eigenvalues[1].real() - r.eigenvalues[0].real();
  // Conjugate-pair closure, skipped for partial spectra where the partner of
  // a computed mode may legitimately fall outside the window.
  if (!r.partial) {
    double mismatch = 0.0;
    for (const cplx& e : r.eigenvalues) {
      if (std::abs(e.imag()) <= im_tol) continue;
      double best = std::numeric_limits<double>::infinity();
      for (const cplx& f : r.eigenvalues)
        best = std::min(best, std::abs(f - std::conj(e)));
      mismatch = std::max(mismatch, best);
    }
    r.pair_mismatch = mismatch;
  }
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> random_unit_vector(
    std::int64_t dim, std::mt19937_64& rng) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(dim);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (std::int64_t i = 0; i < dim; ++i) {
    if constexpr (std::is_same_v<Scalar, cplx>)
      v[i] = cplx(dist(rng), dist(rng));
    else
      v[i] = dist(rng);
  }
  v /= v.norm();
  return v;
}

}  // namespace detail

struct IterativeOptions {
  double tol = 1e-10;        // residual threshold relative to the norm bound
  int max_iter = 6000;       // total operator applications
  std::uint64_t seed = 7;    // deterministic start vector
  int basis = 0;             // 0 = choose automatically
};

namespace detail {

template <typename Scalar>
struct KrylovOutcome {
  RealVec values;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;
  int iterations = 0;
  bool converged = false;
  RealVec residuals;
};

/// Thick-restart Lanczos for the k smallest eigenvalues of a Hermitian
/// operator, with full reorthogonalization and a deterministic start vector.
template <typename Scalar, typename ApplyFn>
KrylovOutcome<Scalar> lanczos_smallest(ApplyFn&& apply_add, std::int64_t dim,
                                       int k, double norm_scale,
                                       const IterativeOptions& opts) {
  using VecT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using MatT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  KrylovOutcome<Scalar> out;
  int m = opts.basis > 0 ? opts.basis
                         : (dim >= (std::int64_t{1} << 18)
                                ? std::max(2 * k + 12, 32)
                                : std::max(2 * k + 20, 48));
  m = static_cast<int>(std::min<std::int64_t>(m, dim));
  if (m < k + 4) m = static_cast<int>(std::min<std::int64_t>(k + 4, dim));
  std::mt19937_64 rng(opts.seed);

  MatT basis(dim, m);
  RealMat proj = RealMat::Zero(m, m);
  basis.col(0) = random_unit_vector<Scalar>(dim, rng);
  int j = 0;
  const double tol_abs = opts.tol * std::max(norm_scale, 1e-300);
  const double deflate_tol = 1e-13 * std::max(norm_scale, 1e-300);
  VecT w(dim);
  double last_beta = 0.0;
  while (true) {
    // Expand column j: w = A v_j, then project out the current basis.
    w.setZero();
    apply_add(basis.col(j), w);
    ++out.iterations;
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i <= j; ++i) {
        const Scalar h = basis.col(i).dot(w);
        w -= h * basis.col(i);
        if (pass == 0) proj(i, j) += std::real(h);
      }
    for (int i = 0; i < j; ++i) proj(j, i) = proj(i, j);
    last_beta = w.norm();

    // Rayleigh-Ritz on the current block.
    const int size = j + 1;
    Eigen::SelfAdjointEigenSolver<RealMat> es(proj.topLeftCorner(size, size));
    const RealVec theta = es.eigenvalues();
    const RealMat s = es.eigenvectors();
    const int want = std::min<int>(k, size);
    RealVec res(want);
    for (int i = 0; i < want; ++i)
      res[i] = std::abs(last_beta * s(size - 1, i));
    const bool exhausted = size >= dim;
    bool converged = size >= std::min<std::int64_t>(k + 1, dim);
    if (converged)
      for (int i = 0; i < want; ++i)
        converged = converged && (res[i] <= tol_abs || exhausted);

    if (converged || out.iterations >= opts.max_iter) {
      out.values = theta.head(want);
      out.vectors = basis.leftCols(size) * s.leftCols(want).cast<Scalar>();
      for (int i = 0; i < want; ++i) out.vectors.col(i).normalize();
      out.residuals = res;
      out.converged = converged;
      return out;
    }

    if (last_beta <= deflate_tol) {
      // Invariant subspace hit: continue with a fresh orthogonal direction.
      w = random_unit_vector<Scalar>(dim, rng);
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i <= j; ++i) w -= basis.col(i).dot(w) * basis.col(i);
      const double nw = w.norm();
      if (nw < 1e-8) {
        out.values = theta.head(want);
        out.vectors = basis.leftCols(size) * s.leftCols(want).cast<Scalar>();
        out.residuals = res;
        out.converged = true;
        return out;
      }
      w /= nw;
      last_beta = 0.0;
    } else {
      w /= last_beta;
    }

    if (j + 1 < m) {
      basis.col(j + 1) = w;
      ++j;
      continue;
    }

    // Thick restart: keep the l smallest Ritz vectors plus the residual
    // direction; the couplings reappear through the explicit projections.
    const int l = std::max(1, std::min(k + 8, m - 3));
    MatT kept = basis.leftCols(m) * s.leftCols(l).cast<Scalar>();
    basis.leftCols(l) = kept;
    basis.col(l) = w;
    proj.setZero();
    for (int i = 0; i < l; ++i) proj(i, i) = theta[i];
    j = l;
  }
}

}  // namespace detail

struct FullSpectrumOptions {
  bool compute_vectors = true;
  std::int64_t max_dense_dim = 4096;
  std::int64_t defective_check_dim = 2048;
};

/// All 4^n eigenpairs of a superoperator via dense diagonalization, with a
/// Hermitian fast path. Throws DimensionOverflowError above the dense cap and
/// flags (rather than hides) a numerically defective eigenbasis.
inline SpectrumResult full_spectrum(const Superoperator& s,
                                    const FullSpectrumOptions& opts = {}) {
  SpectrumResult r;
  r.shift = s.shift();
  const Mat dense = s.to_dense(opts.max_dense_dim);
  const std::int64_t d = dense.rows();
  if (s.is_hermitian()) {
    if (s.is_real_matrix()) {
      const RealMat dr = dense.real();
      Eigen::SelfAdjointEigenSolver<RealMat> es(
          dr, opts.compute_vectors ? Eigen::ComputeEigenvectors
                                   : Eigen::EigenvaluesOnly);
      if (es.info() != Eigen::Success)
        throw SolverError("symmetric eigensolver failed");
      r.eigenvalues.assign(es.eigenvalues().data(),
                           es.eigenvalues().data() + d);
      if (opts.compute_vectors) r.eigenvectors = es.eigenvectors().cast<cplx>();
    } else {
      Eigen::SelfAdjointEigenSolver<Mat> es(
          dense, opts.compute_vectors ? Eigen::ComputeEigenvectors
                                      : Eigen::EigenvaluesOnly);
      if (es.info() != Eigen::Success)
        throw SolverError("Hermitian eigensolver failed");
      r.eigenvalues.assign(es.eigenvalues().data(),
                           es.eigenvalues().data() + d);
      if (opts.compute_vectors) r.eigenvectors = es.eigenvectors();
    }
  } else {
    Eigen::ComplexEigenSolver<Mat> es(dense, opts.compute_vectors);
    if (es.info() != Eigen::Success)
      throw SolverError("complex eigensolver failed");
    r.eigenvalues.assign(es.eigenvalues().data(),
                         es.eigenvalues().data() + d);
    if (opts.compute_vectors) {
      r.eigenvectors = es.eigenvectors();
      if (d <= opts.defective_check_dim) {
        // At an exceptional point the computed eigenvector matrix collapses
        // to rcond ~ sqrt(machine eps), not to machine eps itself.
        Eigen::PartialPivLU<Mat> lu(r.eigenvectors);
        if (lu.rcond() < 1e-8) r.defective = true;
      }
    }
  }
  detail::sort_with_vectors(r.eigenvalues,
                            r.has_vectors() ? &r.eigenvectors : nullptr);
  // For a generator commuting with the antiunitary ket/bra swap, lock each
  // conjugate-partner column to the swapped conjugate of its mate (cluster
  // against cluster: numerical jitter in the real parts interleaves
  // degenerate groups in the sorted order). The residual is unchanged and
  // Hermitian states then expand with exactly paired coefficients.
  if (r.has_vectors() && !s.is_hermitian() && s.is_s_symmetric()) {
    const std::size_t count = r.eigenvalues.size();
    const double tol = 1e-8 * (r.spread() + 1e-30);
    const int n = s.n_qubits();
    std::vector<int> cluster_of(count, -1);
    std::vector<std::vector<int>> clusters;
    for (std::size_t i = 0; i < count; ++i) {
      if (cluster_of[i] >= 0) continue;
      const int id = static_cast<int>(clusters.size());
      clusters.emplace_back();
      for (std::size_t j = i; j < count; ++j)
        if (cluster_of[j] < 0 &&
            std::abs(r.eigenvalues[j] - r.eigenvalues[i]) <= tol) {
          cluster_of[j] = id;
          clusters[id].push_back(static_cast<int>(j));
        }
    }
    std::vector<bool> claimed(clusters.size(), false);
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      const cplx ref = r.eigenvalues[clusters[c][0]];
      if (ref.imag() >= -tol || claimed[c]) continue;
      for (std::size_t cc = 0; cc < clusters.size(); ++cc) {
        if (cc == c || claimed[cc]) continue;
        if (std::abs(r.eigenvalues[clusters[cc][0]] - std::conj(ref)) > tol)
          continue;
        if (clusters[cc].size() != clusters[c].size()) break;
        for (std::size_t k = 0; k < clusters[c].size(); ++k) {
          const int src = clusters[c][k], dst = clusters[cc][k];
          const SuperVector swapped = s_symmetry_apply(
              {n, Ordering::blocked, r.eigenvectors.col(src)});
          r.eigenvectors.col(dst) = swapped.data / swapped.data.norm();
          r.conjugate_partners.emplace_back(src, dst);
        }
        claimed[c] = claimed[cc] = true;
        break;
      }
    }
  }
  detail::finalize_spectrum(r);
  return r;
}

/// k eigenpairs with the smallest real parts. Hermitian superoperators use
/// thick-restart Lanczos at any size (real arithmetic when the matrix is
/// real); non-Hermitian ones use dense shift-invert Arnoldi and are limited
/// to the dense cap. Deterministic for a fixed seed.
inline SpectrumResult extremal_spectrum(const Superoperator& s, int k,
                                        const IterativeOptions& opts = {}) {
  if (k < 1) throw ValidationError("extremal_spectrum: k must be >= 1");
  const std::int64_t dim = s.dim();
  k = static_cast<int>(std::min<std::int64_t>(k, dim));
  SpectrumResult r;
  r.shift = s.shift();
  r.partial = true;
  const double scale = s.term_norm_bound() + std::abs(s.shift());

  if (s.is_hermitian()) {
    if (s.is_real_matrix()) {
      auto outcome = detail::lanczos_smallest<double>(
          [&](const auto& x, auto& y) { s.apply_add_real(x, y); }, dim, k,
          scale, opts);
      if (!outcome.converged) {
        std::ostringstream msg;
        msg << "Lanczos did not converge in " << outcome.iterations
            << " iterations; residuals:";
        for (int i = 0; i < outcome.residuals.size(); ++i)
          msg << " " << outcome.residuals[i];
        throw SolverError(msg.str());
      }
      r.iterations = outcome.iterations;
      for (int i = 0; i < outcome.values.size(); ++i)
        r.eigenvalues.emplace_back(outcome.values[i], 0.0);
      r.eigenvectors = outcome.vectors.cast<cplx>();
    } else {
      auto outcome = detail::lanczos_smallest<cplx>(
          [&](const auto& x, auto& y) { s.apply_add(x, y); }, dim, k, scale,
          opts);
      if (!outcome.converged)
        throw SolverError("Lanczos did not converge (complex Hermitian path)");
      r.iterations = outcome.iterations;
      for (int i = 0; i < outcome.values.size(); ++i)
        r.eigenvalues.emplace_back(outcome.values[i], 0.0);
      r.eigenvectors = outcome.vectors;
    }
    detail::finalize_spectrum(r);
    return r;
  }

  // Non-Hermitian path: shift-invert Arnoldi around a point strictly below
  // the spectrum. Dense factorization keeps this exact and deterministic.
  if (dim > 4096)
    throw SolverError(
        "extremal_spectrum: the non-Hermitian iterative path is limited to "
        "dimension 4096");
  const Mat dense = s.to_dense(4096);
  const double bound = s.term_norm_bound();
  const double sigma_re = -s.shift() - bound - 0.02 * (bound + 1.0) - 1.0;
  const cplx sigma(sigma_re, 0.0);
  Eigen::PartialPivLU<Mat> lu(dense - sigma * Mat::Identity(dim, dim));

  std::mt19937_64 rng(opts.seed);
  const int m_max = static_cast<int>(
      std::min<std::int64_t>(std::max(6 * k + 24, 80), dim));
  Mat q(dim, m_max + 1);
  Mat hess = Mat::Zero(m_max + 1, m_max);
  q.col(0) = detail::random_unit_vector<cplx>(dim, rng);
  int iters = 0;
  for (int j = 0; j < m_max; ++j) {
    Vec w = lu.solve(q.col(j));
    ++iters;
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i <= j; ++i) {
        const cplx h = q.col(i).dot(w);
        w -= h * q.col(i);
        if (pass == 0) hess(i, j) += h;
      }
    const double beta = w.norm();
    hess(j + 1, j) = beta;
    const bool breakdown = beta <= 1e-13;
    if (!breakdown) q.col(j + 1) = w / beta;

    const int size = j + 1;
    if (breakdown || size >= std::max(2 * k, 8) || size == m_max) {
      Eigen::ComplexEigenSolver<Mat> es(hess.topLeftCorner(size, size), true);
      std::vector<int> order(size);
      std::iota(order.begin(), order.end(), 0);
      std::vector<cplx> lambdas(size);
      for (int i = 0; i < size; ++i)
        lambdas[i] = sigma + 1.0 / es.eigenvalues()[i];
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return detail::spectrum_less(lambdas[a], lambdas[b]);
      });
      const int want = std::min(k, size);
      Mat cand(dim, want);
      RealVec res(want);
      r.eigenvalues.assign(want, cplx(0.0));
      bool ok = true;
      for (int i = 0; i < want; ++i) {
        Vec x = q.leftCols(size) * es.eigenvectors().col(order[i]);
        x.normalize();
        const cplx lam = lambdas[order[i]];
        // Residual measured on the original operator, not the mapped one.
        const Vec ax = s.apply(x);
        res[i] = (ax - lam * x).norm();
        ok = ok && res[i] <= opts.tol * std::max(scale, 1e-300);
        cand.col(i) = x;
        r.eigenvalues[i] = lam;
      }
      if (ok || breakdown || size == m_max) {
        if (!ok && !breakdown && size == m_max) {
          std::ostringstream msg;
          msg << "shift-invert Arnoldi did not converge (basis " << size
              << "); residuals:";
          for (int i = 0; i < res.size(); ++i) msg << " " << res[i];
          throw SolverError(msg.str());
        }
        r.eigenvectors = cand;
        r.iterations = iters;
        detail::sort_with_vectors(r.eigenvalues, &r.eigenvectors);
        detail::finalize_spectrum(r);
        return r;
      }
    }
  }
  throw SolverError("shift-invert Arnoldi exhausted its basis");
}

/// Multiplies the vector by the global phase that makes the devectorized
/// matrix have a real positive trace; if the trace vanishes, falls back to
/// halving the antiunitary ket/bra-swap charge.
inline SuperVector fix_supervector_phase(const SuperVector& v) {
  SuperVector out = v.ordering == Ordering::blocked
                        ? v
                        : reorder(v, Ordering::blocked);
  const cplx tr = supervector_trace(out);
  const double norm = out.data.norm();
  if (std::abs(tr) > 1e-12 * norm) {
    out.data *= std::exp(cplx(0, -std::arg(tr)));
    return out;
  }
  const SuperVector sv = s_symmetry_apply(out);
  const cplx charge = out.data.dot(sv.data) / (norm * norm);
  if (std::abs(charge) > 0.5)
    out.data *= std::exp(cplx(0, std::arg(charge) / 2.0));
  return out;
}

struct SteadyStateOptions {
  double deg_rel_tol = 1e-7;
  double psd_tol = 1e-8;
  bool force_iterative = false;
  int iterative_k = 4;
  IterativeOptions iterative;
};

/// Steady state(s) of an imaginary-time generator: the ground multiplet of
/// the sorted spectrum. Unique ground states are phase-fixed, symmetrized,
/// positivity-checked and trace-normalized; a degenerate ground space is
/// returned raw (Hermitian combinations may be required) with the flag set.
struct SteadyStateResult {
  std::vector<DensityMatrix> states;
  bool degenerate = false;
  double ground_energy = 0.0;
  double gap = std::numeric_limits<double>::quiet_NaN();

  const DensityMatrix& unique() const {
    if (degenerate)
      throw NoSteadyStateError("steady state is degenerate; inspect states");
    return states.front();
  }
};

inline SteadyStateResult steady_state_from_spectrum(const SpectrumResult& spec,
                                                    int n_qubits,
                                                    const SteadyStateOptions& opts = {}) {
  if (!spec.has_vectors())
    throw SolverError("steady_state: spectrum has no eigenvectors");
  if (!spec.ground_is_real)
    throw NoSteadyStateError(
        "minimal eigenvalue has a nonzero imaginary part; the imaginary-time "
        "flow does not converge");
  const int mult = spec.count_ground_multiplicity(opts.deg_rel_tol);
  SteadyStateResult out;
  out.degenerate = mult > 1;
  out.ground_energy = spec.eigenvalues.front().real();
  out.gap = spec.gap;
  for (int g = 0; g < mult; ++g) {
    SuperVector v{n_qubits, Ordering::blocked, spec.eigenvectors.col(g)};
    v = fix_supervector_phase(v);
    Mat m = devectorize(v);
    m = 0.5 * (m + m.adjoint()).eval();
    if (!out.degenerate) {
      const cplx tr = m.trace();
      if (std::abs(tr) < 1e-12)
        throw NoSteadyStateError("ground eigenvector is traceless");
      m /= tr;
      Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < -opts.psd_tol)
        throw NoSteadyStateError(
            "ground eigenvector is not positive semidefinite (min eig " +
            std::to_string(es.eigenvalues().minCoeff()) + ")");
      m /= m.trace().real();
    } else {
      const cplx tr = m.trace();
      if (std::abs(tr) > 1e-8)
        m /= tr;
      else
        m /= m.norm();
    }
    out.states.emplace_back(std::move(m));
  }
  return out;
}

inline SteadyStateResult steady_state(const Superoperator& s,
                                      const SteadyStateOptions& opts = {}) {
  SpectrumResult spec;
  if (!opts.force_iterative && s.dim() <= 4096) {
    spec = full_spectrum(s);
  } else {
    spec = extremal_spectrum(s, std::max(2, opts.iterative_k), opts.iterative);
  }
  return steady_state_from_spectrum(spec, s.n_qubits(), opts);
}

/// Number of eigenvalues within rel_tol * (spectral spread) of Re E0.
inline int degeneracy(const Superoperator& s, double rel_tol = 1e-7) {
  FullSpectrumOptions opts;
  opts.compute_vectors = false;
  return full_spectrum(s, opts).count_ground_multiplicity(rel_tol);
}

/// Expansion of an initial state over the right eigenbasis: coefficients a_i
/// on real-eigenvalue modes and (b, b*) pairs on conjugate modes.
struct EigenbasisExpansion {
  Vec coeffs;
  std::vector<int> real_modes;
  std::vector<std::pair<int, int>> conjugate_pairs;
  double residual = 0.0;
  double rcond = 1.0;
};

inline EigenbasisExpansion expand_in_eigenbasis(const SpectrumResult& spec,
                                                const DensityMatrix& rho0) {
  if (!spec.has_vectors() || spec.partial ||
      spec.eigenvectors.rows() != spec.eigenvectors.cols())
    throw SolverError("expand_in_eigenbasis needs a full eigenbasis");
  if (spec.defective)
    throw SolverError(
        "expand_in_eigenbasis: the spectrum was flagged defective");
  const Vec b = vectorize(rho0).data;
  if (b.size() != spec.eigenvectors.rows())
    throw SizeMismatchError("expand_in_eigenbasis: state size mismatch");
  Eigen::PartialPivLU<Mat> lu(spec.eigenvectors);
  EigenbasisExpansion out;
  out.rcond = lu.rcond();
  if (out.rcond < 1e-8)
    throw SolverError("eigenbasis is ill-conditioned (rcond estimate " +
                      std::to_string(out.rcond) + ")");
  out.coeffs = lu.solve(b);
  out.residual =
      (spec.eigenvectors * out.coeffs - b).norm() / std::max(b.norm(), 1e-300);
  if (out.residual > 1e-8)
    throw SolverError("eigenbasis expansion residual " +
                      std::to_string(out.residual) + " exceeds 1e-8");
  const double im_tol = 1e-9 * (spec.spread() + 1e-30);
  std::vector<bool> used(spec.eigenvalues.size(), false);
  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
    if (std::abs(spec.eigenvalues[i].imag()) <= im_tol) {
      out.real_modes.push_back(static_cast<int>(i));
      used[i] = true;
    }
  }
  if (!spec.conjugate_partners.empty()) {
    for (const auto& [i, j] : spec.conjugate_partners) {
      used[i] = used[j] = true;
      out.conjugate_pairs.emplace_back(i, j);
    }
    return out;
  }
  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
    if (used[i]) continue;
    double best = std::numeric_limits<double>::infinity();
    std::size_t match = i;
    for (std::size_t j = i + 1; j < spec.eigenvalues.size(); ++j) {
      if (used[j]) continue;
      const double d =
          std::abs(spec.eigenvalues[j] - std::conj(spec.eigenvalues[i]));
      if (d < best) {
        best = d;
        match = j;
      }
    }
    if (match != i) {
      used[i] = used[match] = true;
      out.conjugate_pairs.emplace_back(static_cast<int>(i),
                                       static_cast<int>(match));
    }
  }
  return out;
}

}  // namespace imlind
