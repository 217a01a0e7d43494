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
#include <deque>
#include <ostream>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "imlind/common.hpp"
#include "imlind/liouville.hpp"
#include "imlind/models.hpp"
#include "imlind/spectral.hpp"
#include "imlind/states.hpp"

namespace imlind {

/// exp(factor * h) for Hermitian h, via diagonalization.
inline Mat expm_hermitian(const Mat& h, double factor) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const RealVec w = (factor * es.eigenvalues().array()).exp();
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

/// exp(-i t h) for Hermitian h (unitary).
inline Mat expm_i_hermitian(const Mat& h, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Vec w(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < w.size(); ++i)
    w[i] = std::exp(cplx(0, -t * es.eigenvalues()[i]));
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

struct PropagateOptions {
  double d_tau = 0.05;
  int max_steps = 100000;
  double tol = 1e-10;
  std::int64_t dense_exp_dim = 256;  // exact exponential below, polynomial above
  std::ostream* log = nullptr;       // step index, distance increment, raw trace
};

struct PropagateResult {
  DensityMatrix state;
  int steps = 0;
};

/// Runs the imaginary-time flow v <- step(v) to its fixed point, renormalizing
/// the trace each step (the raw flow scales like e^{-E0 tau}). Small problems
/// apply the exact matrix exponential of one step; larger ones use a 4th-order
/// polynomial expansion applied to the spectrum shifted to be nonnegative,
/// which leaves the eigenvectors of the generator untouched. Convergence is
/// declared when the trace distance between successive normalized states drops
/// below tol.
inline PropagateResult propagate_imag(const Superoperator& s,
                                      const DensityMatrix& rho0,
                                      const PropagateOptions& opts = {}) {
  if (s.kind() != SuperKind::imag_time)
    throw ValidationError("propagate_imag expects an imaginary-time generator");
  const std::int64_t dim = s.dim();
  if (rho0.dim() * rho0.dim() != dim)
    throw SizeMismatchError("propagate_imag: state size mismatch");
  if (!(opts.d_tau > 0)) throw ValidationError("propagate_imag: d_tau <= 0");

  const bool dense_path = dim <= opts.dense_exp_dim;
  Mat step_matrix;
  double lower_bound = 0.0;
  if (dense_path) {
    const Mat m = s.to_dense(dim);
    if (s.is_hermitian())
      step_matrix = expm_hermitian(m, -opts.d_tau);
    else
      step_matrix = (-opts.d_tau * m).exp();
  } else {
    // Polynomial step p(x) = sum_{k<=4} (-x)^k / k! approximating e^{-x},
    // applied to d_tau * (S - lb). p is positive and strictly decreasing on
    // [0, 1.45], so the dominant eigenvector of the step operator is exactly
    // the minimal-real-part eigenvector of S.
    const double bound = s.term_norm_bound();
    lower_bound = -bound - s.shift();
    const double range = opts.d_tau * 2.0 * bound;
    if (range > 1.45)
      throw ValidationError(
          "propagate_imag: d_tau * spectral range " + std::to_string(range) +
          " too large for the polynomial integrator (limit 1.45)");
  }

  auto apply_step = [&](const Vec& v) -> Vec {
    if (dense_path) return step_matrix * v;
    Vec acc = v;
    Vec term = v;  // (-d_tau (S - lb))^k v, factorial applied in acc
    double factorial = 1.0;
    for (int k = 1; k <= 4; ++k) {
      Vec next = Vec::Zero(dim);
      s.apply_add(term, next);
      next -= lower_bound * term;
      term = (-opts.d_tau) * next;
      factorial *= k;
      acc += term / factorial;
    }
    return acc;
  };

  SuperVector v = vectorize(rho0);
  cplx tr = supervector_trace(v);
  if (std::abs(tr) < 1e-300)
    throw ValidationError("propagate_imag: initial state has zero trace");
  v.data /= tr;
  Mat prev = devectorize(v);

  std::deque<double> window;
  const std::size_t window_len = 60;
  double prev_window_mean = std::numeric_limits<double>::infinity();
  for (int step = 1; step <= opts.max_steps; ++step) {
    v.data = apply_step(v.data);
    tr = supervector_trace(v);
    if (!(std::abs(tr) > 1e-300))
      throw SolverError("propagate_imag: state trace collapsed to zero");
    v.data /= tr;
    Mat cur = devectorize(v);
    const double dist = trace_distance(DensityMatrix(cur), DensityMatrix(prev));
    if (opts.log)
      (*opts.log) << step << " " << dist << " " << tr.real() << "\n";
    if (dist < opts.tol) {
      Mat out = 0.5 * (cur + cur.adjoint());
      out /= out.trace().real();
      DensityMatrix state(std::move(out));
      state.validate(true, 1e-8, 1e-8, 1e-8);
      return {std::move(state), step};
    }
    prev = std::move(cur);
    window.push_back(dist);
    if (window.size() > window_len) window.pop_front();
    if (step % static_cast<int>(window_len) == 0 && window.size() == window_len) {
      double mean = 0.0, sign_flips = 0.0;
      for (double d : window) mean += d;
      mean /= static_cast<double>(window_len);
      for (std::size_t i = 2; i < window.size(); ++i) {
        const double d1 = window[i - 1] - window[i - 2];
        const double d2 = window[i] - window[i - 1];
        if (d1 * d2 < 0) sign_flips += 1.0;
      }
      // Increments that stop decaying signal a rotating (complex-E0)
      // component; a converging flow shrinks them geometrically.
      if (mean > 0.98 * prev_window_mean && mean > opts.tol)
        throw NoSteadyStateError(
            "propagate_imag: increments stagnate at " + std::to_string(mean) +
            " (" + std::to_string(sign_flips) + " sign flips per " +
            std::to_string(window_len) +
            " steps); the minimal eigenvalue is complex or the gap is below "
            "resolution at this step size");
      prev_window_mean = mean;
    }
  }
  throw SolverError("propagate_imag: no convergence within " +
                    std::to_string(opts.max_steps) + " steps");
}

namespace detail {

inline Mat ancilla_raising() {
  Mat s = Mat::Zero(2, 2);
  s(1, 0) = 1.0;  // |1><0|
  return s;
}

inline Mat ancilla_lowering() {
  Mat s = Mat::Zero(2, 2);
  s(0, 1) = 1.0;  // |0><1|
  return s;
}

inline Mat trace_out_ancilla(const Mat& ext) {
  const Eigen::Index d = ext.rows() / 2;
  Mat out(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      out(i, j) = ext(2 * i, 2 * j) + ext(2 * i + 1, 2 * j + 1);
  return out;
}

}  // namespace detail

/// One imaginary-time collision: per jump, couple the system to a fresh
/// two-level ancilla in |0><0| through
///   M = exp(-(H/m) o I d_tau - L o s+ sqrt(d_tau) - L^dag o s- sqrt(d_tau)),
/// conjugate (two-sided, non-unitary), and trace the ancilla out. Output is
/// left unnormalized; one step reproduces rho - L^I(rho) d_tau up to
/// O(d_tau^{3/2}).
inline DensityMatrix collision_step_imag(const LindbladGenerator& gen,
                                         const DensityMatrix& rho,
                                         double d_tau,
                                         const RealizeOptions& opts = {}) {
  if (!(d_tau > 0)) throw ValidationError("collision_step_imag: d_tau <= 0");
  const Mat h = gen.hamiltonian().realize_dense(opts);
  const Eigen::Index d = h.rows();
  if (rho.mat.rows() != d)
    throw SizeMismatchError("collision_step_imag: state size mismatch");
  const std::size_t m = gen.jumps().size();
  if (m == 0) {
    const Mat e = expm_hermitian(h, -d_tau);
    return DensityMatrix(e * rho.mat * e);
  }
  const Mat id2 = Mat::Identity(2, 2);
  Mat anc0 = Mat::Zero(2, 2);
  anc0(0, 0) = 1.0;
  Mat state = rho.mat;
  const double root = std::sqrt(d_tau);
  for (const auto& jump : gen.jumps()) {
    const Mat l = jump.realize_dense(opts);
    Mat g = Eigen::kroneckerProduct(h, id2) * (d_tau / static_cast<double>(m));
    g += Eigen::kroneckerProduct(l, detail::ancilla_raising()) * root;
    g += Eigen::kroneckerProduct(l.adjoint(), detail::ancilla_lowering()) * root;
    const Mat big = expm_hermitian(g, -1.0);
    const Mat ext = big * Eigen::kroneckerProduct(state, anc0) * big.adjoint();
    state = detail::trace_out_ancilla(ext);
  }
  return DensityMatrix(std::move(state));
}

/// One real-time collision: same construction with the unitary
/// U = exp(-i((H/m) o I d_t + L o s+ sqrt(d_t) + L^dag o s- sqrt(d_t))).
/// Exactly trace preserving and completely positive.
inline DensityMatrix collision_step_real(const LindbladGenerator& gen,
                                         const DensityMatrix& rho, double d_t,
                                         const RealizeOptions& opts = {}) {
  if (!(d_t > 0)) throw ValidationError("collision_step_real: d_t <= 0");
  const Mat h = gen.hamiltonian().realize_dense(opts);
  const Eigen::Index d = h.rows();
  if (rho.mat.rows() != d)
    throw SizeMismatchError("collision_step_real: state size mismatch");
  const std::size_t m = gen.jumps().size();
  if (m == 0) {
    const Mat u = expm_i_hermitian(h, d_t);
    return DensityMatrix(u * rho.mat * u.adjoint());
  }
  const Mat id2 = Mat::Identity(2, 2);
  Mat anc0 = Mat::Zero(2, 2);
  anc0(0, 0) = 1.0;
  Mat state = rho.mat;
  const double root = std::sqrt(d_t);
  for (const auto& jump : gen.jumps()) {
    const Mat l = jump.realize_dense(opts);
    Mat g = Eigen::kroneckerProduct(h, id2) * (1.0 / static_cast<double>(m));
    g *= d_t;
    g += Eigen::kroneckerProduct(l, detail::ancilla_raising()) * root;
    g += Eigen::kroneckerProduct(l.adjoint(), detail::ancilla_lowering()) * root;
    const Mat u = expm_i_hermitian(g, 1.0);
    const Mat ext = u * Eigen::kroneckerProduct(state, anc0) * u.adjoint();
    state = detail::trace_out_ancilla(ext);
  }
  return DensityMatrix(std::move(state));
}

}  // namespace imlind
