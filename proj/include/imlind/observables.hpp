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
#include <limits>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "imlind/common.hpp"
#include "imlind/lattice.hpp"
#include "imlind/pauli.hpp"
#include "imlind/states.hpp"

namespace imlind {

/// Tr[rho W] for a single Pauli word, O(2^n) through the masks.
inline cplx expect_linear(const DensityMatrix& rho, const PauliString& w) {
  const int n = w.n_qubits();
  if (rho.dim() != (std::int64_t{1} << n))
    throw SizeMismatchError("expect_linear: size mismatch");
  const std::uint64_t xm = w.x_index_mask(), zm = w.z_index_mask();
  cplx acc = 0;
  const std::int64_t d = rho.dim();
  for (std::int64_t b = 0; b < d; ++b) {
    const double sign = bit_parity(zm & static_cast<std::uint64_t>(b)) ? -1.0 : 1.0;
    acc += sign * rho.mat(static_cast<Eigen::Index>(b ^ static_cast<std::int64_t>(xm)),
                          static_cast<Eigen::Index>(b));
  }
  return acc * w.phase();
}

inline cplx expect_linear(const DensityMatrix& rho, const OperatorSum& o) {
  if (rho.dim() != (std::int64_t{1} << o.n_qubits()))
    throw SizeMismatchError("expect_linear: size mismatch");
  cplx acc = 0;
  for (const auto& t : o.terms())
    acc += t.coeff * expect_linear(rho, PauliString(o.n_qubits(), t.x, t.z, 0));
  return acc;
}

namespace detail {

/// Tr[rho W rho V] for bare words W, V with given prefactors, O(4^n).
inline cplx sandwich_trace(const Mat& rho, const PauliString& w, cplx fw,
                           const PauliString& v, cplx fv) {
  const int n = w.n_qubits();
  const std::int64_t d = std::int64_t{1} << n;
  const std::uint64_t xw = w.x_index_mask(), zw = w.z_index_mask();
  const std::uint64_t xv = v.x_index_mask(), zv = v.z_index_mask();
  cplx acc = 0;
  for (std::int64_t a = 0; a < d; ++a) {
    const double sa = bit_parity(zv & static_cast<std::uint64_t>(a)) ? -1.0 : 1.0;
    const std::int64_t a_xv = a ^ static_cast<std::int64_t>(xv);
    for (std::int64_t c = 0; c < d; ++c) {
      const double sc = bit_parity(zw & static_cast<std::uint64_t>(c)) ? -1.0 : 1.0;
      acc += sa * sc *
             rho(static_cast<Eigen::Index>(a),
                 static_cast<Eigen::Index>(c ^ static_cast<std::int64_t>(xw))) *
             rho(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(a_xv));
    }
  }
  return acc * fw * fv * w.phase() * v.phase();
}

}  // namespace detail

/// Tr[rho O rho O^dag] without realizing the operator, term pair by term pair.
inline cplx renyi2_numerator(const DensityMatrix& rho, const OperatorSum& o) {
  if (rho.dim() != (std::int64_t{1} << o.n_qubits()))
    throw SizeMismatchError("renyi2_numerator: size mismatch");
  const int n = o.n_qubits();
  cplx acc = 0;
  for (const auto& tw : o.terms())
    for (const auto& tv : o.terms()) {
      const PauliString w(n, tw.x, tw.z, 0);
      const PauliString vd = PauliString(n, tv.x, tv.z, 0).adjoint();
      acc += detail::sandwich_trace(rho.mat, w, tw.coeff, vd,
                                    std::conj(tv.coeff));
    }
  return acc;
}

/// Tr[rho O rho O^dag] / Tr[rho^2].
inline cplx expect_renyi2(const DensityMatrix& rho, const OperatorSum& o) {
  const double purity = rho.purity();
  if (!(purity > 0))
    throw ValidationError("expect_renyi2: state has zero purity");
  return renyi2_numerator(rho, o) / purity;
}

inline cplx expect_renyi2(const DensityMatrix& rho, const PauliString& w) {
  return expect_renyi2(rho, OperatorSum::from_word(w));
}

/// Connected linear correlator <Oi Oj> - <Oi><Oj>.
inline cplx corr_linear(const DensityMatrix& rho, const PauliString& oi,
                        const PauliString& oj) {
  return expect_linear(rho, oi * oj) -
         expect_linear(rho, oi) * expect_linear(rho, oj);
}

/// Connected doubled-space correlator built from the word pair.
inline cplx corr_renyi2(const DensityMatrix& rho, const PauliString& oi,
                        const PauliString& oj) {
  return expect_renyi2(rho, oi * oj) -
         expect_renyi2(rho, oi) * expect_renyi2(rho, oj);
}

struct CorrelationSeries {
  std::string label;
  Boundary boundary = Boundary::periodic;
  std::vector<int> separations;  // strictly increasing
  std::vector<cplx> values;
};

/// Site-averaged connected correlators of a per-site word at separations
/// r = 0 .. floor(N/2) (PBC chord convention keeps r within that window).
template <typename SiteWordFn>
CorrelationSeries correlation_series(const DensityMatrix& rho,
                                     const LatticeSpec& lat,
                                     SiteWordFn&& site_word,
                                     bool renyi2, const std::string& label) {
  CorrelationSeries out;
  out.label = label;
  out.boundary = lat.boundary;
  const int max_r = lat.n_sites / 2;
  for (int r = 0; r <= max_r; ++r) {
    cplx acc = 0;
    int count = 0;
    for (int i = 0; i < lat.n_sites; ++i) {
      const int j = i + r;
      if (!lat.site_exists(j)) continue;
      const PauliString oi = site_word(i), oj = site_word(j);
      acc += renyi2 ? corr_renyi2(rho, oi, oj) : corr_linear(rho, oi, oj);
      ++count;
    }
    if (count == 0) continue;
    out.separations.push_back(r);
    out.values.push_back(acc / static_cast<double>(count));
  }
  return out;
}

struct CorrLengthFit {
  double xi = std::numeric_limits<double>::quiet_NaN();
  bool infinite = false;
  double r_squared = 0.0;
  int points_used = 0;
};

/// Least-squares slope of ln|C| against r; xi = -1/slope. Values below the
/// 1e-12 floor are dropped; a slope >= -1e-6 is reported as infinite.
inline CorrLengthFit fit_corr_length(const CorrelationSeries& series,
                                     double floor = 1e-12) {
  std::vector<double> rs, ys;
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    const double a = std::abs(series.values[i]);
    if (a > floor) {
      rs.push_back(static_cast<double>(series.separations[i]));
      ys.push_back(std::log(a));
    }
  }
  if (rs.size() < 3)
    throw FitError("fit_corr_length: only " + std::to_string(rs.size()) +
                   " usable separations (need 3); no signal above the floor");
  const double n = static_cast<double>(rs.size());
  double sr = 0, sy = 0, srr = 0, sry = 0, syy = 0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    sr += rs[i];
    sy += ys[i];
    srr += rs[i] * rs[i];
    sry += rs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  const double denom = n * srr - sr * sr;
  if (std::abs(denom) < 1e-300)
    throw FitError("fit_corr_length: degenerate separations");
  const double slope = (n * sry - sr * sy) / denom;
  CorrLengthFit fit;
  fit.points_used = static_cast<int>(rs.size());
  const double ss_tot = syy - sy * sy / n;
  const double ss_res = ss_tot - slope * (sry - sr * sy / n);
  fit.r_squared = ss_tot > 1e-300 ? 1.0 - ss_res / ss_tot : 1.0;
  if (slope >= -1e-6) {
    fit.infinite = true;
    fit.xi = std::numeric_limits<double>::infinity();
  } else {
    fit.xi = -1.0 / slope;
  }
  return fit;
}

/// <sigma^z_i tau^x_{i+1/2} ... tau^x_{j-1/2} sigma^z_j>.
inline cplx string_order(const DensityMatrix& rho, const LatticeSpec& lat,
                         int i, int j) {
  return expect_linear(rho, lat.string_order_word(i, j));
}

/// |Tr[rho K]| for a unitary Pauli word K.
inline double strong_symmetry_indicator(const DensityMatrix& rho,
                                        const PauliString& k) {
  return std::abs(expect_linear(rho, k));
}

/// Tr[rho U rho U^dag] / Tr[rho^2] for a unitary Pauli word U.
inline double weak_symmetry_indicator(const DensityMatrix& rho,
                                      const PauliString& u) {
  const cplx v = expect_renyi2(rho, u);
  return v.real();
}

struct EntanglementReport {
  int cut_site = 0;                  // cut between sites cut_site-1 and cut_site
  std::vector<double> schmidt_probs; // descending, sum 1
  double entropy = 0.0;              // -sum p ln p
  std::vector<int> degeneracy_pattern;  // group sizes of distinct leading levels
  int leading_degeneracy = 0;
};

/// Schmidt decomposition of the normalized flattened state across a spatial
/// cut: ket and bra qubits of sites < cut_site against the rest. Level groups
/// use a relative threshold of 1e-6 on consecutive sorted probabilities.
inline EntanglementReport supervector_entanglement(const SuperVector& v,
                                                   int cut_site,
                                                   double group_rel_tol = 1e-6) {
  if (v.n_qubits % 2 != 0)
    throw ValidationError(
        "supervector_entanglement needs the two-spin-per-site register");
  const int n_sites = v.n_qubits / 2;
  if (cut_site < 1 || cut_site > n_sites - 1)
    throw ValidationError("cut must lie between 1 and N-1");
  const double norm = v.data.norm();
  if (!(norm > 0)) throw ValidationError("zero supervector");
  const SuperVector inter = v.ordering == Ordering::interleaved
                                ? v
                                : reorder(v, Ordering::interleaved);
  const int total_bits = 4 * n_sites;
  const int left_bits = 4 * cut_site;
  const Eigen::Index rows = Eigen::Index{1} << left_bits;
  const Eigen::Index cols = Eigen::Index{1} << (total_bits - left_bits);
  Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      matrix(inter.data.data(), rows, cols);
  Eigen::BDCSVD<Mat> svd(matrix.cast<cplx>());
  const RealVec sv = svd.singularValues() / norm;

  EntanglementReport rep;
  rep.cut_site = cut_site;
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    const double p = sv[i] * sv[i];
    if (p < 1e-16) continue;
    rep.schmidt_probs.push_back(p);
    entropy -= p * std::log(p);
  }
  rep.entropy = entropy;
  if (!rep.schmidt_probs.empty()) {
    const double lead = rep.schmidt_probs.front();
    int group = 1;
    for (std::size_t i = 1; i < rep.schmidt_probs.size(); ++i) {
      if (rep.schmidt_probs[i - 1] - rep.schmidt_probs[i] <=
          group_rel_tol * lead) {
        ++group;
      } else {
        rep.degeneracy_pattern.push_back(group);
        group = 1;
      }
    }
    rep.degeneracy_pattern.push_back(group);
    rep.leading_degeneracy = rep.degeneracy_pattern.front();
  }
  return rep;
}

}  // namespace imlind
