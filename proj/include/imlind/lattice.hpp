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

#include <string>

#include "imlind/common.hpp"
#include "imlind/pauli.hpp"

namespace imlind {

enum class Boundary { open, periodic };

inline std::string to_string(Boundary b) {
  return b == Boundary::open ? "open" : "periodic";
}

inline Boundary boundary_from_string(const std::string& s) {
  if (s == "open" || s == "obc") return Boundary::open;
  if (s == "periodic" || s == "pbc") return Boundary::periodic;
  throw ParseError("unknown boundary \"" + s + "\"");
}

/// Chain of N sites, each carrying a sigma spin (qubit 2i) and a tau spin
/// living on the bond to the right (qubit 2i+1). Site indices outside [0, N)
/// wrap around under periodic boundaries; under open boundaries any term that
/// would cross the chain end is omitted entirely.
struct LatticeSpec {
  int n_sites;
  Boundary boundary = Boundary::periodic;

  LatticeSpec(int n, Boundary b = Boundary::periodic) : n_sites(n), boundary(b) {
    if (n < 1) throw ValidationError("lattice needs at least one site");
  }

  int n_qubits() const { return 2 * n_sites; }

  /// True iff a raw (unwrapped) site index refers to an existing site.
  bool site_exists(int i) const {
    return boundary == Boundary::periodic || (i >= 0 && i < n_sites);
  }

  int wrap(int i) const {
    const int m = ((i % n_sites) + n_sites) % n_sites;
    return m;
  }

  int qubit_of_sigma(int i) const { return 2 * wrap(i); }
  int qubit_of_tau(int i) const { return 2 * wrap(i) + 1; }

  PauliString sigma(int i, char axis) const {
    return PauliString::single(n_qubits(), qubit_of_sigma(i), axis);
  }
  /// tau(i, axis) is the tau spin at bond i+1/2.
  PauliString tau(int i, char axis) const {
    return PauliString::single(n_qubits(), qubit_of_tau(i), axis);
  }

  /// Cluster-type word sigma^z_i tau^x_{i+1/2} sigma^z_{i+1}; exists for all i
  /// under PBC, for i in [0, N-2] under OBC.
  bool cluster_a_exists(int i) const {
    return site_exists(i) && site_exists(i + 1);
  }
  PauliString cluster_a(int i) const {
    return sigma(i, 'Z') * tau(i, 'X') * sigma(i + 1, 'Z');
  }

  /// Dual word tau^z_{i-1/2} sigma^x_i tau^z_{i+1/2}; exists for i in [1, N-1]
  /// under OBC.
  bool cluster_b_exists(int i) const {
    return site_exists(i - 1) && site_exists(i);
  }
  PauliString cluster_b(int i) const {
    return tau(i - 1, 'Z') * sigma(i, 'X') * tau(i, 'Z');
  }

  /// Global tau-parity Prod_i tau^x (the strong symmetry of the model family).
  PauliString tau_parity() const {
    auto w = PauliString::identity(n_qubits());
    for (int i = 0; i < n_sites; ++i) w = w * tau(i, 'X');
    return w;
  }

  /// Global sigma-parity Prod_i sigma^x (the weak symmetry).
  PauliString sigma_parity() const {
    auto w = PauliString::identity(n_qubits());
    for (int i = 0; i < n_sites; ++i) w = w * sigma(i, 'X');
    return w;
  }

  /// String word sigma^z_i tau^x_{i+1/2} ... tau^x_{j-1/2} sigma^z_j.
  PauliString string_order_word(int i, int j) const {
    if (i >= j)
      throw ValidationError("string order span needs i < j, got i=" +
                            std::to_string(i) + " j=" + std::to_string(j));
    if (boundary == Boundary::open && (i < 0 || j >= n_sites))
      throw ValidationError("string order span leaves the open chain");
    auto w = sigma(i, 'Z');
    for (int k = i; k < j; ++k) w = w * tau(k, 'X');
    return w * sigma(j, 'Z');
  }
};

}  // namespace imlind
