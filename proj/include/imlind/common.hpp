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

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace imlind {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;
using RealMat = Eigen::MatrixXd;
using SparseMat = Eigen::SparseMatrix<cplx>;

/// Base class for all errors thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SizeMismatchError : Error {
  using Error::Error;
};

struct DimensionOverflowError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct ValidationError : Error {
  using Error::Error;
};

struct SolverError : Error {
  using Error::Error;
};

struct NoSteadyStateError : Error {
  using Error::Error;
};

struct FitError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

inline constexpr double kPi = 3.14159265358979323846;

/// Parity of the number of set bits (0 or 1).
inline int bit_parity(std::uint64_t v) { return __builtin_parityll(v); }

inline int popcount64(std::uint64_t v) { return __builtin_popcountll(v); }

}  // namespace imlind
