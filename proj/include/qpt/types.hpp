// Copyright 2026 The qpt developers
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
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qpt {

using Complex = std::complex<double>;
using Cmat = Eigen::MatrixXcd;
using Cvec = Eigen::VectorXcd;
using Rvec = Eigen::VectorXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Numerical tolerances shared by every module. Eigenvalues are clipped
/// relative to the trace; positivity, trace and support checks are absolute
/// on trace-normalised operators.
namespace tol {
inline constexpr double eig = 1e-10;   // eigenvalue clip, relative to trace
inline constexpr double pos = 1e-8;    // positivity slack
inline constexpr double trace = 1e-8;  // trace / trace-preservation slack
inline constexpr double support = 1e-8;
inline constexpr double dual = 1e-10;  // biorthogonality of dual sets
}  // namespace tol

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionError : Error {
  explicit DimensionError(const std::string& what) : Error(what) {}
};

struct LabelError : Error {
  explicit LabelError(const std::string& what) : Error(what) {}
};

struct PositivityError : Error {
  explicit PositivityError(const std::string& what) : Error(what) {}
};

struct NormalizationError : Error {
  explicit NormalizationError(const std::string& what) : Error(what) {}
};

struct LinearDependenceError : Error {
  explicit LinearDependenceError(const std::string& what) : Error(what) {}
};

}  // namespace qpt
