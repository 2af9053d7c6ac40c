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

#include <vector>

#include "qpt/linalg.hpp"
#include "qpt/types.hpp"

namespace qpt {

/// Hermitian operator frame on dimension d, self-dual up to the fixed
/// normalisation tr[G_i G_j] = 2 delta_ij. For d = 2 this is {1, X, Y, Z};
/// for larger d the identity (rescaled) plus the generalised Gell-Mann set.
inline std::vector<Cmat> hermitian_frame(long d) {
  std::vector<Cmat> frame;
  frame.reserve(d * d);
  frame.push_back(std::sqrt(2.0 / double(d)) * identity(d));
  for (long j = 0; j < d; ++j)
    for (long k = j + 1; k < d; ++k) {
      Cmat sym = Cmat::Zero(d, d);
      sym(j, k) = 1.0;
      sym(k, j) = 1.0;
      frame.push_back(sym);
      Cmat asym = Cmat::Zero(d, d);
      asym(j, k) = Complex(0, -1);
      asym(k, j) = Complex(0, 1);
      frame.push_back(asym);
    }
  for (long l = 1; l < d; ++l) {
    Cmat diag = Cmat::Zero(d, d);
    for (long j = 0; j < l; ++j) diag(j, j) = 1.0;
    diag(l, l) = -double(l);
    frame.push_back(std::sqrt(2.0 / double(l * (l + 1))) * diag);
  }
  return frame;
}

/// Operators biorthogonal to a linearly independent basis:
/// tr[D_i^dag B_j] = delta_ij. Expansion coefficients on the Hermitian frame
/// are inverted exactly (H F^dag = 1).
struct DualSet {
  std::vector<Cmat> duals;
  std::vector<Cmat> basis;
};

inline DualSet build_dual_set(const std::vector<Cmat>& basis) {
  if (basis.empty()) throw LinearDependenceError("build_dual_set: empty basis");
  const long d = basis.front().rows();
  for (const auto& b : basis)
    if (b.rows() != d || b.cols() != d)
      throw DimensionError("build_dual_set: mixed dimensions");
  const long n = static_cast<long>(basis.size());
  if (n > d * d)
    throw LinearDependenceError("build_dual_set: more elements than dimensions");

  const auto frame = hermitian_frame(d);
  Cmat h(n, d * d);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < d * d; ++j)
      h(i, j) = (frame[j] * basis[i]).trace() / 2.0;

  // For n < d^2 use the pseudoinverse restricted to the spanned subspace.
  Eigen::JacobiSVD<Cmat> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double cond = svd.singularValues()(0) /
                      svd.singularValues()(svd.singularValues().size() - 1);
  if (!(cond < 1e12))
    throw LinearDependenceError(
        "build_dual_set: basis not linearly independent (condition number " +
        std::to_string(cond) + ")");
  Cmat f = (svd.matrixV() *
            svd.singularValues().cwiseInverse().asDiagonal() *
            svd.matrixU().adjoint())
               .adjoint();  // rows of F: f_ij with H F^dag = 1

  DualSet out;
  out.basis = basis;
  out.duals.reserve(n);
  for (long i = 0; i < n; ++i) {
    Cmat dual = Cmat::Zero(d, d);
    for (long j = 0; j < d * d; ++j) dual += 0.5 * f(i, j) * frame[j];
    out.duals.push_back(dual);
  }
  return out;
}

/// Reconstruct an operator from its dual-set expansion on the basis span.
inline Cmat reconstruct_from_duals(const DualSet& ds, const Cmat& m) {
  Cmat out = Cmat::Zero(m.rows(), m.cols());
  for (std::size_t i = 0; i < ds.duals.size(); ++i)
    out += (ds.duals[i].adjoint() * m).trace() * ds.basis[i];
  return out;
}

}  // namespace qpt
