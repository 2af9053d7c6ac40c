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

#include <cmath>

#include "qpt/linalg.hpp"
#include "qpt/types.hpp"
#include "qpt/wires.hpp"

namespace qpt {

// All entropies are in bits (log base 2), with 0 log 0 := 0 and eigenvalues
// below tol::eig (relative to the trace) treated as exactly zero.

inline double log2_clipped(double x) { return std::log2(x); }

namespace detail {

inline void require_state(const Cmat& rho, const char* who) {
  require_hermitian(rho, who);
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > tol::trace)
    throw NormalizationError(std::string(who) + ": trace deviates from 1 by " +
                             std::to_string(std::abs(tr - 1.0)));
}

}  // namespace detail

/// Shannon entropy (bits) of a nonnegative spectrum, clipping tiny values.
inline double entropy_of_spectrum(const Rvec& lambda, double clip = tol::eig) {
  double s = 0.0;
  for (long i = 0; i < lambda.size(); ++i) {
    const double l = lambda(i);
    if (l > clip) s -= l * std::log2(l);
  }
  return s;
}

/// Von Neumann entropy S(rho) in bits. rho must be Hermitian, positive up to
/// tol::pos and unit trace up to tol::trace.
inline double von_neumann_entropy(const Cmat& rho) {
  detail::require_state(rho, "von_neumann_entropy");
  Rvec lambda = hermitian_eigenvalues(rho);
  if (lambda(0) < -tol::pos)
    throw PositivityError("von_neumann_entropy: negative eigenvalue " +
                          std::to_string(lambda(0)));
  return entropy_of_spectrum(lambda);
}

/// Quantum relative entropy D(rho || sigma) in bits; +infinity when the
/// support of rho is not contained in that of sigma.
inline double quantum_relative_entropy(const Cmat& rho, const Cmat& sigma) {
  detail::require_state(rho, "quantum_relative_entropy");
  detail::require_state(sigma, "quantum_relative_entropy");
  if (rho.rows() != sigma.rows())
    throw DimensionError("quantum_relative_entropy: dimension mismatch");

  Rvec lr = hermitian_eigenvalues(rho);
  if (lr(0) < -tol::pos)
    throw PositivityError("quantum_relative_entropy: rho not positive");
  HermitianEig es = hermitian_eig(sigma);
  if (es.values(0) < -tol::pos)
    throw PositivityError("quantum_relative_entropy: sigma not positive");

  // <v_j| rho |v_j> for every eigenvector of sigma.
  const Cmat rv = rho * es.vectors;
  Rvec overlap(sigma.rows());
  for (long j = 0; j < sigma.rows(); ++j)
    overlap(j) = es.vectors.col(j).dot(rv.col(j)).real();

  double null_weight = 0.0;
  double cross = 0.0;
  for (long j = 0; j < sigma.rows(); ++j) {
    if (es.values(j) <= tol::eig) {
      null_weight += std::max(0.0, overlap(j));
    } else {
      cross += overlap(j) * std::log2(es.values(j));
    }
  }
  if (null_weight > tol::support) return kInfinity;
  return -entropy_of_spectrum(lr) - cross;
}

/// Trace distance (half the Schatten 1-norm of the difference).
inline double trace_distance(const Cmat& rho, const Cmat& sigma) {
  require_hermitian(rho, "trace_distance");
  require_hermitian(sigma, "trace_distance");
  if (rho.rows() != sigma.rows())
    throw DimensionError("trace_distance: dimension mismatch");
  Rvec lambda = hermitian_eigenvalues(rho - sigma);
  return 0.5 * lambda.cwiseAbs().sum();
}

/// Quantum mutual information I(A:B) = S(A) + S(B) - S(AB) in bits, across
/// the bipartition part_a vs the rest of the wires.
inline double mutual_information(const Cmat& rho, const WireList& wires,
                                 const std::vector<SpaceLabel>& part_a) {
  if (part_a.empty() || part_a.size() == wires.size())
    throw LabelError("mutual_information: partition must be proper");
  auto a = partial_trace(rho, wires, part_a);
  auto b = partial_trace(rho, wires, wires.without(part_a).labels());
  return von_neumann_entropy(a.first) + von_neumann_entropy(b.first) -
         von_neumann_entropy(rho);
}

}  // namespace qpt
