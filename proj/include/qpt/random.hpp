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

#include <random>

#include "qpt/linalg.hpp"

namespace qpt {

using Rng = std::mt19937_64;

inline Cmat random_ginibre(Rng& rng, long rows, long cols) {
  std::normal_distribution<double> g;
  Cmat m(rows, cols);
  for (long c = 0; c < cols; ++c)
    for (long r = 0; r < rows; ++r) m(r, c) = Complex(g(rng), g(rng));
  return m;
}

/// Haar-distributed unitary via QR of a Ginibre matrix.
inline Cmat random_unitary(Rng& rng, long d) {
  Cmat g = random_ginibre(rng, d, d);
  Eigen::HouseholderQR<Cmat> qr(g);
  Cmat q = qr.householderQ();
  Cmat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (long i = 0; i < d; ++i) {
    Complex ph = r(i, i) / std::abs(r(i, i));
    q.col(i) *= ph;
  }
  return q;
}

inline Cvec random_pure_ket(Rng& rng, long d) {
  Cmat g = random_ginibre(rng, d, 1);
  Cvec v = g.col(0);
  return v / v.norm();
}

/// Full-rank random density operator (Hilbert-Schmidt-ish).
inline Cmat random_state(Rng& rng, long d) {
  Cmat g = random_ginibre(rng, d, d);
  Cmat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

}  // namespace qpt
