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

#include <utility>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#ifdef QPT_HAVE_LAPACKE
#include <lapacke.h>
#endif

#include "qpt/types.hpp"
#include "qpt/wires.hpp"

namespace qpt {

// ---------------------------------------------------------------------------
// Elementary constructors
// ---------------------------------------------------------------------------

inline Cmat identity(long d) { return Cmat::Identity(d, d); }

inline Cvec basis_ket(long d, long k) {
  Cvec v = Cvec::Zero(d);
  v(k) = 1.0;
  return v;
}

inline Cmat basis_proj(long d, long k) {
  Cmat m = Cmat::Zero(d, d);
  m(k, k) = 1.0;
  return m;
}

inline Cmat pauli_x() {
  Cmat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Cmat pauli_y() {
  Cmat m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

inline Cmat pauli_z() {
  Cmat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline Cmat pauli(int i) {
  switch (i) {
    case 0: return identity(2);
    case 1: return pauli_x();
    case 2: return pauli_y();
    default: return pauli_z();
  }
}

/// Two-qubit SWAP.
inline Cmat swap_gate(long d = 2) {
  Cmat m = Cmat::Zero(d * d, d * d);
  for (long a = 0; a < d; ++a)
    for (long b = 0; b < d; ++b) m(a * d + b, b * d + a) = 1.0;
  return m;
}

/// Unnormalised maximally entangled operator Psi = sum_ij |ii><jj|, trace d.
inline Cmat max_entangled(long d) {
  Cvec v = Cvec::Zero(d * d);
  for (long i = 0; i < d; ++i) v(i * d + i) = 1.0;
  return v * v.adjoint();
}

// ---------------------------------------------------------------------------
// Products, permutations and partial traces over labelled factors
// ---------------------------------------------------------------------------

inline Cmat kron(const Cmat& a, const Cmat& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

inline Cmat kron(const std::vector<Cmat>& factors) {
  if (factors.empty()) return Cmat::Identity(1, 1);
  Cmat out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
  return out;
}

namespace detail {

/// Flat index map realising a permutation of mixed-radix digits.
/// perm[k] = position in the OLD list of the factor that lands at slot k.
inline std::vector<long> permutation_index_map(const std::vector<int>& dims,
                                               const std::vector<int>& perm) {
  const int n = static_cast<int>(dims.size());
  std::vector<long> stride_old(n, 1), stride_new(n, 1);
  std::vector<int> dims_new(n);
  for (int k = 0; k < n; ++k) dims_new[k] = dims[perm[k]];
  for (int i = n - 2; i >= 0; --i) stride_old[i] = stride_old[i + 1] * dims[i + 1];
  for (int i = n - 2; i >= 0; --i)
    stride_new[i] = stride_new[i + 1] * dims_new[i + 1];
  long total = 1;
  for (int d : dims) total *= d;
  std::vector<long> map(total);
  std::vector<int> digit(n, 0);
  for (long f = 0; f < total; ++f) {
    long nf = 0;
    for (int k = 0; k < n; ++k) nf += digit[perm[k]] * stride_new[k];
    map[f] = nf;
    for (int i = n - 1; i >= 0; --i) {
      if (++digit[i] < dims[i]) break;
      digit[i] = 0;
    }
  }
  return map;
}

}  // namespace detail

/// Reorder the tensor factors of `m` (annotated by `wires`) so that factor k
/// of the result is factor perm[k] of the input. Spectrum is untouched.
inline std::pair<Cmat, WireList> permute_subsystems(const Cmat& m,
                                                    const WireList& wires,
                                                    const std::vector<int>& perm) {
  const int n = static_cast<int>(wires.size());
  if (static_cast<int>(perm.size()) != n)
    throw DimensionError("permute_subsystems: permutation size mismatch");
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p])
      throw DimensionError("permute_subsystems: not a permutation");
    seen[p] = true;
  }
  if (m.rows() != wires.total_dim() || m.cols() != wires.total_dim())
    throw DimensionError("permute_subsystems: matrix/wires dimension mismatch");

  bool trivial = true;
  for (int k = 0; k < n; ++k)
    if (perm[k] != k) trivial = false;
  if (trivial) return {m, wires};

  std::vector<int> dims(n);
  std::vector<Wire> new_wires(n);
  for (int k = 0; k < n; ++k) dims[k] = wires[k].dim;
  for (int k = 0; k < n; ++k) new_wires[k] = wires[perm[k]];

  const auto map = detail::permutation_index_map(dims, perm);
  const long dim = m.rows();
  Cmat out(dim, dim);
  for (long c = 0; c < dim; ++c) {
    const long nc = map[c];
    for (long r = 0; r < dim; ++r) out(map[r], nc) = m(r, c);
  }
  return {out, WireList(std::move(new_wires))};
}

/// Move the given labels to the front (their given order), rest behind in
/// original order.
inline std::pair<Cmat, WireList> move_to_front(const Cmat& m, const WireList& wires,
                                               const std::vector<SpaceLabel>& front) {
  std::vector<int> perm;
  perm.reserve(wires.size());
  for (const auto& l : front) perm.push_back(wires.index_of(l));
  for (std::size_t i = 0; i < wires.size(); ++i)
    if (std::find(perm.begin(), perm.end(), static_cast<int>(i)) == perm.end())
      perm.push_back(static_cast<int>(i));
  return permute_subsystems(m, wires, perm);
}

/// Partial trace keeping the `keep` labels; kept wire order is preserved.
inline std::pair<Cmat, WireList> partial_trace(const Cmat& m, const WireList& wires,
                                               const std::vector<SpaceLabel>& keep) {
  for (const auto& l : keep) wires.index_of(l);  // throws on unknown labels
  WireList kept = wires.restricted_to(keep);
  auto [front, fw] = move_to_front(m, wires, kept.labels());
  const long dk = kept.total_dim();
  const long dt = wires.total_dim() / dk;
  Cmat out = Cmat::Zero(dk, dk);
  for (long c = 0; c < dk; ++c)
    for (long r = 0; r < dk; ++r) {
      Complex s = 0.0;
      for (long k = 0; k < dt; ++k) s += front(r * dt + k, c * dt + k);
      out(r, c) = s;
    }
  return {out, kept};
}

inline std::pair<Cmat, WireList> trace_out(const Cmat& m, const WireList& wires,
                                           const std::vector<SpaceLabel>& drop) {
  return partial_trace(m, wires, wires.without(drop).labels());
}

// ---------------------------------------------------------------------------
// Hermitian eigensolvers
// ---------------------------------------------------------------------------

inline bool is_hermitian(const Cmat& m, double eps = tol::pos) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= eps * scale;
}

inline void require_hermitian(const Cmat& m, const char* who) {
  if (m.rows() != m.cols())
    throw DimensionError(std::string(who) + ": matrix not square");
  if (!is_hermitian(m))
    throw PositivityError(std::string(who) + ": matrix not Hermitian");
}

/// Eigenvalues of a Hermitian matrix, ascending.
inline Rvec hermitian_eigenvalues(const Cmat& m) {
#ifdef QPT_HAVE_LAPACKE
  Cmat a = m;
  Rvec w(m.rows());
  const int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', static_cast<int>(a.rows()),
                     reinterpret_cast<lapack_complex_double*>(a.data()),
                     static_cast<int>(a.rows()), w.data());
  if (info == 0) return w;
#endif
  Eigen::SelfAdjointEigenSolver<Cmat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

struct HermitianEig {
  Rvec values;   // ascending
  Cmat vectors;  // columns
};

inline HermitianEig hermitian_eig(const Cmat& m) {
#ifdef QPT_HAVE_LAPACKE
  HermitianEig out;
  out.vectors = m;
  out.values.resize(m.rows());
  const int info = LAPACKE_zheevd(
      LAPACK_COL_MAJOR, 'V', 'L', static_cast<int>(m.rows()),
      reinterpret_cast<lapack_complex_double*>(out.vectors.data()),
      static_cast<int>(m.rows()), out.values.data());
  if (info == 0) return out;
#endif
  Eigen::SelfAdjointEigenSolver<Cmat> es(m);
  return {es.eigenvalues(), es.eigenvectors()};
}

// ---------------------------------------------------------------------------
// Matrix exponential
// ---------------------------------------------------------------------------

/// exp(m) via scaling-and-squaring with Pade approximants.
inline Cmat matrix_exp(const Cmat& m) {
  if (m.rows() != m.cols()) throw DimensionError("matrix_exp: not square");
  return m.exp();
}

// ---------------------------------------------------------------------------
// Superoperators (row-major vectorisation: vec(rho)[i*d+j] = rho(i,j))
// ---------------------------------------------------------------------------

inline Cvec vectorize(const Cmat& rho) {
  const long d = rho.rows();
  Cvec v(d * d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) v(i * d + j) = rho(i, j);
  return v;
}

inline Cmat devectorize(const Cvec& v) {
  const long d = static_cast<long>(std::llround(std::sqrt(double(v.size()))));
  Cmat rho(d, d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) rho(i, j) = v(i * d + j);
  return rho;
}

/// Superoperator of rho -> A rho B.
inline Cmat superop_sandwich(const Cmat& a, const Cmat& b) {
  return kron(a, b.transpose());
}

inline Cmat superop_from_unitary(const Cmat& u) {
  return superop_sandwich(u, u.adjoint());
}

inline Cmat apply_superop(const Cmat& s, const Cmat& rho) {
  return devectorize(s * vectorize(rho));
}

/// Apply a superoperator that acts on a set of target wires of a larger
/// labelled operator; remaining factors are untouched. Viewing the operator
/// as a dt x dt grid of dr x dr blocks, each output block is a
/// superoperator-weighted sum of input blocks.
inline std::pair<Cmat, WireList> apply_superop_on(const Cmat& s, const Cmat& m,
                                                  const WireList& wires,
                                                  const std::vector<SpaceLabel>& targets) {
  auto [front, fw] = move_to_front(m, wires, targets);
  const long dt = wires.subset(targets).total_dim();
  const long dr = wires.total_dim() / dt;
  if (s.rows() != dt * dt || s.cols() != dt * dt)
    throw DimensionError("apply_superop_on: superoperator dimension mismatch");
  Cmat out = Cmat::Zero(front.rows(), front.cols());
  for (long t = 0; t < dt; ++t)
    for (long tp = 0; tp < dt; ++tp) {
      auto target = out.block(t * dr, tp * dr, dr, dr);
      for (long u = 0; u < dt; ++u)
        for (long up = 0; up < dt; ++up) {
          const Complex coeff = s(t * dt + tp, u * dt + up);
          if (coeff == Complex(0.0)) continue;
          target.noalias() += coeff * front.block(u * dr, up * dr, dr, dr);
        }
    }
  // Restore the original factor order.
  std::vector<int> inv(wires.size());
  std::vector<int> perm;
  for (const auto& l : fw.labels()) perm.push_back(wires.index_of(l));
  for (std::size_t k = 0; k < perm.size(); ++k) inv[perm[k]] = static_cast<int>(k);
  return permute_subsystems(out, fw, inv);
}

/// Conjugate a set of target wires by a unitary: m -> (U x 1) m (U x 1)^dag.
inline std::pair<Cmat, WireList> apply_unitary_on(const Cmat& u, const Cmat& m,
                                                  const WireList& wires,
                                                  const std::vector<SpaceLabel>& targets) {
  auto [front, fw] = move_to_front(m, wires, targets);
  const long dt = wires.subset(targets).total_dim();
  const long dr = wires.total_dim() / dt;
  if (u.rows() != dt || u.cols() != dt)
    throw DimensionError("apply_unitary_on: unitary dimension mismatch");
  // Treat front as dt x dt blocks of size dr and contract block-wise.
  Cmat tmp = Cmat::Zero(front.rows(), front.cols());
  for (long a = 0; a < dt; ++a)
    for (long b = 0; b < dt; ++b) {
      if (u(a, b) == Complex(0.0)) continue;
      tmp.block(a * dr, 0, dr, front.cols()) +=
          u(a, b) * front.block(b * dr, 0, dr, front.cols());
    }
  Cmat out = Cmat::Zero(front.rows(), front.cols());
  const Cmat udag = u.adjoint();
  for (long a = 0; a < dt; ++a)
    for (long b = 0; b < dt; ++b) {
      if (udag(b, a) == Complex(0.0)) continue;
      out.block(0, a * dr, front.rows(), dr) +=
          udag(b, a) * tmp.block(0, b * dr, front.rows(), dr);
    }
  std::vector<int> inv(wires.size());
  std::vector<int> perm;
  for (const auto& l : fw.labels()) perm.push_back(wires.index_of(l));
  for (std::size_t k = 0; k < perm.size(); ++k) inv[perm[k]] = static_cast<int>(k);
  return permute_subsystems(out, fw, inv);
}

}  // namespace qpt
