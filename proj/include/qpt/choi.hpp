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

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qpt/entropy.hpp"
#include "qpt/linalg.hpp"
#include "qpt/random.hpp"
#include "qpt/wires.hpp"

namespace qpt {

/// Choi operator of a CP map with declared output and input wires; the
/// matrix is laid out with the output factors left of the input factors.
/// States are Choi operators with no input wires, effects have no outputs.
struct ChoiOperator {
  Cmat matrix;
  WireList out_wires;
  WireList in_wires;

  long dim_out() const { return out_wires.total_dim(); }
  long dim_in() const { return in_wires.total_dim(); }
  WireList all_wires() const { return out_wires.concat(in_wires); }

  void check() const {
    if (matrix.rows() != matrix.cols() ||
        matrix.rows() != dim_out() * dim_in())
      throw DimensionError("ChoiOperator: matrix/wires dimension mismatch");
  }
};

/// Choi operator of a state (no input wires).
inline ChoiOperator state_choi(const Cmat& rho, const SpaceLabel& l) {
  return {rho, WireList::single(l, static_cast<int>(rho.rows())), WireList{}};
}

/// Choi operator of an effect (no output wires).
inline ChoiOperator effect_choi(const Cmat& e, const SpaceLabel& l) {
  return {e, WireList{}, WireList::single(l, static_cast<int>(e.rows()))};
}

/// Choi operator of a linear map on d_in-dimensional operators:
/// C = (S x I)(Psi) with Psi unnormalised, so the identity channel has
/// trace d. The map is supplied as its action on matrix units.
inline ChoiOperator choi_from_superoperator(
    const std::function<Cmat(const Cmat&)>& action, long d_in,
    const SpaceLabel& out_label, const SpaceLabel& in_label) {
  Cmat first = action(Cmat::Zero(d_in, d_in));
  const long d_out = first.rows();
  Cmat c = Cmat::Zero(d_out * d_in, d_out * d_in);
  for (long i = 0; i < d_in; ++i)
    for (long j = 0; j < d_in; ++j) {
      Cmat unit = Cmat::Zero(d_in, d_in);
      unit(i, j) = 1.0;
      const Cmat block = action(unit);  // S(|i><j|)
      for (long a = 0; a < d_out; ++a)
        for (long b = 0; b < d_out; ++b)
          c(a * d_in + i, b * d_in + j) = block(a, b);
    }
  return {std::move(c),
          WireList::single(out_label, static_cast<int>(d_out)),
          WireList::single(in_label, static_cast<int>(d_in))};
}

/// Same, from a d^2 x d^2 superoperator matrix (row-major vectorisation).
inline ChoiOperator choi_from_superoperator(const Cmat& s, long d_in,
                                            const SpaceLabel& out_label,
                                            const SpaceLabel& in_label) {
  return choi_from_superoperator(
      [&](const Cmat& rho) { return apply_superop(s, rho); }, d_in, out_label,
      in_label);
}

inline ChoiOperator choi_from_kraus(const std::vector<Cmat>& kraus,
                                    const SpaceLabel& out_label,
                                    const SpaceLabel& in_label) {
  return choi_from_superoperator(
      [&](const Cmat& rho) {
        Cmat out = Cmat::Zero(kraus.front().rows(), kraus.front().rows());
        for (const auto& k : kraus) out += k * rho * k.adjoint();
        return out;
      },
      kraus.front().cols(), out_label, in_label);
}

inline ChoiOperator choi_from_unitary(const Cmat& u, const SpaceLabel& out_label,
                                      const SpaceLabel& in_label) {
  return choi_from_kraus({u}, out_label, in_label);
}

/// Action of a Choi operator on a state: tr_i[(1_o x rho^T) C].
inline Cmat apply_choi(const ChoiOperator& c, const Cmat& rho) {
  c.check();
  const long d_i = c.dim_in();
  const long d_o = c.dim_out();
  if (rho.rows() != d_i || rho.cols() != d_i)
    throw DimensionError("apply_choi: input dimension mismatch");
  Cmat out = Cmat::Zero(d_o, d_o);
  for (long a = 0; a < d_o; ++a)
    for (long b = 0; b < d_o; ++b) {
      Complex s = 0.0;
      for (long i = 0; i < d_i; ++i)
        for (long j = 0; j < d_i; ++j)
          s += rho(i, j) * c.matrix(a * d_i + i, b * d_i + j);
      out(a, b) = s;
    }
  return out;
}

/// Kraus operators of a CP map.
struct KrausSet {
  std::vector<Cmat> operators;  // d_out x d_in each

  Cmat completeness() const {  // sum K^dag K
    Cmat s = Cmat::Zero(operators.front().cols(), operators.front().cols());
    for (const auto& k : operators) s += k.adjoint() * k;
    return s;
  }
  bool trace_preserving(double eps = tol::trace) const {
    const Cmat s = completeness();
    return (s - identity(s.rows())).cwiseAbs().maxCoeff() <= eps;
  }
  Cmat apply(const Cmat& rho) const {
    Cmat out = Cmat::Zero(operators.front().rows(), operators.front().rows());
    for (const auto& k : operators) out += k * rho * k.adjoint();
    return out;
  }
};

/// Eigendecompose the Choi operator into Kraus operators, one per eigenvalue
/// above the clip threshold.
inline KrausSet kraus_from_choi(const ChoiOperator& c) {
  c.check();
  const double tr = c.matrix.trace().real();
  HermitianEig es = hermitian_eig(c.matrix);
  if (es.values(0) < -tol::pos * std::max(1.0, tr))
    throw PositivityError("kraus_from_choi: Choi operator not CP (eigenvalue " +
                          std::to_string(es.values(0)) + ")");
  const long d_o = c.dim_out();
  const long d_i = c.dim_in();
  KrausSet out;
  for (long a = 0; a < es.values.size(); ++a) {
    if (es.values(a) <= tol::eig * std::max(1.0, tr)) continue;
    Cmat k(d_o, d_i);
    for (long o = 0; o < d_o; ++o)
      for (long i = 0; i < d_i; ++i) k(o, i) = es.vectors(o * d_i + i, a);
    out.operators.push_back(std::sqrt(es.values(a)) * k);
  }
  return out;
}

struct ChannelReport {
  bool cp = false;
  bool tp = false;
  bool trace_nonincreasing = false;
  double min_eigenvalue = 0.0;   // of the Choi operator, relative to trace
  double tp_deviation = 0.0;     // || tr_o C - 1_i ||_max
};

/// CP/TP checks on a Choi operator; reports, never throws.
inline ChannelReport validate_channel(const ChoiOperator& c) {
  c.check();
  ChannelReport rep;
  const double scale = std::max(1.0, std::abs(c.matrix.trace().real()));
  Rvec lambda = hermitian_eigenvalues(0.5 * (c.matrix + c.matrix.adjoint()));
  rep.min_eigenvalue = lambda(0) / scale;
  rep.cp = is_hermitian(c.matrix) && lambda(0) >= -tol::pos * scale;

  // tr_o over the leading (output) factors.
  const long d_o = c.dim_out();
  const long d_i = c.dim_in();
  Cmat tr_o = Cmat::Zero(d_i, d_i);
  for (long i = 0; i < d_i; ++i)
    for (long j = 0; j < d_i; ++j) {
      Complex s = 0.0;
      for (long a = 0; a < d_o; ++a) s += c.matrix(a * d_i + i, a * d_i + j);
      tr_o(i, j) = s;
    }
  rep.tp_deviation = (tr_o - identity(d_i)).cwiseAbs().maxCoeff();
  rep.tp = rep.tp_deviation <= tol::trace;
  Rvec slack = hermitian_eigenvalues(identity(d_i) - tr_o);
  rep.trace_nonincreasing = slack(0) >= -tol::trace;
  return rep;
}

/// Random CPTP map as a Stinespring dilation with a qubit-squared environment.
inline ChoiOperator random_cptp_choi(Rng& rng, long d, const SpaceLabel& out_label,
                                     const SpaceLabel& in_label) {
  const long de = d * d;
  const Cmat u = random_unitary(rng, d * de);
  WireList w({Wire{{0, Dir::In, "S"}, static_cast<int>(d)},
              Wire{{0, Dir::In, "E"}, static_cast<int>(de)}});
  return choi_from_superoperator(
      [&](const Cmat& rho) {
        Cmat joint = kron(rho, basis_proj(de, 0));
        joint = u * joint * u.adjoint();
        return partial_trace(joint, w, {{0, Dir::In, "S"}}).first;
      },
      d, out_label, in_label);
}

}  // namespace qpt
