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

#include <string>
#include <utility>
#include <vector>

#include "qpt/choi.hpp"
#include "qpt/duals.hpp"

namespace qpt {

/// Labelled set of Choi operators with a classification. POVMs sum to the
/// identity, instruments to a CPTP Choi, testers to a process-tensor comb.
struct Instrument {
  enum class Kind { Povm, Instrument, Tester };

  Kind kind = Kind::Instrument;
  std::vector<std::pair<std::string, ChoiOperator>> elements;

  std::size_t size() const { return elements.size(); }
  const ChoiOperator& element(std::size_t i) const { return elements[i].second; }
  const std::string& label(std::size_t i) const { return elements[i].first; }

  WireList wires() const { return elements.front().second.all_wires(); }

  /// Element sum, aligned to the first element's wire order.
  ChoiOperator sum() const {
    ChoiOperator out = elements.front().second;
    for (std::size_t i = 1; i < elements.size(); ++i) {
      const ChoiOperator& el = elements[i].second;
      auto [m, w] =
          move_to_front(el.matrix, el.all_wires(), out.all_wires().labels());
      out.matrix += m;
    }
    return out;
  }
};

inline const char* to_string(Instrument::Kind k) {
  switch (k) {
    case Instrument::Kind::Povm: return "povm";
    case Instrument::Kind::Instrument: return "instrument";
    default: return "tester";
  }
}

// ---------------------------------------------------------------------------
// Constructors for the instruments used throughout
// ---------------------------------------------------------------------------

/// Symmetric qubit POVM from the four tetrahedral Bloch vectors,
/// Pi_b = (1 + b . sigma / sqrt(3)) / 4.
inline const std::vector<std::array<double, 3>>& tetrahedral_vectors() {
  static const std::vector<std::array<double, 3>> beta = {
      {1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  return beta;
}

inline Cmat tetrahedral_element(int b) {
  const auto& beta = tetrahedral_vectors()[b];
  Cmat m = identity(2);
  for (int i = 0; i < 3; ++i) m += (beta[i] / std::sqrt(3.0)) * pauli(i + 1);
  return 0.25 * m;
}

/// Dual operators to the tetrahedral POVM, D_b = (1 + sqrt(3) b . sigma) / 2.
inline Cmat tetrahedral_dual(int b) {
  const auto& beta = tetrahedral_vectors()[b];
  Cmat m = identity(2);
  for (int i = 0; i < 3; ++i) m += std::sqrt(3.0) * beta[i] * pauli(i + 1);
  return 0.5 * m;
}

inline Instrument tetrahedral_povm(const SpaceLabel& wire) {
  Instrument out;
  out.kind = Instrument::Kind::Povm;
  for (int b = 0; b < 4; ++b)
    out.elements.emplace_back("b" + std::to_string(b),
                              effect_choi(tetrahedral_element(b), wire));
  return out;
}

/// Projective POVM onto an orthonormal set of kets. Stored matrices follow
/// the Choi convention (transpose of the physical effect), so the Born
/// contraction tr[O^T Upsilon] yields tr[|k><k| rho].
inline Instrument projective_povm(const std::vector<Cvec>& kets,
                                  const SpaceLabel& wire,
                                  const std::vector<std::string>& labels = {}) {
  Instrument out;
  out.kind = Instrument::Kind::Povm;
  for (std::size_t i = 0; i < kets.size(); ++i) {
    const Cmat p = (kets[i] * kets[i].adjoint()).transpose();
    out.elements.emplace_back(
        labels.empty() ? std::to_string(i) : labels[i], effect_choi(p, wire));
  }
  return out;
}

/// Projective measure-and-pass instrument: elements P x P on (out, in).
inline Instrument projective_instrument(const std::vector<Cvec>& kets,
                                        const SpaceLabel& out_wire,
                                        const SpaceLabel& in_wire,
                                        const std::vector<std::string>& labels = {}) {
  Instrument out;
  out.kind = Instrument::Kind::Instrument;
  const long d = kets.front().size();
  for (std::size_t i = 0; i < kets.size(); ++i) {
    const Cmat p = kets[i] * kets[i].adjoint();
    ChoiOperator el{kron(p, p.transpose()),
                    WireList::single(out_wire, static_cast<int>(d)),
                    WireList::single(in_wire, static_cast<int>(d))};
    out.elements.emplace_back(labels.empty() ? std::to_string(i) : labels[i],
                              std::move(el));
  }
  return out;
}

/// Causal break: POVM followed by an independent repreparation,
/// B^(s,r) = p_s rho^(s) x Pi^(r) on (out, in).
inline Instrument causal_break_instrument(
    const Instrument& povm,
    const std::vector<std::pair<double, Cmat>>& preparations,
    const SpaceLabel& out_wire) {
  if (povm.kind != Instrument::Kind::Povm)
    throw Error("causal_break_instrument: first argument must be a POVM");
  double ptot = 0.0;
  for (const auto& [p, rho] : preparations) {
    if (p < -1e-12) throw NormalizationError("negative preparation probability");
    if (std::abs(rho.trace().real() - 1.0) > tol::trace)
      throw NormalizationError("preparation state not unit trace");
    ptot += p;
  }
  if (std::abs(ptot - 1.0) > tol::trace)
    throw NormalizationError("preparation probabilities do not sum to 1");

  Instrument out;
  out.kind = Instrument::Kind::Instrument;
  for (std::size_t s = 0; s < preparations.size(); ++s)
    for (std::size_t r = 0; r < povm.size(); ++r) {
      const auto& el = povm.element(r);
      ChoiOperator b{kron(preparations[s].first * preparations[s].second,
                          el.matrix),
                     WireList::single(out_wire,
                                      static_cast<int>(preparations[s].second.rows())),
                     el.in_wires};
      out.elements.emplace_back("s" + std::to_string(s) + povm.label(r),
                                std::move(b));
    }
  return out;
}

/// Trash-and-prepare family: discard the emitted state, feed sigma^(x) with
/// probability p^(x). Elements p sigma x 1 on (out, in).
inline Instrument trash_prepare_instrument(
    const std::vector<std::pair<double, Cmat>>& preparations,
    const SpaceLabel& out_wire, const SpaceLabel& in_wire, long d_in) {
  Instrument povm;
  povm.kind = Instrument::Kind::Povm;
  povm.elements.emplace_back("", effect_choi(identity(d_in), in_wire));
  Instrument out = causal_break_instrument(povm, preparations, out_wire);
  out.kind = Instrument::Kind::Instrument;
  return out;
}

/// Single-element identity instrument on a list of (out, in) wire pairs:
/// the Choi operator Psi+ on each pair.
inline Instrument identity_instrument(
    const std::vector<std::pair<Wire, Wire>>& pairs) {
  Instrument out;
  out.kind = Instrument::Kind::Tester;
  std::vector<Cmat> factors;
  std::vector<Wire> ow, iw;
  for (const auto& [o, i] : pairs) {
    if (o.dim != i.dim)
      throw DimensionError("identity_instrument: pair dimension mismatch");
    factors.push_back(max_entangled(o.dim));
    ow.push_back(o);
    iw.push_back(i);
  }
  // Interleave (o_k, i_k) pairs in the given order.
  Cmat m = factors.front();
  WireList wl({ow[0], iw[0]});
  for (std::size_t k = 1; k < factors.size(); ++k) {
    m = kron(m, factors[k]);
    wl = wl.concat(WireList({ow[k], iw[k]}));
  }
  std::vector<Wire> ows(ow), iws(iw);
  ChoiOperator el{Cmat{}, WireList(ows), WireList(iws)};
  // Rearrange from interleaved (o1 i1 o2 i2 ...) to (o1 o2 ... i1 i2 ...).
  auto [mm, ww] = move_to_front(m, wl, el.out_wires.labels());
  el.matrix = std::move(mm);
  out.elements.emplace_back("id", std::move(el));
  return out;
}

/// Single-element completely noisy instrument: discard and feed white noise;
/// Choi operator 1 / prod(d_out) on all listed wires.
inline Instrument noise_instrument(const std::vector<Wire>& out_wires,
                                   const std::vector<Wire>& in_wires) {
  Instrument out;
  out.kind = Instrument::Kind::Tester;
  std::vector<Wire> ow(out_wires), iw(in_wires);
  WireList owl(ow), iwl(iw);
  const long d = owl.total_dim() * iwl.total_dim();
  ChoiOperator el{Cmat::Identity(d, d) / double(owl.total_dim()), owl, iwl};
  out.elements.emplace_back("noise", std::move(el));
  return out;
}

/// The four unnormalised Bell operators as a self-adjoint basis:
/// Psi+- = |00> +- |11>, Phi+- = |01> +- |10| (projectors, trace 2).
inline Cmat bell_operator(int x) {
  Cvec v(4);
  switch (x) {
    case 0: v << 1, 0, 0, 1; break;   // Psi+
    case 1: v << 0, 1, 1, 0; break;   // Phi+
    case 2: v << 0, 1, -1, 0; break;  // Phi-
    default: v << 1, 0, 0, -1; break; // Psi-
  }
  return v * v.adjoint();
}

/// Instrument of Bell-basis feed-and-measure operations across one
/// (out, in) wire pair: elements Psi+/4, Phi+/4, Phi-/4, Psi-/4.
inline Instrument bell_instrument(const SpaceLabel& out_wire,
                                  const SpaceLabel& in_wire) {
  static const char* names[4] = {"psi+", "phi+", "phi-", "psi-"};
  Instrument out;
  out.kind = Instrument::Kind::Instrument;
  for (int x = 0; x < 4; ++x) {
    ChoiOperator el{0.25 * bell_operator(x), WireList::single(out_wire, 2),
                    WireList::single(in_wire, 2)};
    out.elements.emplace_back(names[x], std::move(el));
  }
  return out;
}

/// Sharp classical instrument on one timestep: measure |x><x| and feed |x>.
inline Instrument classical_sharp_instrument(const SpaceLabel& out_wire,
                                             const SpaceLabel& in_wire, long d) {
  std::vector<Cvec> kets;
  for (long x = 0; x < d; ++x) kets.push_back(basis_ket(d, x));
  return projective_instrument(kets, out_wire, in_wire);
}

/// Elementwise tensor product of two instruments (outcome labels joined).
inline Instrument instrument_product(const Instrument& a, const Instrument& b) {
  Instrument out;
  out.kind = (a.kind == Instrument::Kind::Povm && b.kind == Instrument::Kind::Povm)
                 ? Instrument::Kind::Povm
                 : Instrument::Kind::Tester;
  for (const auto& [la, ea] : a.elements)
    for (const auto& [lb, eb] : b.elements) {
      ChoiOperator el{kron(ea.matrix, eb.matrix),
                      ea.out_wires.concat(eb.out_wires),
                      ea.in_wires.concat(eb.in_wires)};
      // Keep the element matrix in out-then-in layout.
      auto [m, w] = move_to_front(el.matrix, ea.all_wires().concat(eb.all_wires()),
                                  el.all_wires().labels());
      el.matrix = std::move(m);
      out.elements.emplace_back(la + "." + lb, std::move(el));
    }
  return out;
}

/// The informationally complete qubit preparations |0>, |1>, |+x>, |+y>.
inline std::vector<std::pair<double, Cmat>> ic_qubit_preparations() {
  Cvec plus_x(2), plus_y(2);
  plus_x << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  plus_y << 1 / std::sqrt(2.0), Complex(0, 1) / std::sqrt(2.0);
  return {{0.25, basis_proj(2, 0)},
          {0.25, basis_proj(2, 1)},
          {0.25, plus_x * plus_x.adjoint()},
          {0.25, plus_y * plus_y.adjoint()}};
}

/// Reference causal break: the tetrahedral POVM followed by a uniformly
/// random IC repreparation.
inline Instrument standard_causal_break(const SpaceLabel& out_wire,
                                        const SpaceLabel& in_wire) {
  return causal_break_instrument(tetrahedral_povm(in_wire),
                                 ic_qubit_preparations(), out_wire);
}

struct InstrumentReport {
  bool elements_positive = false;
  double min_element_eigenvalue = 0.0;
  double sum_deviation = 0.0;  // from the kind-specific summation constraint
  bool sum_ok = false;
  bool valid() const { return elements_positive && sum_ok; }
};

}  // namespace qpt
