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

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qpt/entropy.hpp"
#include "qpt/instrument.hpp"

namespace qpt {

struct ProcessReport {
  double min_eigenvalue = 0.0;  // relative to the trace
  double trace_deviation = 0.0;
  std::vector<std::pair<SpaceLabel, double>> hierarchy;  // per output wire

  double max_hierarchy_deviation() const {
    double m = 0.0;
    for (const auto& [l, d] : hierarchy) m = std::max(m, d);
    return m;
  }
  bool positive(double eps = tol::pos) const { return min_eigenvalue >= -eps; }
  bool causal(double eps = tol::trace) const {
    return max_hierarchy_deviation() <= eps && trace_deviation <= eps;
  }
  bool pass(double eps_pos = tol::pos, double eps_tr = tol::trace) const {
    return positive(eps_pos) && causal(eps_tr);
  }
};

/// Many-body Choi operator of a multi-time process with ordered, labelled
/// wires (latest timestep leftmost, outputs before inputs within a step).
struct ProcessTensor {
  Cmat matrix;
  WireList wires;
  int n_steps = 0;
  std::optional<ProcessReport> validated;

  long dim() const { return matrix.rows(); }
  double trace() const { return matrix.trace().real(); }

  long output_dim() const {
    long d = 1;
    for (const auto& w : wires)
      if (w.label.dir == Dir::Out) d *= w.dim;
    return d;
  }

  Cmat normalized() const { return matrix / matrix.trace().real(); }

  std::vector<int> timesteps() const { return wires.timesteps(); }

  void check() const {
    if (matrix.rows() != matrix.cols() || matrix.rows() != wires.total_dim())
      throw DimensionError("ProcessTensor: matrix/wires dimension mismatch");
    if (!wires.canonical_order())
      throw LabelError("ProcessTensor: wires not in canonical order " +
                       wires.str());
  }
};

// ---------------------------------------------------------------------------
// Contraction and the spatio-temporal Born rule
// ---------------------------------------------------------------------------

/// Contract one Choi element into a labelled operator:
/// out = tr_el[(E^T x 1) M], removing the element's wires.
inline std::pair<Cmat, WireList> contract_element(const Cmat& m, const WireList& wires,
                                                  const ChoiOperator& el) {
  el.check();
  const WireList ew = el.all_wires();
  for (const auto& w : ew) {
    const int at = wires.find(w.label);
    if (at < 0) throw LabelError("contract: element wire " + w.label.str() +
                                 " not present in " + wires.str());
    if (wires[at].dim != w.dim)
      throw DimensionError("contract: wire dimension mismatch at " +
                           w.label.str());
  }
  auto [front, fw] = move_to_front(m, wires, ew.labels());
  const long de = ew.total_dim();
  const long dr = wires.total_dim() / de;
  // out(r,r') = sum_{e,e'} E(e,e') M((e,r),(e',r')), the partial trace of
  // (E^T x 1) M over the element wires.
  Cmat out = Cmat::Zero(dr, dr);
  for (long e = 0; e < de; ++e)
    for (long ep = 0; ep < de; ++ep) {
      const Complex coeff = el.matrix(e, ep);
      if (coeff == Complex(0.0)) continue;
      out.noalias() += coeff * front.block(e * dr, ep * dr, dr, dr);
    }
  WireList rest = wires.without(ew.labels());
  return {out, rest};
}

/// Contract a set of disjoint elements; remaining wires stay open.
inline std::pair<Cmat, WireList> contract(const ProcessTensor& p,
                                          const std::vector<ChoiOperator>& elements) {
  // Reject overlapping supports.
  std::vector<SpaceLabel> seen;
  for (const auto& el : elements)
    for (const auto& l : el.all_wires().labels()) {
      if (std::find(seen.begin(), seen.end(), l) != seen.end())
        throw LabelError("contract: overlapping element supports at " + l.str());
      seen.push_back(l);
    }
  Cmat m = p.matrix;
  WireList w = p.wires;
  for (const auto& el : elements) std::tie(m, w) = contract_element(m, w, el);
  return {m, w};
}

/// Spatio-temporal Born rule, tr[O^T Upsilon], for an element spanning all
/// wires of the process.
inline double born_probability(const ProcessTensor& p, const ChoiOperator& element) {
  if (element.all_wires().size() != p.wires.size())
    throw LabelError("born_probability: element must span every wire");
  auto [m, w] = contract(p, {element});
  return m(0, 0).real();
}

/// Probability of a list of elements that jointly cover every wire.
inline double born_probability_elements(const ProcessTensor& p,
                                        const std::vector<ChoiOperator>& els) {
  auto [m, w] = contract(p, els);
  if (!w.empty()) throw LabelError("born_probability_elements: wires left open");
  return m(0, 0).real();
}

// ---------------------------------------------------------------------------
// Validation: positivity plus the hierarchy of trace conditions
// ---------------------------------------------------------------------------

namespace detail {

/// Shared comb validation: walk the wires from the latest timestep down,
/// tracing wires of one direction and requiring the identity factor to split
/// off at wires of the other. Processes carry identities on output wires;
/// deterministic testers carry them on input wires.
inline ProcessReport validate_comb(const Cmat& matrix, const WireList& wires,
                                   Dir identity_dir) {
  ProcessReport rep;
  long d_id = 1;
  for (const auto& w : wires)
    if (w.label.dir == identity_dir) d_id *= w.dim;
  const double tr = matrix.trace().real();
  rep.trace_deviation = std::abs(tr - double(d_id)) / double(d_id);

  Rvec lambda = hermitian_eigenvalues(0.5 * (matrix + matrix.adjoint()));
  rep.min_eigenvalue = lambda(0) / std::max(1.0, std::abs(tr));

  Cmat x = matrix / tr;
  WireList w = wires;
  while (!w.empty()) {
    const Wire front_wire = w[0];
    if (front_wire.label.dir != identity_dir) {
      std::tie(x, w) = trace_out(x, w, {front_wire.label});
    } else {
      auto [reduced, rw] = trace_out(x, w, {front_wire.label});
      reduced /= double(front_wire.dim);
      const Cmat expected = kron(identity(front_wire.dim), reduced);
      const double num = (x - expected).norm();
      const double den = std::max(1e-300, x.norm());
      rep.hierarchy.emplace_back(front_wire.label, num / den);
      x = std::move(reduced);
      w = rw;
    }
  }
  return rep;
}

}  // namespace detail

/// Positivity plus the hierarchy of trace conditions: every input wire is
/// traced, every output wire must carry an identity factor for the remaining
/// earlier process.
inline ProcessReport validate_process(const ProcessTensor& p) {
  p.check();
  return detail::validate_comb(p.matrix, p.wires, Dir::Out);
}

inline ProcessTensor& validate_in_place(ProcessTensor& p) {
  p.validated = validate_process(p);
  return p;
}

// ---------------------------------------------------------------------------
// Construction from a dilation
// ---------------------------------------------------------------------------

/// One step of fixed system-environment dynamics: either a joint unitary or
/// a CPTP superoperator (row-major vectorisation) on S x E.
struct SEStep {
  enum class Kind { Unitary, Superop };
  Kind kind = Kind::Unitary;
  Cmat m;
};

inline SEStep se_unitary(Cmat u) { return {SEStep::Kind::Unitary, std::move(u)}; }
inline SEStep se_superop(Cmat s) { return {SEStep::Kind::Superop, std::move(s)}; }

namespace detail {

inline void check_step(const SEStep& step, long d_se) {
  if (step.kind == SEStep::Kind::Unitary) {
    if (step.m.rows() != d_se || step.m.cols() != d_se)
      throw DimensionError("dilation step: unitary dimension mismatch");
    if ((step.m.adjoint() * step.m - identity(d_se)).cwiseAbs().maxCoeff() >
        1e-10)
      throw Error("dilation step: matrix is not unitary");
  } else {
    if (step.m.rows() != d_se * d_se || step.m.cols() != d_se * d_se)
      throw DimensionError("dilation step: superoperator dimension mismatch");
    ChoiOperator c = choi_from_superoperator(step.m, d_se, out_wire(0, "chk"),
                                             in_wire(0, "chk"));
    ChannelReport rep = validate_channel(c);
    if (!rep.cp || !rep.tp)
      throw Error("dilation step: superoperator is not CPTP (min eig " +
                  std::to_string(rep.min_eigenvalue) + ", tp dev " +
                  std::to_string(rep.tp_deviation) + ")");
  }
}

inline void apply_step(const SEStep& step, Cmat& state, WireList& wires,
                       const SpaceLabel& s, const SpaceLabel& e) {
  std::pair<Cmat, WireList> r =
      step.kind == SEStep::Kind::Unitary
          ? apply_unitary_on(step.m, state, wires, {s, e})
          : apply_superop_on(step.m, state, wires, {s, e});
  state = std::move(r.first);
  wires = std::move(r.second);
}

/// Exchange the contents of two same-dimension wires by exchanging labels.
inline WireList swap_labels(const WireList& w, const SpaceLabel& a,
                            const SpaceLabel& b) {
  std::vector<Wire> out = w.wires();
  const int ia = w.index_of(a);
  const int ib = w.index_of(b);
  if (out[ia].dim != out[ib].dim)
    throw DimensionError("swap_labels: dimension mismatch");
  std::swap(out[ia].label, out[ib].label);
  return WireList(std::move(out));
}

inline WireList relabel(const WireList& w, const SpaceLabel& from,
                        const SpaceLabel& to) {
  std::vector<Wire> out = w.wires();
  out[w.index_of(from)].label = to;
  return WireList(std::move(out));
}

inline ProcessTensor finish_dilation(Cmat state, WireList wires, int n,
                                     bool keep_env_at_end,
                                     const SpaceLabel& s, const SpaceLabel& e,
                                     const std::string& env_tag) {
  wires = relabel(wires, s, in_wire(n));
  if (keep_env_at_end) {
    wires = relabel(wires, e, in_wire(n, env_tag));
  } else {
    std::tie(state, wires) = trace_out(state, wires, {e});
  }
  auto perm = wires.canonical_permutation();
  std::tie(state, wires) = permute_subsystems(state, wires, perm);
  ProcessTensor p{std::move(state), std::move(wires), n, std::nullopt};
  p.check();
  return p;
}

}  // namespace detail

/// Build the process tensor of fixed SE dynamics that starts from a
/// (possibly correlated) joint state handed out at the first timestep:
/// at each step a fresh unnormalised entangled pair is swapped in and the
/// step dynamics applied; the environment is traced at the end unless kept
/// as an extra final input wire.
inline ProcessTensor build_from_dilation(const Cmat& initial_se, long d_sys,
                                         long d_env,
                                         const std::vector<SEStep>& steps,
                                         bool keep_env_at_end = false,
                                         const std::string& env_tag = "E") {
  if (initial_se.rows() != d_sys * d_env)
    throw DimensionError("build_from_dilation: initial state dimension mismatch");
  if (std::abs(initial_se.trace().real() - 1.0) > tol::trace)
    throw NormalizationError("build_from_dilation: initial state not unit trace");
  Rvec lam = hermitian_eigenvalues(0.5 * (initial_se + initial_se.adjoint()));
  if (lam(0) < -tol::pos)
    throw PositivityError("build_from_dilation: initial state not positive");
  for (const auto& st : steps) detail::check_step(st, d_sys * d_env);

  const int n = static_cast<int>(steps.size()) + 1;
  const SpaceLabel s{0, Dir::In, "#S"};
  const SpaceLabel e{0, Dir::In, "#E"};
  Cmat state = initial_se;
  WireList wires({Wire{s, static_cast<int>(d_sys)}, Wire{e, static_cast<int>(d_env)}});

  for (int j = 1; j <= n - 1; ++j) {
    state = kron(state, max_entangled(d_sys));
    wires = wires.concat(WireList({Wire{in_wire(j), static_cast<int>(d_sys)},
                                   Wire{out_wire(j), static_cast<int>(d_sys)}}));
    wires = detail::swap_labels(wires, s, in_wire(j));
    detail::apply_step(steps[j - 1], state, wires, s, e);
  }
  return detail::finish_dilation(std::move(state), std::move(wires), n,
                                 keep_env_at_end, s, e, env_tag);
}

/// Same construction for an initially uncorrelated system-environment state:
/// the process begins on an output wire at the first timestep, where any
/// system state can be fed in.
inline ProcessTensor build_from_dilation_fresh(const Cmat& env_init, long d_sys,
                                               const std::vector<SEStep>& steps,
                                               bool keep_env_at_end = false,
                                               const std::string& env_tag = "E") {
  const long d_env = env_init.rows();
  if (std::abs(env_init.trace().real() - 1.0) > tol::trace)
    throw NormalizationError("build_from_dilation_fresh: env state not unit trace");
  for (const auto& st : steps) detail::check_step(st, d_sys * d_env);
  if (steps.empty()) throw Error("build_from_dilation_fresh: needs >= 1 step");

  const int n = static_cast<int>(steps.size()) + 1;
  const SpaceLabel s{0, Dir::In, "#S"};
  const SpaceLabel e{0, Dir::In, "#E"};
  Cmat state = kron(max_entangled(d_sys), env_init);
  WireList wires({Wire{s, static_cast<int>(d_sys)},
                  Wire{out_wire(1), static_cast<int>(d_sys)},
                  Wire{e, static_cast<int>(d_env)}});

  for (int j = 2; j <= n; ++j) {
    detail::apply_step(steps[j - 2], state, wires, s, e);
    if (j < n) {
      state = kron(state, max_entangled(d_sys));
      wires = wires.concat(WireList({Wire{in_wire(j), static_cast<int>(d_sys)},
                                     Wire{out_wire(j), static_cast<int>(d_sys)}}));
      wires = detail::swap_labels(wires, s, in_wire(j));
    }
  }
  return detail::finish_dilation(std::move(state), std::move(wires), n,
                                 keep_env_at_end, s, e, env_tag);
}

// ---------------------------------------------------------------------------
// Marginals
// ---------------------------------------------------------------------------

/// Restrict a process to a subset of its timesteps: later dropped steps are
/// traced (the unique deterministic effect), intermediate dropped steps are
/// contracted with the identity map's Choi operator.
inline ProcessTensor marginal_process(const ProcessTensor& p,
                                      const std::set<int>& keep_timesteps) {
  p.check();
  if (keep_timesteps.empty()) throw Error("marginal_process: empty keep set");
  const auto all = p.timesteps();
  for (int t : keep_timesteps)
    if (std::find(all.begin(), all.end(), t) == all.end())
      throw LabelError("marginal_process: unknown timestep " + std::to_string(t));

  const int top_kept = *keep_timesteps.rbegin();
  Cmat m = p.matrix;
  WireList w = p.wires;

  for (int t : all) {
    const bool kept = keep_timesteps.count(t) > 0;
    if (t > top_kept) {
      // Dropped future: trace; each output wire contributes a dimension factor.
      for (const auto& l : w.labels_of_timestep(t)) {
        const double d = w[w.index_of(l)].dim;
        std::tie(m, w) = trace_out(m, w, {l});
        if (l.dir == Dir::Out) m /= d;
      }
    } else if (t == top_kept) {
      // The kept process now ends at this timestep: its output wires become
      // trivial identity factors and are removed.
      if (t != all.front()) {
        for (const auto& l : w.labels_of_timestep(t)) {
          if (l.dir != Dir::Out) continue;
          const double d = w[w.index_of(l)].dim;
          std::tie(m, w) = trace_out(m, w, {l});
          m /= d;
        }
      }
    } else if (!kept) {
      // Dropped intermediate step: do-nothing interrogation.
      SpaceLabel o = out_wire(t), i = in_wire(t);
      if (!w.contains(o) || !w.contains(i))
        throw LabelError("marginal_process: cannot insert an identity map at "
                         "timestep " + std::to_string(t));
      const int d = w[w.index_of(o)].dim;
      ChoiOperator id{max_entangled(d), WireList::single(o, d),
                      WireList::single(i, d)};
      std::tie(m, w) = contract_element(m, w, id);
    }
  }
  ProcessTensor out{std::move(m), std::move(w),
                    static_cast<int>(keep_timesteps.size()), std::nullopt};
  out.check();
  return out;
}

// ---------------------------------------------------------------------------
// The Markov marginal and the non-Markovianity measure
// ---------------------------------------------------------------------------

namespace detail {

/// Marginal of the process on a block of wires: everything later is traced
/// (with output-dimension factors divided out), every full timestep below is
/// contracted with the identity Choi, leftover lower input wires are traced,
/// and a leftover first-step output wire is fed white noise.
inline Cmat block_marginal(const ProcessTensor& p,
                           const std::vector<SpaceLabel>& block) {
  Cmat m = p.matrix;
  WireList w = p.wires;
  const auto in_block = [&](const SpaceLabel& l) {
    return std::find(block.begin(), block.end(), l) != block.end();
  };
  // Position of the lowest block wire in canonical order.
  int lowest = -1;
  for (const auto& l : block) lowest = std::max(lowest, p.wires.index_of(l));

  // Above the block: plain traces.
  for (int i = 0; i < static_cast<int>(p.wires.size()); ++i) {
    const auto& l = p.wires[i].label;
    if (i > lowest || in_block(l)) continue;
    const double d = p.wires[i].dim;
    std::tie(m, w) = trace_out(m, w, {l});
    if (l.dir == Dir::Out) m /= d;
  }
  // Below the block: identity combs on full pairs, traces on bare inputs,
  // white noise into bare outputs.
  std::vector<int> below_ts;
  for (int i = lowest + 1; i < static_cast<int>(p.wires.size()); ++i) {
    const int t = p.wires[i].label.t;
    if (std::find(below_ts.begin(), below_ts.end(), t) == below_ts.end())
      below_ts.push_back(t);
  }
  for (int t : below_ts) {
    SpaceLabel o = out_wire(t), i = in_wire(t);
    const bool has_o = w.contains(o) && !in_block(o);
    const bool has_i = w.contains(i) && !in_block(i);
    if (has_o && has_i) {
      const int d = w[w.index_of(o)].dim;
      ChoiOperator id{max_entangled(d), WireList::single(o, d),
                      WireList::single(i, d)};
      std::tie(m, w) = contract_element(m, w, id);
    } else if (has_i) {
      std::tie(m, w) = trace_out(m, w, {i});
    } else if (has_o) {
      const int d = w[w.index_of(o)].dim;
      ChoiOperator noise{identity(d) / double(d), WireList::single(o, d),
                         WireList{}};
      std::tie(m, w) = contract_element(m, w, noise);
    }
  }
  // Any extra tagged wires below (none in practice) would be a logic error.
  if (w.size() != block.size())
    throw LabelError("block_marginal: leftover wires " + w.str());
  auto [out, ow] = move_to_front(m, w, p.wires.restricted_to(block).labels());
  return out;
}

}  // namespace detail

/// Tensor product of the two-wire marginals of the process: the nearest
/// Markovian process in relative entropy.
inline ProcessTensor markov_marginal(const ProcessTensor& p) {
  p.check();
  const auto ts = p.timesteps();
  if (ts.size() < 2) throw Error("markov_marginal: needs >= 2 timesteps");

  Cmat prod;
  std::vector<Wire> prod_wires;
  bool first = true;
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    const int tj = ts[k];
    const int tjm1 = ts[k + 1];
    std::vector<SpaceLabel> block;
    for (const auto& l : p.wires.labels_of_timestep(tj))
      if (l.dir == Dir::In) block.push_back(l);
    for (const auto& l : p.wires.labels_of_timestep(tjm1))
      if (l.dir == Dir::Out) block.push_back(l);
    Cmat c = detail::block_marginal(p, block);
    // Rescale so that tracing the input wires leaves the identity.
    const WireList bw = p.wires.restricted_to(block);
    long d_out = 1;
    for (const auto& wr : bw)
      if (wr.label.dir == Dir::Out) d_out *= wr.dim;
    c *= double(d_out) / c.trace().real();
    if (first) {
      prod = c;
      first = false;
    } else {
      prod = kron(prod, c);
    }
    for (const auto& wr : bw) prod_wires.push_back(wr);
  }
  // An initial input wire contributes the average initial state.
  std::vector<SpaceLabel> bottom_in;
  for (const auto& l : p.wires.labels_of_timestep(ts.back()))
    if (l.dir == Dir::In) bottom_in.push_back(l);
  if (!bottom_in.empty()) {
    Cmat rho = detail::block_marginal(p, bottom_in);
    rho /= rho.trace().real();
    prod = kron(prod, rho);
    for (const auto& wr : p.wires.restricted_to(bottom_in)) prod_wires.push_back(wr);
  }
  ProcessTensor out{std::move(prod), WireList(std::move(prod_wires)),
                    p.n_steps, std::nullopt};
  out.check();
  return out;
}

/// Relative entropy (bits) between the process and its Markov marginal,
/// both trace-normalised. Zero exactly for Markov product processes.
inline double non_markovianity(const ProcessTensor& p) {
  const ProcessTensor m = markov_marginal(p);
  return quantum_relative_entropy(p.normalized(), m.normalized());
}

// ---------------------------------------------------------------------------
// Memory block partitions
// ---------------------------------------------------------------------------

/// Future / memory / history partition of the wires of a process. The memory
/// block is time-contiguous; blocks may start and end mid-timestep.
struct MemoryBlockSpec {
  std::vector<SpaceLabel> future;
  std::vector<SpaceLabel> memory;
  std::vector<SpaceLabel> history;

  /// Memory = the full (out, in) pairs of timesteps [t_lo, t_hi]; future is
  /// every wire later, history every wire earlier.
  static MemoryBlockSpec full_steps(const ProcessTensor& p, int t_lo, int t_hi) {
    MemoryBlockSpec b;
    for (const auto& w : p.wires) {
      if (w.label.t > t_hi)
        b.future.push_back(w.label);
      else if (w.label.t < t_lo)
        b.history.push_back(w.label);
      else
        b.memory.push_back(w.label);
    }
    return b;
  }

  /// Explicit memory wires; future/history inferred from the wire ordering.
  static MemoryBlockSpec around(const ProcessTensor& p,
                                const std::vector<SpaceLabel>& memory) {
    MemoryBlockSpec b;
    b.memory = memory;
    int lo = static_cast<int>(p.wires.size()), hi = -1;
    for (const auto& l : memory) {
      const int i = p.wires.index_of(l);
      lo = std::min(lo, i);
      hi = std::max(hi, i);
    }
    for (int i = 0; i < static_cast<int>(p.wires.size()); ++i) {
      const auto& l = p.wires[i].label;
      if (std::find(memory.begin(), memory.end(), l) != memory.end()) continue;
      if (i < lo)
        b.future.push_back(l);
      else if (i > hi)
        b.history.push_back(l);
      else
        throw LabelError("MemoryBlockSpec: memory wires not contiguous");
    }
    return b;
  }

  void check(const ProcessTensor& p) const {
    if (future.empty() || memory.empty())
      throw LabelError("MemoryBlockSpec: future and memory must be non-empty");
    if (future.size() + memory.size() + history.size() != p.wires.size())
      throw LabelError("MemoryBlockSpec: partition does not cover the wires");
    for (const auto& l : future) p.wires.index_of(l);
    for (const auto& l : memory) p.wires.index_of(l);
    for (const auto& l : history) p.wires.index_of(l);
  }
};

}  // namespace qpt
