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
#include <vector>

#include "qpt/process.hpp"

namespace qpt {

/// Instrument validity report; for testers the summation constraint is the
/// full process-tensor hierarchy.
inline InstrumentReport validate_instrument(const Instrument& inst) {
  InstrumentReport rep;
  rep.min_element_eigenvalue = 0.0;
  for (const auto& [label, el] : inst.elements) {
    el.check();
    const double scale = std::max(1.0, std::abs(el.matrix.trace().real()));
    if (!is_hermitian(el.matrix)) {
      rep.min_element_eigenvalue = -1.0;
      continue;
    }
    Rvec lambda = hermitian_eigenvalues(el.matrix);
    rep.min_element_eigenvalue =
        std::min(rep.min_element_eigenvalue, lambda(0) / scale);
  }
  rep.elements_positive = rep.min_element_eigenvalue >= -tol::pos;

  const ChoiOperator s = inst.sum();
  switch (inst.kind) {
    case Instrument::Kind::Povm: {
      rep.sum_deviation =
          (s.matrix - identity(s.matrix.rows())).cwiseAbs().maxCoeff();
      rep.sum_ok = rep.sum_deviation <= tol::trace;
      break;
    }
    case Instrument::Kind::Instrument: {
      ChannelReport ch = validate_channel(s);
      rep.sum_deviation = std::max(ch.tp_deviation,
                                   std::max(0.0, -ch.min_eigenvalue));
      rep.sum_ok = ch.cp && ch.tp;
      break;
    }
    case Instrument::Kind::Tester: {
      // A deterministic tester is a comb with the dual causal structure:
      // identity factors sit on its measurement (input) wires.
      WireList w = s.all_wires();
      auto perm = w.canonical_permutation();
      auto [m, cw] = permute_subsystems(s.matrix, w, perm);
      ProcessReport pr = detail::validate_comb(m, cw, Dir::In);
      rep.sum_deviation =
          std::max(pr.max_hierarchy_deviation(), pr.trace_deviation);
      rep.sum_ok = pr.pass();
      break;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Conditional history/future decomposition (one split per outcome)
// ---------------------------------------------------------------------------

struct ConditionalSplit {
  std::string outcome;
  Cmat joint;          // subnormalised operator on future + history wires
  WireList joint_wires;
  Cmat future;         // normalised conditional future process
  WireList future_wires;
  Cmat history;        // subnormalised conditional history tester element
  WireList history_wires;
  double weight = 0.0;  // reference probability (noise-resistant history)
};

/// Apply each element of an instrument on the memory block and split the
/// remainder into the conditional future process and history tester element.
inline std::vector<ConditionalSplit> conditional_decomposition(
    const ProcessTensor& p, const Instrument& instrument,
    const MemoryBlockSpec& block) {
  block.check(p);
  // The instrument must act exactly on the memory wires.
  for (const auto& [label, el] : instrument.elements) {
    auto lw = el.all_wires().labels();
    if (lw.size() != block.memory.size())
      throw LabelError("conditional_decomposition: instrument does not match "
                       "the memory block");
    for (const auto& l : lw)
      if (std::find(block.memory.begin(), block.memory.end(), l) ==
          block.memory.end())
        throw LabelError("conditional_decomposition: instrument wire " +
                         l.str() + " outside the memory block");
  }

  long d_fo = 1, d_ho = 1;
  for (const auto& l : block.future)
    if (l.dir == Dir::Out) d_fo *= p.wires.dim_of(l);
  for (const auto& l : block.history)
    if (l.dir == Dir::Out) d_ho *= p.wires.dim_of(l);

  std::vector<ConditionalSplit> out;
  out.reserve(instrument.size());
  for (const auto& [label, el] : instrument.elements) {
    ConditionalSplit split;
    split.outcome = label;
    std::tie(split.joint, split.joint_wires) = contract(p, {el});
    if (!block.history.empty()) {
      std::tie(split.future, split.future_wires) =
          partial_trace(split.joint, split.joint_wires, block.future);
      std::tie(split.history, split.history_wires) =
          partial_trace(split.joint, split.joint_wires, block.history);
      split.history /= double(d_fo);
    } else {
      split.future = split.joint;
      split.future_wires = split.joint_wires;
    }
    split.weight = split.joint.trace().real() / double(d_fo * d_ho);
    const double ftr = split.future.trace().real();
    if (std::abs(ftr) > 1e-300) split.future *= double(d_fo) / ftr;
    out.push_back(std::move(split));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Instrument-specific memory strength
// ---------------------------------------------------------------------------

enum class StrengthMode { PerOutcome, Average, Maximum };

/// Mutual information between the conditional future and history processes,
/// per outcome of the instrument, on the trace-normalised conditionals.
inline std::vector<double> memory_strength_per_outcome(
    const ProcessTensor& p, const Instrument& instrument,
    const MemoryBlockSpec& block) {
  auto splits = conditional_decomposition(p, instrument, block);
  std::vector<double> out;
  out.reserve(splits.size());
  for (const auto& s : splits) {
    const double tr = s.joint.trace().real();
    if (std::abs(tr) <= 1e-14 * std::max(1.0, p.trace())) {
      out.push_back(0.0);  // outcome of probability zero carries nothing
      continue;
    }
    out.push_back(mutual_information(s.joint / tr, s.joint_wires, block.future));
  }
  return out;
}

inline double memory_strength(const ProcessTensor& p, const Instrument& instrument,
                              const MemoryBlockSpec& block, StrengthMode mode) {
  auto values = memory_strength_per_outcome(p, instrument, block);
  if (mode == StrengthMode::Maximum)
    return *std::max_element(values.begin(), values.end());
  double s = 0.0;
  for (double v : values) s += v;
  return s / double(values.size());
}

enum class SpecialStrength { Natural, NoiseResistant };

/// Natural memory strength: identity maps contracted over the memory block
/// (which must consist of full out/in pairs). Noise-resistant strength:
/// trace the block and feed white noise.
inline double special_memory_strength(const ProcessTensor& p,
                                      const MemoryBlockSpec& block,
                                      SpecialStrength kind) {
  block.check(p);
  std::vector<Wire> outs, ins;
  for (const auto& l : block.memory) {
    const Wire w = p.wires[p.wires.index_of(l)];
    (l.dir == Dir::Out ? outs : ins).push_back(w);
  }
  Instrument inst;
  if (kind == SpecialStrength::Natural) {
    std::vector<std::pair<Wire, Wire>> pairs;
    for (const auto& ow : outs) {
      bool matched = false;
      for (const auto& iw : ins)
        if (iw.label.t == ow.label.t && iw.label.tag == ow.label.tag) {
          pairs.emplace_back(ow, iw);
          matched = true;
          break;
        }
      if (!matched)
        throw LabelError("special_memory_strength: natural strength needs "
                         "full (out, in) pairs in the memory block");
    }
    if (pairs.size() != ins.size())
      throw LabelError("special_memory_strength: natural strength needs "
                       "full (out, in) pairs in the memory block");
    inst = identity_instrument(pairs);
  } else {
    inst = noise_instrument(outs, ins);
  }
  return memory_strength_per_outcome(p, inst, block).front();
}

// ---------------------------------------------------------------------------
// Quantum conditional mutual information and the Markov order test
// ---------------------------------------------------------------------------

/// I(F:H|M) = S(FM) + S(MH) - S(FMH) - S(M) on the normalised process.
inline double quantum_cmi(const ProcessTensor& p, const MemoryBlockSpec& block) {
  block.check(p);
  const Cmat rho = p.normalized();
  std::vector<SpaceLabel> fm = block.future;
  fm.insert(fm.end(), block.memory.begin(), block.memory.end());
  std::vector<SpaceLabel> mh = block.memory;
  mh.insert(mh.end(), block.history.begin(), block.history.end());

  auto rho_fm = partial_trace(rho, p.wires, fm);
  auto rho_mh = partial_trace(rho, p.wires, mh);
  auto rho_m = partial_trace(rho, p.wires, block.memory);
  return von_neumann_entropy(rho_fm.first) + von_neumann_entropy(rho_mh.first) -
         von_neumann_entropy(rho) - von_neumann_entropy(rho_m.first);
}

struct MarkovOrderResult {
  bool holds = false;
  double max_violation = 0.0;
  std::string worst_outcome;
};

/// Finite Markov order with respect to an instrument: every outcome's
/// future-history mutual information stays below the threshold.
inline MarkovOrderResult has_markov_order(const ProcessTensor& p,
                                          const Instrument& instrument,
                                          const MemoryBlockSpec& block,
                                          double tolerance = 1e-7) {
  auto values = memory_strength_per_outcome(p, instrument, block);
  MarkovOrderResult res;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > res.max_violation) {
      res.max_violation = values[i];
      res.worst_outcome = instrument.label(i);
    }
  }
  res.holds = res.max_violation <= tolerance;
  return res;
}

}  // namespace qpt
