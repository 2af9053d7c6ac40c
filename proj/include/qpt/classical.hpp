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

#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "qpt/process.hpp"

namespace qpt {

/// Flat probability table over per-timestep finite alphabets. Timesteps are
/// numbered 1..n; index digits run with timestep 1 most significant.
struct JointDistribution {
  std::vector<int> alphabet_sizes;  // per timestep, in time order
  std::vector<double> probs;

  int n_steps() const { return static_cast<int>(alphabet_sizes.size()); }

  long size() const {
    long s = 1;
    for (int a : alphabet_sizes) s *= a;
    return s;
  }

  long index(const std::vector<int>& x) const {
    long idx = 0;
    for (std::size_t j = 0; j < x.size(); ++j)
      idx = idx * alphabet_sizes[j] + x[j];
    return idx;
  }

  double& at(const std::vector<int>& x) { return probs[index(x)]; }
  double at(const std::vector<int>& x) const { return probs[index(x)]; }

  void check() const {
    if (static_cast<long>(probs.size()) != size())
      throw DimensionError("JointDistribution: table size mismatch");
    double total = 0.0;
    for (double p : probs) {
      if (p < -1e-15) throw NormalizationError("JointDistribution: negative entry");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw NormalizationError("JointDistribution: probabilities sum to " +
                               std::to_string(total));
  }

  template <typename F>
  void for_each(F&& f) const {
    std::vector<int> x(alphabet_sizes.size(), 0);
    for (long idx = 0; idx < size(); ++idx) {
      f(x, probs[idx]);
      for (int j = n_steps() - 1; j >= 0; --j) {
        if (++x[j] < alphabet_sizes[j]) break;
        x[j] = 0;
      }
    }
  }
};

/// Column-stochastic transition matrix (columns sum to one, acting on
/// probability vectors from the left).
struct StochasticMatrix {
  Eigen::MatrixXd matrix;

  void check(double eps = 1e-12) const {
    for (long c = 0; c < matrix.cols(); ++c) {
      double s = 0.0;
      for (long r = 0; r < matrix.rows(); ++r) {
        if (matrix(r, c) < -eps)
          throw NormalizationError("StochasticMatrix: negative entry");
        s += matrix(r, c);
      }
      if (std::abs(s - 1.0) > 1e-12)
        throw NormalizationError("StochasticMatrix: column sum " + std::to_string(s));
    }
  }
};

// ---------------------------------------------------------------------------
// Marginals, conditionals and Markov order
// ---------------------------------------------------------------------------

inline JointDistribution marginalize(const JointDistribution& d,
                                     const std::set<int>& keep) {
  if (keep.empty()) throw Error("marginalize: empty keep set");
  for (int t : keep)
    if (t < 1 || t > d.n_steps())
      throw LabelError("marginalize: unknown timestep " + std::to_string(t));
  JointDistribution out;
  for (int t : keep) out.alphabet_sizes.push_back(d.alphabet_sizes[t - 1]);
  out.probs.assign(out.size(), 0.0);
  d.for_each([&](const std::vector<int>& x, double p) {
    std::vector<int> y;
    y.reserve(keep.size());
    for (int t : keep) y.push_back(x[t - 1]);
    out.at(y) += p;
  });
  return out;
}

/// Conditional distribution over the remaining timesteps given fixed values
/// on a subset (timestep -> value).
inline JointDistribution conditional(const JointDistribution& d,
                                     const std::map<int, int>& given) {
  std::set<int> given_ts;
  for (const auto& [t, v] : given) given_ts.insert(t);
  double pg = 0.0;
  d.for_each([&](const std::vector<int>& x, double p) {
    for (const auto& [t, v] : given)
      if (x[t - 1] != v) return;
    pg += p;
  });
  if (pg <= 1e-12)
    throw NormalizationError("conditional: conditioning event has probability " +
                             std::to_string(pg));
  JointDistribution out;
  for (int t = 1; t <= d.n_steps(); ++t)
    if (!given_ts.count(t)) out.alphabet_sizes.push_back(d.alphabet_sizes[t - 1]);
  out.probs.assign(out.size(), 0.0);
  d.for_each([&](const std::vector<int>& x, double p) {
    for (const auto& [t, v] : given)
      if (x[t - 1] != v) return;
    std::vector<int> y;
    for (int t = 1; t <= d.n_steps(); ++t)
      if (!given_ts.count(t)) y.push_back(x[t - 1]);
    out.at(y) += p / pg;
  });
  return out;
}

struct MarkovOrderCheck {
  bool holds = false;
  double max_violation = 0.0;
};

/// Check P(x_k | whole past) = P(x_k | previous ell steps) for every k and
/// every positive-probability history. Histories below the conditioning
/// tolerance are skipped.
inline MarkovOrderCheck markov_order_check(const JointDistribution& d, int ell,
                                           double tolerance = 1e-9) {
  if (ell < 0) throw Error("markov_order_check: ell must be >= 0");
  d.check();
  MarkovOrderCheck res;
  const int n = d.n_steps();
  for (int k = 2; k <= n; ++k) {
    std::set<int> upto_k;
    for (int t = 1; t <= k; ++t) upto_k.insert(t);
    JointDistribution dk = marginalize(d, upto_k);
    const int mem = std::min(ell, k - 1);
    std::set<int> recent_and_k;
    for (int t = k - mem; t <= k; ++t) recent_and_k.insert(t);
    JointDistribution dr = marginalize(d, recent_and_k);

    std::set<int> past;
    for (int t = 1; t <= k - 1; ++t) past.insert(t);
    JointDistribution dpast = marginalize(d, past);
    std::set<int> recent;
    for (int t = k - mem; t <= k - 1; ++t) recent.insert(t);
    JointDistribution drecent =
        mem > 0 ? marginalize(d, recent) : JointDistribution{{1}, {1.0}};

    dk.for_each([&](const std::vector<int>& x, double p) {
      std::vector<int> hist(x.begin(), x.end() - 1);
      const double ph = dpast.at(hist);
      if (ph <= 1e-12) return;
      std::vector<int> rec(x.end() - 1 - mem, x.end() - 1);
      std::vector<int> rec_and_k(x.end() - 1 - mem, x.end());
      const double pr = mem > 0 ? drecent.at(rec) : 1.0;
      if (pr <= 1e-12) return;
      const double full_cond = p / ph;
      const double recent_cond = dr.at(rec_and_k) / pr;
      res.max_violation =
          std::max(res.max_violation, std::abs(full_cond - recent_cond));
    });
  }
  res.holds = res.max_violation <= tolerance;
  return res;
}

inline double shannon_entropy(const JointDistribution& d) {
  double s = 0.0;
  for (double p : d.probs)
    if (p > 1e-15) s -= p * std::log2(p);
  return s;
}

/// Classical conditional mutual information H(FM) + H(MH) - H(FMH) - H(M)
/// in bits, over a timestep partition.
inline double classical_cmi(const JointDistribution& d, const std::set<int>& future,
                            const std::set<int>& memory,
                            const std::set<int>& history) {
  if (future.empty() || memory.empty() || history.empty())
    throw Error("classical_cmi: empty partition block");
  std::set<int> fm = future, mh = memory, all;
  fm.insert(memory.begin(), memory.end());
  mh.insert(history.begin(), history.end());
  all = fm;
  all.insert(history.begin(), history.end());
  if (static_cast<int>(all.size()) != d.n_steps())
    throw LabelError("classical_cmi: partition does not cover the timesteps");
  return shannon_entropy(marginalize(d, fm)) +
         shannon_entropy(marginalize(d, mh)) - shannon_entropy(d) -
         shannon_entropy(marginalize(d, memory));
}

/// Sum probabilities within lumps; lumping[j][x] gives the coarse value of
/// outcome x at timestep j+1.
inline JointDistribution coarse_grain(const JointDistribution& d,
                                      const std::vector<std::vector<int>>& lumping) {
  if (static_cast<int>(lumping.size()) != d.n_steps())
    throw DimensionError("coarse_grain: one lumping per timestep required");
  JointDistribution out;
  for (int j = 0; j < d.n_steps(); ++j) {
    if (static_cast<int>(lumping[j].size()) != d.alphabet_sizes[j])
      throw DimensionError("coarse_grain: lumping size mismatch");
    out.alphabet_sizes.push_back(*std::max_element(lumping[j].begin(),
                                                   lumping[j].end()) + 1);
  }
  out.probs.assign(out.size(), 0.0);
  d.for_each([&](const std::vector<int>& x, double p) {
    std::vector<int> y(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) y[j] = lumping[j][x[j]];
    out.at(y) += p;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Stochastic matrices and divisibility
// ---------------------------------------------------------------------------

inline StochasticMatrix compose_stochastic(const StochasticMatrix& a,
                                           const StochasticMatrix& b) {
  a.check();
  b.check();
  if (a.matrix.cols() != b.matrix.rows())
    throw DimensionError("compose_stochastic: dimension mismatch");
  return StochasticMatrix{a.matrix * b.matrix};
}

struct DivisibilityReport {
  bool divisible = false;
  bool all_stochastic = false;
  double max_violation = 0.0;
};

/// Check S_{k,i} = S_{k,j} S_{j,i} for every available triple of a family of
/// transition matrices indexed by (to, from).
inline DivisibilityReport verify_divisibility(
    const std::map<std::pair<int, int>, StochasticMatrix>& family,
    double tolerance = 1e-10) {
  DivisibilityReport rep;
  rep.all_stochastic = true;
  for (const auto& [key, s] : family) {
    try {
      s.check();
    } catch (const Error&) {
      rep.all_stochastic = false;
    }
  }
  for (const auto& [ki, ski] : family)
    for (const auto& [kj, skj] : family) {
      const auto& [k1, i1] = ki;
      const auto& [k2, j2] = kj;
      if (k1 != k2) continue;
      auto it = family.find({j2, i1});
      if (kj == ki || it == family.end() || j2 <= i1 || k1 <= j2) continue;
      const double dev =
          (ski.matrix - skj.matrix * it->second.matrix).cwiseAbs().maxCoeff();
      rep.max_violation = std::max(rep.max_violation, dev);
    }
  rep.divisible = rep.all_stochastic && rep.max_violation <= tolerance;
  return rep;
}

// ---------------------------------------------------------------------------
// Embedding into a diagonal process tensor
// ---------------------------------------------------------------------------

/// Diagonal process tensor whose statistics under the sharp classical tester
/// reproduce the distribution exactly: the process replays the conditional
/// distributions, evaluated at whatever values are fed back in.
inline ProcessTensor embed_as_process_tensor(const JointDistribution& d) {
  d.check();
  const int n = d.n_steps();
  if (n < 1) throw Error("embed_as_process_tensor: empty distribution");

  // Conditionals P(y_j | fed values) from the leading marginals.
  std::vector<JointDistribution> lead(n + 1);
  for (int j = 1; j <= n; ++j) {
    std::set<int> upto;
    for (int t = 1; t <= j; ++t) upto.insert(t);
    lead[j] = marginalize(d, upto);
  }

  std::vector<Wire> wl;
  wl.push_back(Wire{in_wire(n), d.alphabet_sizes[n - 1]});
  for (int t = n - 1; t >= 1; --t) {
    wl.push_back(Wire{out_wire(t), d.alphabet_sizes[t - 1]});
    wl.push_back(Wire{in_wire(t), d.alphabet_sizes[t - 1]});
  }
  WireList wires(wl);

  Cmat m = Cmat::Zero(wires.total_dim(), wires.total_dim());
  // Enumerate assignments (y_1, x_1, y_2, x_2, ..., y_n) in time order.
  std::vector<int> y(n, 0), x(n - 1 > 0 ? n - 1 : 0, 0);
  const long combos = [&] {
    long c = 1;
    for (int j = 0; j < n; ++j) c *= d.alphabet_sizes[j];
    for (int j = 0; j + 1 < n; ++j) c *= d.alphabet_sizes[j];
    return c;
  }();
  for (long it = 0; it < combos; ++it) {
    double weight = 1.0;
    for (int j = 1; j <= n; ++j) {
      std::vector<int> hist(x.begin(), x.begin() + (j - 1));
      std::vector<int> hist_and_y = hist;
      hist_and_y.push_back(y[j - 1]);
      const double denom = j == 1 ? 1.0 : lead[j - 1].at(hist);
      if (denom <= 1e-12) {
        weight *= 1.0 / double(d.alphabet_sizes[j - 1]);  // undefined branch
      } else {
        weight *= lead[j].at(hist_and_y) / denom;
      }
    }
    if (weight > 0.0) {
      long idx = y[n - 1];
      for (int t = n - 1; t >= 1; --t) {
        idx = idx * d.alphabet_sizes[t - 1] + x[t - 1];
        idx = idx * d.alphabet_sizes[t - 1] + y[t - 1];
      }
      m(idx, idx) += weight;
    }
    // Advance the odometer over (y_n, ..., x_1, y_1).
    bool carried = false;
    for (int j = n - 1; j >= 0 && !carried; --j) {
      if (++y[j] < d.alphabet_sizes[j]) {
        carried = true;
      } else {
        y[j] = 0;
      }
    }
    if (!carried) {
      for (int j = n - 2; j >= 0 && !carried; --j) {
        if (++x[j] < d.alphabet_sizes[j]) {
          carried = true;
        } else {
          x[j] = 0;
        }
      }
    }
  }
  ProcessTensor p{std::move(m), std::move(wires), n, std::nullopt};
  p.check();
  return p;
}

/// Joint statistics of the sharp classical tester on a (diagonal) process.
inline JointDistribution classical_tester_statistics(const ProcessTensor& p) {
  const auto ts = p.timesteps();
  JointDistribution out;
  std::vector<int> dims;
  for (auto it = ts.rbegin(); it != ts.rend(); ++it)
    dims.push_back(p.wires.dim_of(in_wire(*it)));
  out.alphabet_sizes = dims;
  out.probs.assign(out.size(), 0.0);
  out.for_each([&](const std::vector<int>& x, double) {
    std::vector<ChoiOperator> els;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const int t = static_cast<int>(j) + 1;
      const int d = p.wires.dim_of(in_wire(t));
      if (p.wires.contains(out_wire(t))) {
        ChoiOperator el{kron(basis_proj(d, x[j]), basis_proj(d, x[j])),
                        WireList::single(out_wire(t), d),
                        WireList::single(in_wire(t), d)};
        els.push_back(std::move(el));
      } else {
        els.push_back(effect_choi(basis_proj(d, x[j]), in_wire(t)));
      }
    }
    // The final timestep has no output wire: measure only.
    out.at(x) = born_probability_elements(p, els);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Reference distributions
// ---------------------------------------------------------------------------

/// Perturbed coin: retain the orientation with probability p at each shake.
inline JointDistribution perturbed_coin_distribution(double p, int n) {
  if (p < 0 || p > 1) throw Error("perturbed_coin: p must be in [0,1]");
  if (n < 1) throw Error("perturbed_coin: n must be >= 1");
  JointDistribution d;
  d.alphabet_sizes.assign(n, 2);
  d.probs.assign(d.size(), 0.0);
  JointDistribution scratch = d;
  scratch.for_each([&](const std::vector<int>& x, double) {
    double w = 0.5;
    for (int j = 1; j < n; ++j) w *= (x[j] == x[j - 1]) ? p : 1.0 - p;
    d.at(x) = w;
  });
  return d;
}

/// Three-state chain a -> b -> c -> {a with p, b with 1-p}, started in the
/// stationary distribution. Lumping b and c together makes the observed
/// statistics non-Markovian.
inline JointDistribution three_state_chain_distribution(double p, int n) {
  if (p <= 0 || p >= 1) throw Error("three_state_chain: p must be in (0,1)");
  if (n < 1) throw Error("three_state_chain: n must be >= 1");
  // States 0 = a, 1 = b, 2 = c. Stationary distribution (p, 1, 1)/(2+p).
  Eigen::Matrix3d t = Eigen::Matrix3d::Zero();
  t(1, 0) = 1.0;
  t(2, 1) = 1.0;
  t(0, 2) = p;
  t(1, 2) = 1.0 - p;
  Eigen::Vector3d pi(p / (2.0 + p), 1.0 / (2.0 + p), 1.0 / (2.0 + p));
  JointDistribution d;
  d.alphabet_sizes.assign(n, 3);
  d.probs.assign(d.size(), 0.0);
  JointDistribution scratch = d;
  scratch.for_each([&](const std::vector<int>& x, double) {
    double w = pi(x[0]);
    for (int j = 1; j < n; ++j) w *= t(x[j], x[j - 1]);
    d.at(x) = w;
  });
  return d;
}

inline std::vector<std::vector<int>> three_state_lumping(int n) {
  return std::vector<std::vector<int>>(n, {0, 1, 1});
}

/// Three bits with P(000) = P(101) = P(011) = P(110) = 1/4: sharply measured
/// the middle bit decides correlation or anticorrelation, on average none.
inline JointDistribution parity_bits_distribution() {
  JointDistribution d;
  d.alphabet_sizes = {2, 2, 2};
  d.probs.assign(8, 0.0);
  d.at({0, 0, 0}) = 0.25;
  d.at({1, 0, 1}) = 0.25;
  d.at({1, 1, 0}) = 0.25;
  d.at({0, 1, 1}) = 0.25;
  return d;
}

inline JointDistribution three_coins_distribution() {
  JointDistribution d;
  d.alphabet_sizes = {2, 2, 2};
  d.probs.assign(8, 0.125);
  return d;
}

}  // namespace qpt
