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

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qpt/memory.hpp"
#include "qpt/process.hpp"
#include "qpt/random.hpp"

namespace qpt {

// ---------------------------------------------------------------------------
// GKSL generator
// ---------------------------------------------------------------------------

struct GkslSpec {
  Cmat hamiltonian;
  std::vector<std::pair<double, Cmat>> jump_ops;  // (rate, operator)

  void check() const {
    if (!is_hermitian(hamiltonian))
      throw Error("GkslSpec: Hamiltonian not Hermitian");
    for (const auto& [g, l] : jump_ops) {
      if (g < 0) throw Error("GkslSpec: negative rate");
      if (l.rows() != hamiltonian.rows() || l.cols() != hamiltonian.cols())
        throw DimensionError("GkslSpec: jump operator dimension mismatch");
    }
  }
};

/// Generator matrix of drho/dt = -i[H,rho] + sum_i g_i (L rho L^dag -
/// {L^dag L, rho}/2) on row-major vectorised operators.
inline Cmat liouvillian(const GkslSpec& spec) {
  spec.check();
  const long d = spec.hamiltonian.rows();
  const Cmat id = identity(d);
  const Complex i1(0, 1);
  Cmat l = -i1 * (kron(spec.hamiltonian, id) -
                  kron(id, spec.hamiltonian.transpose()));
  for (const auto& [g, op] : spec.jump_ops) {
    const Cmat op2 = op.adjoint() * op;
    l += g * (kron(op, op.conjugate()) - 0.5 * kron(op2, id) -
              0.5 * kron(id, op2.transpose()));
  }
  return l;
}

// ---------------------------------------------------------------------------
// The exactly solvable two-qubit dephasing model
// ---------------------------------------------------------------------------

/// System qubit coupled to an environment qubit by an X-X interaction of
/// strength xi; the environment is cooled at rate kappa by an external bath.
struct TwoQubitModel {
  double xi = 1.0;
  double kappa = 1.0;
  double dt = 0.3;
  int n = 6;
  std::optional<Cmat> env_init;  // overrides the oracle selection

  void check() const {
    if (xi < 0 || kappa < 0) throw Error("TwoQubitModel: rates must be >= 0");
    if (dt <= 0) throw Error("TwoQubitModel: dt must be positive");
    if (n < 2) throw Error("TwoQubitModel: n must be >= 2");
  }
};

/// Analytic decay coefficient of the reduced dephasing dynamics. Three
/// branches selected by the sign of kappa^2 - 64 xi^2, with a relative
/// window around the critical line.
inline double c_coefficient(double xi, double kappa, double t) {
  if (t < 0) throw Error("c_coefficient: t must be >= 0");
  const double disc = kappa * kappa - 64.0 * xi * xi;
  const double window = 1e-9 * std::max(kappa * kappa, 64.0 * xi * xi);
  const double damp = std::exp(-kappa * t / 4.0);
  if (std::abs(disc) <= window) return damp * (1.0 + kappa * t / 4.0);
  if (disc > 0) {
    const double w = std::sqrt(disc);
    return damp * (kappa * std::sinh(t * w / 4.0) / w + std::cosh(t * w / 4.0));
  }
  const double w = std::sqrt(-disc);
  return damp * (kappa * std::sin(t * w / 4.0) / w + std::cos(t * w / 4.0));
}

/// Analytic time derivative of c.
inline double c_coefficient_dot(double xi, double kappa, double t) {
  const double disc = kappa * kappa - 64.0 * xi * xi;
  const double window = 1e-9 * std::max(kappa * kappa, 64.0 * xi * xi);
  const double damp = std::exp(-kappa * t / 4.0);
  if (std::abs(disc) <= window) return -4.0 * xi * xi * t * damp;
  if (disc > 0) {
    const double w = std::sqrt(disc);
    return -16.0 * xi * xi / w * damp * std::sinh(t * w / 4.0);
  }
  const double w = std::sqrt(-disc);
  return -16.0 * xi * xi / w * damp * std::sin(t * w / 4.0);
}

/// Instantaneous dephasing rate -cdot/(2c); empty when c vanishes there.
inline std::optional<double> dephasing_rate(double xi, double kappa, double t) {
  const double c = c_coefficient(xi, kappa, t);
  if (std::abs(c) < 1e-12) return std::nullopt;
  return -c_coefficient_dot(xi, kappa, t) / (2.0 * c);
}

inline bool cp_divisible(double xi, double kappa) {
  return kappa * kappa >= 64.0 * xi * xi;
}

/// Closed form of the trace-distance (two-time) non-Markovianity measure:
/// 1/(exp(kappa pi / sqrt(64 xi^2 - kappa^2)) - 1) below the critical line,
/// zero above it, +infinity at kappa = 0 with coupling on.
inline double two_time_non_markovianity(double xi, double kappa) {
  if (xi < 0 || kappa < 0) throw Error("two_time_non_markovianity: negative rate");
  if (cp_divisible(xi, kappa)) return 0.0;
  if (kappa == 0.0) return kInfinity;
  const double w = std::sqrt(64.0 * xi * xi - kappa * kappa);
  return 1.0 / std::expm1(kappa * M_PI / w);
}

struct BlpResult {
  double value = 0.0;
  bool resolution_warning = false;
};

/// Numerical BLP measure: integrate the increases of |c_t| for the antipodal
/// z-basis pair, whose trace distance under the dephasing is |c_t|.
inline BlpResult blp_numeric(double xi, double kappa, double t_max = -1.0,
                             long grid = 0) {
  BlpResult res;
  if (xi == 0.0) return res;
  if (kappa == 0.0) {  // undamped oscillation, the measure diverges
    res.value = kInfinity;
    return res;
  }
  const double disc = kappa * kappa - 64.0 * xi * xi;
  const double w = std::sqrt(std::abs(disc));
  if (t_max <= 0) {
    const double envelope = disc < 0 ? 1.0 + kappa / std::max(w, 1e-6) : 2.0;
    t_max = std::min(400.0, 4.0 / kappa * std::log(envelope / 1e-6));
  }
  if (grid <= 0) {
    const double period = disc < 0 ? 8.0 * M_PI / w : t_max;
    grid = std::max<long>(4000, std::lround(256.0 * t_max / period));
  }
  if (disc < 0 && grid / (t_max * w / (8.0 * M_PI)) < 20.0)
    res.resolution_warning = true;

  double prev = std::abs(c_coefficient(xi, kappa, 0.0));
  for (long k = 1; k <= grid; ++k) {
    const double t = t_max * double(k) / double(grid);
    const double cur = std::abs(c_coefficient(xi, kappa, t));
    if (cur > prev) res.value += cur - prev;
    prev = cur;
  }
  return res;
}

/// Resolved sigma_pm convention and initial environment state for the
/// two-qubit model, fixed empirically against the analytic c_t.
struct TwoQubitConvention {
  bool halved_sigma = false;  // true: sigma_pm = (sigma_x +- i sigma_y) / 2
  Cmat env;
  std::string env_name;
  double oracle_deviation = 0.0;
};

namespace detail {

inline Cmat two_qubit_generator(double xi, double kappa, bool halved) {
  const double f = halved ? 0.5 : 1.0;
  const Cmat sm = f * (pauli_x() - Complex(0, 1) * pauli_y());
  GkslSpec spec;
  spec.hamiltonian = xi * kron(pauli_x(), pauli_x());
  spec.jump_ops = {{kappa, kron(identity(2), sm)}};
  return liouvillian(spec);
}

/// Choi operator of the analytic dephasing map with coefficient c.
inline Cmat dephasing_choi(double c) {
  const Cmat x = pauli_x();
  Cmat choi = Cmat::Zero(4, 4);
  for (long i = 0; i < 2; ++i)
    for (long j = 0; j < 2; ++j) {
      Cmat unit = Cmat::Zero(2, 2);
      unit(i, j) = 1.0;
      const Cmat block = 0.5 * (1 + c) * unit + 0.5 * (1 - c) * x * unit * x;
      for (long a = 0; a < 2; ++a)
        for (long b = 0; b < 2; ++b) choi(a * 2 + i, b * 2 + j) = block(a, b);
    }
  return choi;
}

inline double reduced_dynamics_deviation(double xi, double kappa, bool halved,
                                         const Cmat& env) {
  const Cmat gen = two_qubit_generator(xi, kappa, halved);
  WireList w({Wire{{0, Dir::In, "S"}, 2}, Wire{{0, Dir::In, "E"}, 2}});
  double worst = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const double t = 0.1 * k;
    const Cmat prop = matrix_exp(gen * t);
    ChoiOperator numeric = choi_from_superoperator(
        [&](const Cmat& rho) {
          Cmat joint = apply_superop(prop, kron(rho, env));
          return partial_trace(joint, w, {{0, Dir::In, "S"}}).first;
        },
        2, out_wire(0), in_wire(0));
    const Cmat analytic = dephasing_choi(c_coefficient(xi, kappa, t));
    worst = std::max(worst, (numeric.matrix - analytic).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace detail

/// Pick the sigma_pm convention and environment state whose joint propagation
/// reproduces the analytic c_t on a 20-point grid in both dynamical regimes.
inline const TwoQubitConvention& two_qubit_convention() {
  static const TwoQubitConvention cached = [] {
    const std::array<std::pair<Cmat, const char*>, 3> envs = {
        std::make_pair(basis_proj(2, 0), "|0><0|"),
        std::make_pair(basis_proj(2, 1), "|1><1|"),
        std::make_pair(0.5 * identity(2), "1/2")};
    for (bool halved : {false, true}) {
      for (const auto& [env, name] : envs) {
        double dev = 0.0;
        for (auto [xi, kappa] : {std::pair{1.0, 10.0}, std::pair{1.0, 1.0}})
          dev = std::max(dev,
                         detail::reduced_dynamics_deviation(xi, kappa, halved, env));
        if (dev <= 1e-6) return TwoQubitConvention{halved, env, name, dev};
      }
    }
    throw Error("two_qubit_convention: no sigma_pm convention and environment "
                "state reproduces the analytic dephasing coefficient");
  }();
  return cached;
}

/// Joint propagator of one step of the two-qubit model.
inline Cmat two_qubit_step(const TwoQubitModel& m) {
  const auto& conv = two_qubit_convention();
  return matrix_exp(detail::two_qubit_generator(m.xi, m.kappa, conv.halved_sigma) *
                    m.dt);
}

/// The n-step process tensor of the two-qubit model (system wires only,
/// starting on an output wire).
inline ProcessTensor two_qubit_process_tensor(const TwoQubitModel& m) {
  m.check();
  const Cmat env = m.env_init ? *m.env_init : two_qubit_convention().env;
  std::vector<SEStep> steps(m.n - 1, se_superop(two_qubit_step(m)));
  return build_from_dilation_fresh(env, 2, steps, false);
}

// ---------------------------------------------------------------------------
// Generalised collision model with repeated system-ancilla interactions
// ---------------------------------------------------------------------------

/// Repeated-interaction process: n collision rounds, each an ordered sequence
/// of pairwise collisions with the ancillas j .. j+ell-1 (freshest first);
/// n + ell - 1 ancillas in total. The resulting tensor has n + 1 timesteps
/// and begins on an output wire. Pass `flip_round` to reverse the collision
/// order within one round and so break the finite memory length.
inline ProcessTensor collision_process_tensor(int ell, int n_rounds,
                                              const std::vector<Cmat>& unitaries,
                                              const Cmat& ancilla_init,
                                              int flip_round = 0) {
  if (ell < 1 || n_rounds < 1)
    throw Error("collision_process_tensor: ell and n must be >= 1");
  const long da = ancilla_init.rows();
  const long ds = 2;
  const std::size_t needed = static_cast<std::size_t>(n_rounds) * ell;
  if (unitaries.size() != 1 && unitaries.size() != needed)
    throw DimensionError("collision_process_tensor: expected 1 or n*ell unitaries");
  for (const auto& u : unitaries)
    if (u.rows() != ds * da || u.cols() != ds * da)
      throw DimensionError("collision_process_tensor: collision unitary must act "
                           "on the system-ancilla pair");

  const SpaceLabel s{0, Dir::In, "#S"};
  const auto ancilla = [&](int x) { return SpaceLabel{0, Dir::In, "#A" + std::to_string(x)}; };

  Cmat state = max_entangled(ds);
  WireList wires({Wire{s, static_cast<int>(ds)}, Wire{out_wire(1), static_cast<int>(ds)}});
  std::vector<bool> attached(n_rounds + ell, false);

  std::size_t uidx = 0;
  for (int j = 1; j <= n_rounds; ++j) {
    std::vector<int> order;
    for (int x = j + ell - 1; x >= j; --x) order.push_back(x);
    if (j == flip_round) std::reverse(order.begin(), order.end());
    for (int x : order) {
      if (!attached[x]) {
        state = kron(state, ancilla_init);
        wires = wires.concat(WireList({Wire{ancilla(x), static_cast<int>(da)}}));
        attached[x] = true;
      }
      const Cmat& u = unitaries.size() == 1 ? unitaries.front() : unitaries[uidx];
      ++uidx;
      std::tie(state, wires) = apply_unitary_on(u, state, wires, {s, ancilla(x)});
    }
    std::tie(state, wires) = trace_out(state, wires, {ancilla(j)});
    if (j < n_rounds) {
      state = kron(state, max_entangled(ds));
      wires = wires.concat(
          WireList({Wire{in_wire(j + 1), static_cast<int>(ds)},
                    Wire{out_wire(j + 1), static_cast<int>(ds)}}));
      wires = detail::swap_labels(wires, s, in_wire(j + 1));
    }
  }
  // Retire the ancillas still in flight and emit the final system state.
  for (int x = n_rounds + 1; x <= n_rounds + ell - 1; ++x)
    if (attached[x]) std::tie(state, wires) = trace_out(state, wires, {ancilla(x)});
  wires = detail::relabel(wires, s, in_wire(n_rounds + 1));
  auto perm = wires.canonical_permutation();
  std::tie(state, wires) = permute_subsystems(state, wires, perm);
  ProcessTensor p{std::move(state), std::move(wires), n_rounds + 1, std::nullopt};
  p.check();
  return p;
}

inline ProcessTensor collision_process_tensor(int ell, int n_rounds,
                                              std::uint64_t seed,
                                              int flip_round = 0) {
  Rng rng(seed);
  std::vector<Cmat> us;
  for (int k = 0; k < ell * n_rounds; ++k) us.push_back(random_unitary(rng, 4));
  return collision_process_tensor(ell, n_rounds, us, 0.5 * identity(2),
                                  flip_round);
}

// ---------------------------------------------------------------------------
// Swap chain: perfect transmission through the environment
// ---------------------------------------------------------------------------

/// First and last interactions swap the system into and out of the
/// environment; whatever is fed in at the first timestep is emitted at the
/// last, untouched by any intermediate intervention.
inline ProcessTensor swap_chain_process(int n) {
  if (n < 2) throw Error("swap_chain_process: n must be >= 2");
  std::vector<SEStep> steps;
  for (int j = 1; j <= n - 1; ++j) {
    const bool is_swap = (j == 1) || (j == n - 1);
    steps.push_back(se_unitary(is_swap ? swap_gate(2) : identity(4)));
  }
  return build_from_dilation_fresh(0.5 * identity(2), 2, steps, false);
}

// ---------------------------------------------------------------------------
// Coherently controlled Pauli sequences
// ---------------------------------------------------------------------------

/// Process that applies one of the four Pauli maps at every step, controlled
/// coherently on a four-level ancilla prepared in the amplitude vector
/// (alpha, beta, gamma, delta). With keep_ancilla the ancilla is emitted with
/// the final output and the process tensor is pure; otherwise it is the
/// corresponding mixture of Pauli chains.
inline ProcessTensor pauli_control_process(const std::array<Complex, 4>& amps,
                                           int n, bool keep_ancilla) {
  if (n < 2) throw Error("pauli_control_process: n must be >= 2");
  double norm2 = 0.0;
  for (const auto& a : amps) norm2 += std::norm(a);
  if (std::abs(norm2 - 1.0) > 1e-12)
    throw NormalizationError("pauli_control_process: amplitudes not normalised");

  // Bell chain vectors, unnormalised (Psi+, Phi+, Phi-, Psi-).
  std::array<Cvec, 4> bell;
  bell[0] = Cvec(4); bell[0] << 1, 0, 0, 1;
  bell[1] = Cvec(4); bell[1] << 0, 1, 1, 0;
  bell[2] = Cvec(4); bell[2] << 0, 1, -1, 0;
  bell[3] = Cvec(4); bell[3] << 1, 0, 0, -1;

  const long chain_dim = 1L << (2 * (n - 1));
  Cvec v = Cvec::Zero(4 * chain_dim);
  for (int x = 0; x < 4; ++x) {
    Cvec chain = Cvec::Ones(1);
    for (int k = 0; k < n - 1; ++k) {
      Cvec next(chain.size() * 4);
      for (long i = 0; i < chain.size(); ++i)
        for (long b = 0; b < 4; ++b) next(i * 4 + b) = chain(i) * bell[x](b);
      chain = next;
    }
    v.segment(static_cast<long>(x) * chain_dim, chain_dim) += amps[x] * chain;
  }
  Cmat m = v * v.adjoint();

  std::vector<Wire> wl;
  wl.push_back(Wire{in_wire(n, "A"), 4});
  wl.push_back(Wire{in_wire(n), 2});
  for (int t = n - 1; t >= 2; --t) {
    wl.push_back(Wire{out_wire(t), 2});
    wl.push_back(Wire{in_wire(t), 2});
  }
  wl.push_back(Wire{out_wire(1), 2});
  WireList wires(wl);

  if (!keep_ancilla) {
    auto [traced, tw] = trace_out(m, wires, {in_wire(n, "A")});
    ProcessTensor p{std::move(traced), std::move(tw), n, std::nullopt};
    p.check();
    return p;
  }
  ProcessTensor p{std::move(m), std::move(wires), n, std::nullopt};
  p.check();
  return p;
}

// ---------------------------------------------------------------------------
// Finite-Markov-order example processes
// ---------------------------------------------------------------------------

/// Normalised Bell projectors psi+-, phi+-.
inline Cmat bell_state(int x) { return 0.5 * bell_operator(x); }

/// Three-step process over Werner-state correlations hidden behind a qutrit
/// memory: fuzzy orthogonal projectors block the history, sharp ones reveal
/// separable (but correlated) conditional states.
inline ProcessTensor werner_process(double q, double r) {
  if (!(q > 0.0 && q < 1.0)) throw Error("werner_process: q must be in (0,1)");
  if (!(r > 0.0)) throw Error("werner_process: r must be positive");

  // mu on (3i, 1i, 2i): sum_x rho_x(r) (x) dual_x / 4, qutrit-embedded.
  Cmat mu = Cmat::Zero(2 * 2 * 3, 2 * 2 * 3);
  WireList mu_wires({Wire{in_wire(3), 2}, Wire{in_wire(1), 2}, Wire{in_wire(2), 3}});
  for (int x = 0; x < 4; ++x) {
    const Cmat werner = r * bell_state(x) + (1.0 - r) * 0.25 * identity(4);
    Cmat dual3 = Cmat::Zero(3, 3);
    dual3.topLeftCorner(2, 2) = tetrahedral_dual(x);
    mu += 0.25 * kron(werner, dual3);
  }
  {
    Rvec lambda = hermitian_eigenvalues(mu);
    if (lambda(0) < -tol::pos)
      throw PositivityError("werner_process: r = " + std::to_string(r) +
                            " leaves a negative eigenvalue " +
                            std::to_string(lambda(0)) +
                            " (requires r <= 1/3)");
  }
  const Cmat sigma = basis_proj(2, 0);
  Cmat third = kron(kron(sigma, sigma), basis_proj(3, 2));
  Cmat rho = q * mu + (1.0 - q) * third;

  Cmat full = kron(rho, kron(identity(3), identity(2)));
  WireList wires = mu_wires.concat(
      WireList({Wire{out_wire(2), 3}, Wire{out_wire(1), 2}}));
  auto perm = wires.canonical_permutation();
  auto [m, w] = permute_subsystems(full, wires, perm);
  ProcessTensor p{std::move(m), std::move(w), 3, std::nullopt};
  p.check();
  return p;
}

/// The fuzzy orthogonal instrument {1 - |2><2|, |2><2|} on the qutrit memory
/// of the werner process (white noise fed back).
inline Instrument werner_fuzzy_instrument() {
  Instrument out;
  out.kind = Instrument::Kind::Instrument;
  const Cmat feed = identity(3) / 3.0;
  Cmat p01 = identity(3) - basis_proj(3, 2);
  ChoiOperator e1{kron(feed, p01), WireList::single(out_wire(2), 3),
                  WireList::single(in_wire(2), 3)};
  ChoiOperator e2{kron(feed, basis_proj(3, 2)), WireList::single(out_wire(2), 3),
                  WireList::single(in_wire(2), 3)};
  out.elements.emplace_back("01", std::move(e1));
  out.elements.emplace_back("2", std::move(e2));
  return out;
}

/// The sharp five-outcome instrument: tetrahedral POVM on the {0,1} subspace
/// plus the |2><2| projector. Stored Choi-side matrices carry the transpose
/// of the physical effects.
inline Instrument werner_sharp_instrument() {
  Instrument out;
  out.kind = Instrument::Kind::Instrument;
  const Cmat feed = identity(3) / 3.0;
  for (int b = 0; b < 4; ++b) {
    Cmat el3 = Cmat::Zero(3, 3);
    el3.topLeftCorner(2, 2) = tetrahedral_element(b).transpose();
    ChoiOperator el{kron(feed, el3), WireList::single(out_wire(2), 3),
                    WireList::single(in_wire(2), 3)};
    out.elements.emplace_back("b" + std::to_string(b), std::move(el));
  }
  ChoiOperator el{kron(feed, basis_proj(3, 2)), WireList::single(out_wire(2), 3),
                  WireList::single(in_wire(2), 3)};
  out.elements.emplace_back("2", std::move(el));
  return out;
}

/// Tripartite tetrahedral process: conditional on the tetrahedral POVM at
/// the middle timestep the outer states are product, yet the conditional
/// mutual information does not vanish.
inline ProcessTensor tetrahedral_tripartite_process() {
  Cmat rho = Cmat::Zero(8, 8);
  for (int b = 0; b < 4; ++b) {
    const Cmat outer = 0.375 * identity(2) + 0.5 * tetrahedral_element(b);
    rho += 0.25 * kron(kron(outer, tetrahedral_dual(b)), outer);
  }
  rho /= rho.trace().real();
  Cmat full = kron(rho, identity(4));
  WireList wires({Wire{in_wire(3), 2}, Wire{in_wire(2), 2}, Wire{in_wire(1), 2},
                  Wire{out_wire(2), 2}, Wire{out_wire(1), 2}});
  auto perm = wires.canonical_permutation();
  auto [m, w] = permute_subsystems(full, wires, perm);
  ProcessTensor p{std::move(m), std::move(w), 3, std::nullopt};
  p.check();
  return p;
}

/// The tetrahedral memory instrument of that process (white noise fed back).
/// The stored Choi-side matrices are transposes of the physical effects.
inline Instrument tetrahedral_memory_instrument() {
  Instrument out;
  out.kind = Instrument::Kind::Instrument;
  const Cmat feed = 0.5 * identity(2);
  for (int b = 0; b < 4; ++b) {
    ChoiOperator el{kron(feed, tetrahedral_element(b).transpose()),
                    WireList::single(out_wire(2), 2),
                    WireList::single(in_wire(2), 2)};
    out.elements.emplace_back("b" + std::to_string(b), std::move(el));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stern-Gerlach statistics
// ---------------------------------------------------------------------------

struct SternGerlachTable {
  bool measured_t2 = false;
  // Outcomes keyed "s3,s2,s1" with 0 = down/right, 1 = up/left; s2 = "-"
  // when no measurement is made at the second timestep.
  std::vector<std::pair<std::string, double>> probs;

  double at(const std::string& key) const {
    for (const auto& [k, v] : probs)
      if (k == key) return v;
    throw LabelError("SternGerlachTable: no outcome " + key);
  }
};

/// Three Z/X/Z measurements on a trivially evolving spin prepared in an even
/// superposition; dropping the middle measurement breaks the marginal rule.
inline SternGerlachTable stern_gerlach_statistics(bool measure_at_t2) {
  Cvec plus(2);
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  const Cmat rho = plus * plus.adjoint();
  std::vector<SEStep> steps(2, se_unitary(identity(2)));
  ProcessTensor p = build_from_dilation(rho, 2, 1, steps, false);

  const std::vector<Cvec> z = {basis_ket(2, 0), basis_ket(2, 1)};
  Cvec xp(2), xm(2);
  xp << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  xm << 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
  const std::vector<Cvec> x = {xp, xm};

  Instrument j1 = projective_instrument(z, out_wire(1), in_wire(1));
  Instrument j2 = projective_instrument(x, out_wire(2), in_wire(2));
  Instrument j3 = projective_povm(z, in_wire(3));

  SternGerlachTable table;
  table.measured_t2 = measure_at_t2;
  for (std::size_t s3 = 0; s3 < 2; ++s3)
    for (std::size_t s1 = 0; s1 < 2; ++s1) {
      if (measure_at_t2) {
        for (std::size_t s2 = 0; s2 < 2; ++s2) {
          auto [m, w] = contract(p, {j3.element(s3), j2.element(s2), j1.element(s1)});
          table.probs.emplace_back(std::to_string(s3) + "," + std::to_string(s2) +
                                       "," + std::to_string(s1),
                                   m(0, 0).real());
        }
      } else {
        Instrument id = identity_instrument(
            {{Wire{out_wire(2), 2}, Wire{in_wire(2), 2}}});
        auto [m, w] = contract(p, {j3.element(s3), id.element(0), j1.element(s1)});
        table.probs.emplace_back(std::to_string(s3) + ",-," + std::to_string(s1),
                                 m(0, 0).real());
      }
    }
  return table;
}

}  // namespace qpt
