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

// Batch front end: build process tensors, validate them, sweep the
// two-qubit parameter grid, and evaluate memory diagnostics.
//
// Exit codes: 0 success, 1 domain failure (validation), 2 usage/parse error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qpt/qpt.hpp"

namespace {

using qpt::Json;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Model specs
// ---------------------------------------------------------------------------

qpt::ProcessTensor build_model(const Json& spec, Json& meta) {
  const std::string model = spec.at("model").get<std::string>();
  meta["model"] = model;
  meta["version"] = QPT_VERSION;

  if (model == "two-qubit") {
    qpt::TwoQubitModel m;
    m.xi = spec.at("xi").get<double>();
    m.kappa = spec.at("kappa").get<double>();
    m.dt = spec.value("dt", 0.3);
    m.n = spec.value("n", 6);
    const auto& conv = qpt::two_qubit_convention();
    meta["xi"] = m.xi;
    meta["kappa"] = m.kappa;
    meta["dt"] = m.dt;
    meta["n"] = m.n;
    meta["env_init"] = conv.env_name;
    meta["sigma_convention"] = conv.halved_sigma ? "halved" : "verbatim";
    return qpt::two_qubit_process_tensor(m);
  }
  if (model == "collision") {
    const int ell = spec.at("ell").get<int>();
    const int n = spec.at("n").get<int>();
    const std::uint64_t seed = spec.value("seed", 0);
    const int flip = spec.value("flip_round", 0);
    meta["ell"] = ell;
    meta["n"] = n;
    meta["seed"] = seed;
    if (flip) meta["flip_round"] = flip;
    return qpt::collision_process_tensor(ell, n, seed, flip);
  }
  if (model == "swap-chain") {
    const int n = spec.at("n").get<int>();
    meta["n"] = n;
    return qpt::swap_chain_process(n);
  }
  if (model == "pauli-control") {
    std::array<qpt::Complex, 4> amps;
    const auto& a = spec.at("amplitudes");
    if (a.size() != 4) throw UsageError("pauli-control needs 4 amplitudes");
    for (int i = 0; i < 4; ++i)
      amps[i] = qpt::Complex(a[i][0].get<double>(), a[i][1].get<double>());
    const int n = spec.value("n", 4);
    const bool keep = spec.value("keep_ancilla", true);
    meta["n"] = n;
    meta["keep_ancilla"] = keep;
    return qpt::pauli_control_process(amps, n, keep);
  }
  if (model == "werner") {
    const double q = spec.at("q").get<double>();
    const double r = spec.at("r").get<double>();
    meta["q"] = q;
    meta["r"] = r;
    return qpt::werner_process(q, r);
  }
  if (model == "tetrahedral") {
    return qpt::tetrahedral_tripartite_process();
  }
  if (model == "stern-gerlach") {
    qpt::Cvec plus(2);
    plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    const qpt::Cmat rho = plus * plus.adjoint();
    std::vector<qpt::SEStep> steps(2, qpt::se_unitary(qpt::identity(2)));
    return qpt::build_from_dilation(rho, 2, 1, steps, false);
  }
  if (model == "classical-embed") {
    qpt::JointDistribution d =
        qpt::distribution_from_json(spec.at("distribution"));
    return qpt::embed_as_process_tensor(d);
  }
  throw UsageError("unknown model \"" + model + "\"");
}

// ---------------------------------------------------------------------------
// Block specs: "t_lo:t_hi" for full timestep pairs, or explicit JSON wires
// ---------------------------------------------------------------------------

qpt::MemoryBlockSpec parse_block(const qpt::ProcessTensor& p,
                                 const std::string& block,
                                 const std::string& block_json) {
  if (!block_json.empty()) {
    const Json j = Json::parse(block_json);
    std::vector<qpt::SpaceLabel> memory;
    for (const auto& e : j.at("memory")) {
      const std::string dir = e.at("dir").get<std::string>();
      memory.push_back({e.at("t").get<int>(),
                        dir == "i" ? qpt::Dir::In : qpt::Dir::Out,
                        e.value("tag", std::string{})});
    }
    return qpt::MemoryBlockSpec::around(p, memory);
  }
  const auto colon = block.find(':');
  if (colon == std::string::npos)
    throw UsageError("--block expects \"t_lo:t_hi\" (e.g. 4:5)");
  const int lo = std::stoi(block.substr(0, colon));
  const int hi = std::stoi(block.substr(colon + 1));
  return qpt::MemoryBlockSpec::full_steps(p, lo, hi);
}

qpt::Instrument build_block_instrument(const qpt::ProcessTensor& p,
                                       const qpt::MemoryBlockSpec& block,
                                       const std::string& kind) {
  if (kind == "causal-break") {
    std::optional<qpt::Instrument> inst;
    const auto ts = p.wires.restricted_to(block.memory).timesteps();
    for (int t : ts) {
      if (p.wires.dim_of(qpt::in_wire(t)) != 2)
        throw UsageError("causal-break instrument requires qubit wires");
      qpt::Instrument step =
          qpt::standard_causal_break(qpt::out_wire(t), qpt::in_wire(t));
      inst = inst ? qpt::instrument_product(*inst, step) : step;
    }
    return *inst;
  }
  // Anything else is a file path.
  return qpt::instrument_from_json(qpt::load_json(kind));
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_validate(const std::string& file) {
  qpt::ProcessTensor p = qpt::process_from_json(qpt::load_json(file));
  qpt::ProcessReport rep = qpt::validate_process(p);
  std::printf("wires: %s\n", p.wires.str().c_str());
  std::printf("positivity margin (min eigenvalue / trace): %.3e\n",
              rep.min_eigenvalue);
  std::printf("trace deviation: %.3e\n", rep.trace_deviation);
  for (const auto& [label, dev] : rep.hierarchy)
    std::printf("hierarchy deviation at %s: %.3e\n", label.str().c_str(), dev);
  if (!rep.positive()) {
    std::printf("FAIL: positivity\n");
    return kExitDomain;
  }
  if (!rep.causal()) {
    std::printf("FAIL: trace hierarchy\n");
    return kExitDomain;
  }
  std::printf("PASS\n");
  return kExitOk;
}

int cmd_model(const std::string& spec_text, const std::string& spec_file,
              const std::string& out) {
  Json spec;
  if (!spec_file.empty())
    spec = qpt::load_json(spec_file);
  else
    spec = Json::parse(spec_text);
  Json meta = Json::object();
  qpt::ProcessTensor p = build_model(spec, meta);
  qpt::save_json(out, qpt::process_to_json(p, meta));
  std::printf("wrote %s (%d timesteps, dim %ld)\n", out.c_str(), p.n_steps,
              p.dim());
  return kExitOk;
}

qpt::Range parse_range(const std::string& text) {
  qpt::Range r;
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw UsageError("range expects lo:hi:steps");
  r.lo = std::stod(text.substr(0, c1));
  r.hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  r.steps = std::stoi(text.substr(c2 + 1));
  return r;
}

int cmd_sweep(const std::string& xi, const std::string& kappa,
              const std::string& metric, double dt, int n, bool fine,
              const std::string& out) {
  qpt::SweepMetric m;
  if (metric == "non-markovianity")
    m = qpt::SweepMetric::NonMarkovianity;
  else if (metric == "two-time")
    m = qpt::SweepMetric::TwoTime;
  else if (metric == "cp-divisible")
    m = qpt::SweepMetric::CpDivisible;
  else
    throw UsageError("unknown metric \"" + metric + "\"");

  qpt::Range rx = xi.empty() ? qpt::Range{0.0, 5.0, 11} : parse_range(xi);
  qpt::Range rk = kappa.empty() ? qpt::Range{0.0, 10.0, 21} : parse_range(kappa);
  if (fine) {
    rx.steps = static_cast<int>(std::lround((rx.hi - rx.lo) / 0.1)) + 1;
    rk.steps = static_cast<int>(std::lround((rk.hi - rk.lo) / 0.1)) + 1;
  }
  qpt::SweepResult res = qpt::run_sweep(m, rx, rk, dt, n);
  const std::string csv = qpt::sweep_to_csv(res);
  if (out.empty() || out == "-") {
    std::fputs(csv.c_str(), stdout);
  } else {
    std::ofstream f(out);
    if (!f) throw qpt::Error("cannot write " + out);
    f << csv;
    std::printf("wrote %s (%zu rows)\n", out.c_str(), res.rows.size());
  }
  return kExitOk;
}

int cmd_memory(const std::string& file, const std::string& block,
               const std::string& block_json, const std::string& instrument,
               const std::string& mode, bool as_json) {
  qpt::ProcessTensor p = qpt::process_from_json(qpt::load_json(file));
  qpt::MemoryBlockSpec spec = parse_block(p, block, block_json);
  Json out;
  if (instrument == "identity" || instrument == "noise") {
    const double s = qpt::special_memory_strength(
        p, spec,
        instrument == "identity" ? qpt::SpecialStrength::Natural
                                 : qpt::SpecialStrength::NoiseResistant);
    out = Json{{"instrument", instrument}, {"strength_bits", s}};
  } else {
    qpt::Instrument inst = build_block_instrument(p, spec, instrument);
    if (mode == "per-outcome") {
      auto values = qpt::memory_strength_per_outcome(p, inst, spec);
      Json per = Json::array();
      for (std::size_t i = 0; i < values.size(); ++i)
        per.push_back({{"outcome", inst.label(i)}, {"strength_bits", values[i]}});
      out = Json{{"instrument", instrument}, {"per_outcome", per}};
    } else if (mode == "avg" || mode == "max") {
      const double s = qpt::memory_strength(p, inst, spec,
                                            mode == "avg"
                                                ? qpt::StrengthMode::Average
                                                : qpt::StrengthMode::Maximum);
      out = Json{{"instrument", instrument}, {"mode", mode},
                 {"strength_bits", s}};
    } else {
      throw UsageError("unknown mode \"" + mode + "\"");
    }
  }
  if (as_json)
    std::printf("%s\n", out.dump().c_str());
  else if (out.contains("per_outcome"))
    for (const auto& e : out["per_outcome"])
      std::printf("%s: %.9f bits\n", e["outcome"].get<std::string>().c_str(),
                  e["strength_bits"].get<double>());
  else
    std::printf("%.9f bits\n", out["strength_bits"].get<double>());
  return kExitOk;
}

int cmd_cmi(const std::string& file, const std::string& block,
            const std::string& block_json, bool as_json) {
  qpt::ProcessTensor p = qpt::process_from_json(qpt::load_json(file));
  qpt::MemoryBlockSpec spec = parse_block(p, block, block_json);
  const double cmi = qpt::quantum_cmi(p, spec);
  if (as_json)
    std::printf("%s\n", Json{{"cmi_bits", cmi}}.dump().c_str());
  else
    std::printf("%.9f bits\n", cmi);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"process tensors, memory diagnostics and parameter sweeps"};
  app.require_subcommand(1);

  std::string file, out = "-", spec_text, spec_file;
  std::string xi_range, kappa_range, metric = "non-markovianity";
  std::string block, block_json, instrument = "identity", mode = "max";
  double dt = 0.3;
  int n = 6;
  bool fine = false, as_json = false;

  auto* validate = app.add_subcommand("validate", "validate a process-tensor file");
  validate->add_option("file", file)->required();

  auto* model = app.add_subcommand("model", "build a model process tensor");
  model->add_option("--spec", spec_text, "inline JSON model spec");
  model->add_option("--spec-file", spec_file, "JSON model spec file");
  model->add_option("--out", out, "output file")->required();

  auto* sweep = app.add_subcommand("sweep", "sweep the (xi, kappa) grid");
  sweep->add_option("--xi", xi_range, "xi range lo:hi:steps (default 0:5:11)");
  sweep->add_option("--kappa", kappa_range,
                    "kappa range lo:hi:steps (default 0:10:21)");
  sweep->add_option("--metric", metric,
                    "non-markovianity | two-time | cp-divisible");
  sweep->add_option("--dt", dt, "step spacing");
  sweep->add_option("--n", n, "timesteps of the built tensors");
  sweep->add_flag("--fine", fine, "0.1 grid spacing (slow)");
  sweep->add_option("--out", out, "CSV output file, - for stdout");

  auto* memory = app.add_subcommand("memory", "instrument-specific memory strength");
  memory->add_option("--process", file)->required();
  memory->add_option("--block", block, "memory timesteps t_lo:t_hi");
  memory->add_option("--block-json", block_json, "explicit memory wires JSON");
  memory->add_option("--instrument", instrument,
                     "identity | noise | causal-break | <file.json>");
  memory->add_option("--mode", mode, "per-outcome | avg | max");
  memory->add_flag("--json", as_json, "machine-readable output");

  auto* cmi = app.add_subcommand("cmi", "quantum conditional mutual information");
  cmi->add_option("--process", file)->required();
  cmi->add_option("--partition", block, "memory timesteps t_lo:t_hi");
  cmi->add_option("--partition-json", block_json, "explicit memory wires JSON");
  cmi->add_flag("--json", as_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(file);
    if (model->parsed()) {
      if (spec_text.empty() && spec_file.empty())
        throw UsageError("model needs --spec or --spec-file");
      return cmd_model(spec_text, spec_file, out);
    }
    if (sweep->parsed())
      return cmd_sweep(xi_range, kappa_range, metric, dt, n, fine, out);
    if (memory->parsed())
      return cmd_memory(file, block, block_json, instrument, mode, as_json);
    if (cmi->parsed()) return cmd_cmi(file, block, block_json, as_json);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const Json::exception& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kExitUsage;
  } catch (const qpt::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDomain;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDomain;
  }
  return kExitUsage;
}
