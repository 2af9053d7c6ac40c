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

#include <fstream>
#include <string>

#include <json.hpp>

#include "qpt/classical.hpp"
#include "qpt/instrument.hpp"
#include "qpt/process.hpp"

namespace qpt {

using Json = nlohmann::json;

// Matrices are serialised row-major as [re, im] pairs; nlohmann emits the
// shortest decimal that parses back to the same double, so round trips are
// bit-exact.

inline Json matrix_to_json(const Cmat& m) {
  Json data = Json::array();
  for (long r = 0; r < m.rows(); ++r)
    for (long c = 0; c < m.cols(); ++c)
      data.push_back({m(r, c).real(), m(r, c).imag()});
  return Json{{"dim", m.rows()}, {"data", std::move(data)}};
}

inline Cmat matrix_from_json(const Json& j) {
  const long dim = j.at("dim").get<long>();
  const auto& data = j.at("data");
  if (static_cast<long>(data.size()) != dim * dim)
    throw DimensionError("matrix_from_json: data length != dim^2");
  Cmat m(dim, dim);
  long k = 0;
  for (long r = 0; r < dim; ++r)
    for (long c = 0; c < dim; ++c, ++k)
      m(r, c) = Complex(data[k][0].get<double>(), data[k][1].get<double>());
  return m;
}

inline Json wires_to_json(const WireList& w) {
  Json out = Json::array();
  for (const auto& wire : w)
    out.push_back({{"t", wire.label.t},
                   {"dir", to_string(wire.label.dir)},
                   {"tag", wire.label.tag},
                   {"dim", wire.dim}});
  return out;
}

inline WireList wires_from_json(const Json& j) {
  std::vector<Wire> wires;
  for (const auto& e : j) {
    const std::string dir = e.at("dir").get<std::string>();
    if (dir != "i" && dir != "o")
      throw LabelError("wires_from_json: dir must be \"i\" or \"o\"");
    wires.push_back(Wire{{e.at("t").get<int>(),
                          dir == "i" ? Dir::In : Dir::Out,
                          e.value("tag", std::string{})},
                         e.at("dim").get<int>()});
  }
  return WireList(std::move(wires));
}

inline Json process_to_json(const ProcessTensor& p, Json meta = Json::object()) {
  Json j{{"wires", wires_to_json(p.wires)}, {"matrix", matrix_to_json(p.matrix)}};
  if (!meta.empty()) j["meta"] = std::move(meta);
  return j;
}

inline ProcessTensor process_from_json(const Json& j) {
  ProcessTensor p;
  p.wires = wires_from_json(j.at("wires"));
  p.matrix = matrix_from_json(j.at("matrix"));
  p.n_steps = static_cast<int>(p.wires.timesteps().size());
  p.check();
  return p;
}

inline Json instrument_to_json(const Instrument& inst) {
  Json els = Json::array();
  for (const auto& [label, el] : inst.elements)
    els.push_back({{"label", label},
                   {"out_wires", wires_to_json(el.out_wires)},
                   {"in_wires", wires_to_json(el.in_wires)},
                   {"matrix", matrix_to_json(el.matrix)}});
  return Json{{"kind", to_string(inst.kind)}, {"elements", std::move(els)}};
}

inline Instrument instrument_from_json(const Json& j) {
  Instrument inst;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "povm")
    inst.kind = Instrument::Kind::Povm;
  else if (kind == "instrument")
    inst.kind = Instrument::Kind::Instrument;
  else if (kind == "tester")
    inst.kind = Instrument::Kind::Tester;
  else
    throw LabelError("instrument_from_json: unknown kind " + kind);
  for (const auto& e : j.at("elements")) {
    ChoiOperator el{matrix_from_json(e.at("matrix")),
                    wires_from_json(e.at("out_wires")),
                    wires_from_json(e.at("in_wires"))};
    el.check();
    inst.elements.emplace_back(e.value("label", std::string{}), std::move(el));
  }
  if (inst.elements.empty())
    throw LabelError("instrument_from_json: no elements");
  return inst;
}

inline Json distribution_to_json(const JointDistribution& d) {
  return Json{{"alphabets", d.alphabet_sizes}, {"probs", d.probs}};
}

inline JointDistribution distribution_from_json(const Json& j) {
  JointDistribution d;
  d.alphabet_sizes = j.at("alphabets").get<std::vector<int>>();
  d.probs = j.at("probs").get<std::vector<double>>();
  d.check();
  return d;
}

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return Json::parse(in);
}

inline void save_json(const std::string& path, const Json& j, int indent = -1) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(indent) << "\n";
}

}  // namespace qpt
