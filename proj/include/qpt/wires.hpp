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
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "qpt/types.hpp"

namespace qpt {

enum class Dir : std::uint8_t { Out = 0, In = 1 };

inline const char* to_string(Dir d) { return d == Dir::Out ? "o" : "i"; }

/// Label of one tensor factor: timestep, input/output side, and an optional
/// subsystem tag ("S", "E", "A", ...). Triples must be unique in a WireList.
struct SpaceLabel {
  int t = 0;
  Dir dir = Dir::In;
  std::string tag;

  bool operator==(const SpaceLabel& o) const {
    return t == o.t && dir == o.dir && tag == o.tag;
  }
  bool operator!=(const SpaceLabel& o) const { return !(*this == o); }

  std::string str() const {
    std::ostringstream os;
    os << t << "^" << to_string(dir);
    if (!tag.empty()) os << "[" << tag << "]";
    return os.str();
  }
};

inline SpaceLabel in_wire(int t, std::string tag = "") {
  return {t, Dir::In, std::move(tag)};
}
inline SpaceLabel out_wire(int t, std::string tag = "") {
  return {t, Dir::Out, std::move(tag)};
}

struct Wire {
  SpaceLabel label;
  int dim = 0;
};

/// Ordered list of labelled tensor factors. The global convention is the
/// latest timestep leftmost and, within one timestep, output before input.
/// The product of dims equals the dimension of the annotated matrix.
class WireList {
 public:
  WireList() = default;
  explicit WireList(std::vector<Wire> wires) : wires_(std::move(wires)) {
    check_unique();
  }

  static WireList single(SpaceLabel l, int dim) {
    return WireList({Wire{std::move(l), dim}});
  }

  std::size_t size() const { return wires_.size(); }
  bool empty() const { return wires_.empty(); }
  const Wire& operator[](std::size_t i) const { return wires_[i]; }
  const std::vector<Wire>& wires() const { return wires_; }

  auto begin() const { return wires_.begin(); }
  auto end() const { return wires_.end(); }

  long total_dim() const {
    long d = 1;
    for (const auto& w : wires_) d *= w.dim;
    return d;
  }

  bool contains(const SpaceLabel& l) const { return find(l) >= 0; }

  /// Index of a label, -1 when absent.
  int find(const SpaceLabel& l) const {
    for (std::size_t i = 0; i < wires_.size(); ++i)
      if (wires_[i].label == l) return static_cast<int>(i);
    return -1;
  }

  int index_of(const SpaceLabel& l) const {
    int i = find(l);
    if (i < 0) throw LabelError("unknown wire label " + l.str());
    return i;
  }

  int dim_of(const SpaceLabel& l) const { return wires_[index_of(l)].dim; }

  WireList subset(const std::vector<SpaceLabel>& labels) const {
    std::vector<Wire> out;
    out.reserve(labels.size());
    for (const auto& l : labels) out.push_back(wires_[index_of(l)]);
    return WireList(std::move(out));
  }

  /// Sub-list with original ordering preserved.
  WireList restricted_to(const std::vector<SpaceLabel>& labels) const {
    std::vector<Wire> out;
    for (const auto& w : wires_)
      if (std::find(labels.begin(), labels.end(), w.label) != labels.end())
        out.push_back(w);
    if (out.size() != labels.size())
      throw LabelError("restricted_to: some labels not present");
    return WireList(std::move(out));
  }

  WireList without(const std::vector<SpaceLabel>& labels) const {
    std::vector<Wire> out;
    for (const auto& w : wires_)
      if (std::find(labels.begin(), labels.end(), w.label) == labels.end())
        out.push_back(w);
    return WireList(std::move(out));
  }

  std::vector<SpaceLabel> labels() const {
    std::vector<SpaceLabel> out;
    out.reserve(wires_.size());
    for (const auto& w : wires_) out.push_back(w.label);
    return out;
  }

  WireList concat(const WireList& o) const {
    std::vector<Wire> out = wires_;
    out.insert(out.end(), o.wires_.begin(), o.wires_.end());
    return WireList(std::move(out));
  }

  /// All timesteps appearing in the list, descending.
  std::vector<int> timesteps() const {
    std::vector<int> ts;
    for (const auto& w : wires_)
      if (std::find(ts.begin(), ts.end(), w.label.t) == ts.end())
        ts.push_back(w.label.t);
    std::sort(ts.rbegin(), ts.rend());
    return ts;
  }

  std::vector<SpaceLabel> labels_of_timestep(int t) const {
    std::vector<SpaceLabel> out;
    for (const auto& w : wires_)
      if (w.label.t == t) out.push_back(w.label);
    return out;
  }

  /// True when ordered latest-timestep-leftmost with outputs before inputs
  /// inside each timestep.
  bool canonical_order() const {
    for (std::size_t i = 1; i < wires_.size(); ++i) {
      const auto& a = wires_[i - 1].label;
      const auto& b = wires_[i].label;
      if (a.t < b.t) return false;
      if (a.t == b.t && a.dir == Dir::In && b.dir == Dir::Out) return false;
    }
    return true;
  }

  /// Permutation that sorts into canonical order (stable among equal keys).
  std::vector<int> canonical_permutation() const {
    std::vector<int> perm(wires_.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
      const auto& la = wires_[a].label;
      const auto& lb = wires_[b].label;
      if (la.t != lb.t) return la.t > lb.t;
      return la.dir == Dir::Out && lb.dir == Dir::In;
    });
    return perm;
  }

  std::string str() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < wires_.size(); ++i) {
      if (i) os << ", ";
      os << wires_[i].label.str() << ":" << wires_[i].dim;
    }
    os << ")";
    return os.str();
  }

 private:
  void check_unique() const {
    for (std::size_t i = 0; i < wires_.size(); ++i) {
      if (wires_[i].dim <= 0)
        throw DimensionError("wire " + wires_[i].label.str() +
                             " has non-positive dimension");
      for (std::size_t j = i + 1; j < wires_.size(); ++j)
        if (wires_[i].label == wires_[j].label)
          throw LabelError("duplicate wire label " + wires_[i].label.str());
    }
  }

  std::vector<Wire> wires_;
};

}  // namespace qpt
