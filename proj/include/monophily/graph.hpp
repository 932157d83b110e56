// Copyright 2026 The Monophily Authors.
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

// Labeled simple graphs and the preprocessing pipeline that feeds every
// estimator and classifier: drop unlabeled nodes, keep the largest
// (weakly) connected component, then read off per-class degree sequences.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "monophily/error.hpp"

namespace monophily {

using NodeId = std::uint32_t;
using ExternalId = std::int64_t;
using LabelCode = std::int32_t;

inline constexpr LabelCode kUnlabeled = -1;

// Maps label names to small dense codes. Codes are assigned in sorted
// name order (numeric order when every name is an integer) so the same
// label set always yields the same coding.
class LabelDictionary {
 public:
  LabelDictionary() = default;

  static LabelDictionary FromNames(std::vector<std::string> names) {
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    bool numeric = !names.empty();
    for (const auto& n : names) {
      if (!ParseInteger(n)) {
        numeric = false;
        break;
      }
    }
    if (numeric) {
      std::sort(names.begin(), names.end(),
                [](const std::string& a, const std::string& b) {
                  return *ParseInteger(a) < *ParseInteger(b);
                });
    }
    LabelDictionary dict;
    dict.names_ = std::move(names);
    return dict;
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  const std::string& name(LabelCode code) const {
    if (code < 0 || static_cast<std::size_t>(code) >= names_.size()) {
      throw ArgumentError("label code " + std::to_string(code) +
                          " out of range");
    }
    return names_[static_cast<std::size_t>(code)];
  }

  std::optional<LabelCode> find(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) return static_cast<LabelCode>(i);
    }
    return std::nullopt;
  }

  LabelCode code(const std::string& name) const {
    auto c = find(name);
    if (!c) throw ArgumentError("unknown class '" + name + "'");
    return *c;
  }

  bool operator==(const LabelDictionary&) const = default;

 private:
  static std::optional<long long> ParseInteger(const std::string& s) {
    if (s.empty()) return std::nullopt;
    std::size_t pos = 0;
    try {
      long long v = std::stoll(s, &pos);
      if (pos != s.size()) return std::nullopt;
      return v;
    } catch (...) {
      return std::nullopt;
    }
  }

  std::vector<std::string> names_;
};

enum class Orientation { kUndirected, kIn, kOut };

inline const char* to_string(Orientation o) {
  switch (o) {
    case Orientation::kUndirected:
      return "undirected";
    case Orientation::kIn:
      return "in";
    case Orientation::kOut:
      return "out";
  }
  return "?";
}

inline Orientation parse_orientation(const std::string& s) {
  if (s == "undirected") return Orientation::kUndirected;
  if (s == "in") return Orientation::kIn;
  if (s == "out") return Orientation::kOut;
  throw ArgumentError("unknown orientation '" + s +
                      "' (expected undirected, in or out)");
}

// Immutable simple graph on dense node ids 0..N-1 with one optional
// label per node. Adjacency is stored as sorted CSR rows; directed
// graphs keep the transposed rows as well so in-neighbors are O(deg).
// A_ij = 1 means an arc i -> j (i nominated j).
class LabeledGraph {
 public:
  using Edge = std::pair<NodeId, NodeId>;

  LabeledGraph() = default;

  // `edges` may hold duplicates and self-loops; both are dropped.
  // Undirected input is symmetrized. `external_ids` defaults to 0..N-1.
  static LabeledGraph Build(std::size_t node_count, std::vector<Edge> edges,
                            std::vector<LabelCode> labels,
                            LabelDictionary dictionary, bool directed,
                            std::vector<ExternalId> external_ids = {}) {
    if (labels.size() != node_count) {
      throw ArgumentError("label vector length does not match node count");
    }
    if (external_ids.empty()) {
      external_ids.resize(node_count);
      for (std::size_t i = 0; i < node_count; ++i) external_ids[i] = i;
    } else if (external_ids.size() != node_count) {
      throw ArgumentError("external id vector length does not match node count");
    }
    for (LabelCode c : labels) {
      if (c != kUnlabeled &&
          (c < 0 || static_cast<std::size_t>(c) >= dictionary.size())) {
        throw ArgumentError("label code " + std::to_string(c) +
                            " not in dictionary");
      }
    }

    std::vector<Edge> arcs;
    arcs.reserve(directed ? edges.size() : 2 * edges.size());
    for (auto [u, v] : edges) {
      if (u >= node_count || v >= node_count) {
        throw ArgumentError("edge endpoint out of range");
      }
      if (u == v) continue;
      arcs.emplace_back(u, v);
      if (!directed) arcs.emplace_back(v, u);
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

    LabeledGraph g;
    g.directed_ = directed;
    g.labels_ = std::move(labels);
    g.dictionary_ = std::move(dictionary);
    g.external_ids_ = std::move(external_ids);
    g.arc_count_ = arcs.size();
    FillCsr(node_count, arcs, g.out_offsets_, g.out_targets_);
    if (directed) {
      for (auto& a : arcs) std::swap(a.first, a.second);
      std::sort(arcs.begin(), arcs.end());
      FillCsr(node_count, arcs, g.in_offsets_, g.in_targets_);
    }
    return g;
  }

  std::size_t node_count() const noexcept { return labels_.size(); }

  // Undirected: number of unordered pairs. Directed: number of arcs.
  std::size_t edge_count() const noexcept {
    return directed_ ? arc_count_ : arc_count_ / 2;
  }

  bool directed() const noexcept { return directed_; }

  // Row reads: nominees for directed graphs, neighbors otherwise.
  std::span<const NodeId> out_neighbors(NodeId v) const {
    return Row(out_offsets_, out_targets_, v);
  }

  // Column reads: nominators for directed graphs, neighbors otherwise.
  std::span<const NodeId> in_neighbors(NodeId v) const {
    return directed_ ? Row(in_offsets_, in_targets_, v)
                     : Row(out_offsets_, out_targets_, v);
  }

  std::span<const NodeId> neighbors(NodeId v, Orientation o) const {
    return o == Orientation::kIn ? in_neighbors(v) : out_neighbors(v);
  }

  std::size_t degree(NodeId v, Orientation o = Orientation::kOut) const {
    return neighbors(v, o).size();
  }

  bool has_edge(NodeId u, NodeId v) const {
    auto row = out_neighbors(u);
    return std::binary_search(row.begin(), row.end(), v);
  }

  LabelCode label(NodeId v) const { return labels_.at(v); }
  bool labeled(NodeId v) const { return labels_.at(v) != kUnlabeled; }
  std::span<const LabelCode> labels() const noexcept { return labels_; }
  const LabelDictionary& dictionary() const noexcept { return dictionary_; }
  ExternalId external_id(NodeId v) const { return external_ids_.at(v); }
  std::span<const ExternalId> external_ids() const noexcept {
    return external_ids_;
  }

  // Every arc once (directed) or every unordered pair once with u < v.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u) {
      for (NodeId v : out_neighbors(u)) {
        if (directed_ || u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  std::size_t class_size(LabelCode c) const {
    return static_cast<std::size_t>(
        std::count(labels_.begin(), labels_.end(), c));
  }

  std::size_t labeled_count() const {
    return node_count() - class_size(kUnlabeled);
  }

  LabeledGraph transpose() const {
    if (!directed_) return *this;
    LabeledGraph t = *this;
    std::swap(t.out_offsets_, t.in_offsets_);
    std::swap(t.out_targets_, t.in_targets_);
    return t;
  }

  // Forgets arc direction: i ~ j whenever i -> j or j -> i.
  LabeledGraph to_undirected() const {
    if (!directed_) return *this;
    return Build(node_count(), edges(), labels_, dictionary_, false,
                 external_ids_);
  }

  bool operator==(const LabeledGraph&) const = default;

 private:
  static void FillCsr(std::size_t n, const std::vector<Edge>& sorted_arcs,
                      std::vector<std::size_t>& offsets,
                      std::vector<NodeId>& targets) {
    offsets.assign(n + 1, 0);
    targets.resize(sorted_arcs.size());
    for (auto [u, v] : sorted_arcs) ++offsets[u + 1];
    for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
    for (std::size_t k = 0; k < sorted_arcs.size(); ++k) {
      targets[k] = sorted_arcs[k].second;
    }
  }

  static std::span<const NodeId> Row(const std::vector<std::size_t>& offsets,
                                     const std::vector<NodeId>& targets,
                                     NodeId v) {
    if (static_cast<std::size_t>(v) + 1 >= offsets.size()) {
      throw ArgumentError("node id " + std::to_string(v) + " out of range");
    }
    return {targets.data() + offsets[v], offsets[v + 1] - offsets[v]};
  }

  bool directed_ = false;
  std::size_t arc_count_ = 0;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<NodeId> out_targets_;
  std::vector<std::size_t> in_offsets_;
  std::vector<NodeId> in_targets_;
  std::vector<LabelCode> labels_;
  LabelDictionary dictionary_;
  std::vector<ExternalId> external_ids_;
};

// Result of a preprocessing step: the new graph plus, for every new node
// id, the node id it had in the input graph.
struct Subgraph {
  LabeledGraph graph;
  std::vector<NodeId> parent;
};

// Induced subgraph on the nodes with keep[v] set, ids re-densified in
// increasing input-id order.
inline Subgraph induced_subgraph(const LabeledGraph& g,
                                 const std::vector<bool>& keep) {
  const std::size_t n = g.node_count();
  std::vector<NodeId> new_id(n, 0);
  Subgraph out;
  for (NodeId v = 0; v < n; ++v) {
    if (keep[v]) {
      new_id[v] = static_cast<NodeId>(out.parent.size());
      out.parent.push_back(v);
    }
  }
  std::vector<LabeledGraph::Edge> edges;
  for (auto [u, v] : g.edges()) {
    if (keep[u] && keep[v]) edges.emplace_back(new_id[u], new_id[v]);
  }
  std::vector<LabelCode> labels;
  std::vector<ExternalId> ext;
  labels.reserve(out.parent.size());
  ext.reserve(out.parent.size());
  for (NodeId old : out.parent) {
    labels.push_back(g.label(old));
    ext.push_back(g.external_id(old));
  }
  out.graph = LabeledGraph::Build(out.parent.size(), std::move(edges),
                                  std::move(labels), g.dictionary(),
                                  g.directed(), std::move(ext));
  return out;
}

// Builds a graph from raw records that share one id namespace. Every id
// seen in either input becomes a node; dense ids follow increasing
// external id. Nodes without a label record, or with an empty label,
// stay in the graph as unlabeled.
inline LabeledGraph load_graph(
    const std::vector<std::pair<ExternalId, ExternalId>>& edge_records,
    const std::map<ExternalId, std::optional<std::string>>& label_records,
    bool directed) {
  if (edge_records.empty()) {
    throw StructuralError("edge set is empty");
  }
  std::vector<ExternalId> ids;
  ids.reserve(2 * edge_records.size() + label_records.size());
  for (auto [a, b] : edge_records) {
    ids.push_back(a);
    ids.push_back(b);
  }
  std::vector<std::string> names;
  for (const auto& [id, label] : label_records) {
    ids.push_back(id);
    if (label && !label->empty()) names.push_back(*label);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  auto dense = [&ids](ExternalId x) {
    return static_cast<NodeId>(
        std::lower_bound(ids.begin(), ids.end(), x) - ids.begin());
  };

  std::vector<LabeledGraph::Edge> edges;
  edges.reserve(edge_records.size());
  for (auto [a, b] : edge_records) edges.emplace_back(dense(a), dense(b));

  auto dict = LabelDictionary::FromNames(std::move(names));
  std::vector<LabelCode> labels(ids.size(), kUnlabeled);
  for (const auto& [id, label] : label_records) {
    if (label && !label->empty()) labels[dense(id)] = dict.code(*label);
  }
  const std::size_t n = ids.size();
  return LabeledGraph::Build(n, std::move(edges), std::move(labels),
                             std::move(dict), directed, std::move(ids));
}

// Removes unlabeled nodes and their incident edges.
inline Subgraph restrict_to_labeled(const LabeledGraph& g) {
  std::vector<bool> keep(g.node_count());
  bool any = false;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    keep[v] = g.labeled(v);
    any = any || keep[v];
  }
  if (!any) throw StructuralError("graph has no labeled nodes");
  return induced_subgraph(g, keep);
}

// Component id per node under weak connectivity; components are numbered
// in order of their smallest node id.
inline std::vector<std::size_t> weak_components(const LabeledGraph& g,
                                                std::size_t* count = nullptr) {
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> comp(g.node_count(), kNone);
  std::size_t next = 0;
  std::queue<NodeId> frontier;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    if (comp[s] != kNone) continue;
    comp[s] = next;
    frontier.push(s);
    while (!frontier.empty()) {
      NodeId u = frontier.front();
      frontier.pop();
      auto visit = [&](NodeId w) {
        if (comp[w] == kNone) {
          comp[w] = next;
          frontier.push(w);
        }
      };
      for (NodeId w : g.out_neighbors(u)) visit(w);
      if (g.directed()) {
        for (NodeId w : g.in_neighbors(u)) visit(w);
      }
    }
    ++next;
  }
  if (count) *count = next;
  return comp;
}

// Induced subgraph on the largest weakly connected component. Equal-size
// components resolve to the one holding the smallest node id.
inline Subgraph largest_connected_component(const LabeledGraph& g) {
  if (g.node_count() == 0) throw StructuralError("graph is empty");
  std::size_t count = 0;
  auto comp = weak_components(g, &count);
  std::vector<std::size_t> sizes(count, 0);
  for (auto c : comp) ++sizes[c];
  std::size_t best = 0;
  for (std::size_t c = 1; c < count; ++c) {
    if (sizes[c] > sizes[best]) best = c;
  }
  std::vector<bool> keep(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) keep[v] = comp[v] == best;
  return induced_subgraph(g, keep);
}

// restrict_to_labeled followed by largest_connected_component; `parent`
// maps straight back to the input graph.
inline Subgraph preprocess(const LabeledGraph& g) {
  Subgraph labeled = restrict_to_labeled(g);
  Subgraph lcc = largest_connected_component(labeled.graph);
  for (auto& p : lcc.parent) p = labeled.parent[p];
  return lcc;
}

struct DegreeEntry {
  NodeId node = 0;
  std::uint32_t in_class = 0;   // neighbors sharing the class
  std::uint32_t out_class = 0;  // neighbors in any other class

  std::uint32_t total() const noexcept { return in_class + out_class; }
  bool operator==(const DegreeEntry&) const = default;
};

struct ClassDegreeSequence {
  LabelCode class_id = 0;
  Orientation orientation = Orientation::kUndirected;
  std::size_t class_size = 0;       // n_r
  std::size_t complement_size = 0;  // N - n_r
  std::vector<DegreeEntry> entries;
};

// Splits each class member's degree into same-class and other-class
// counts. kIn reads nominators (columns), kOut reads nominees (rows).
// Unlabeled neighbors count toward neither side.
inline ClassDegreeSequence class_degree_sequence(const LabeledGraph& g,
                                                 LabelCode class_id,
                                                 Orientation orientation) {
  if (class_id < 0 ||
      static_cast<std::size_t>(class_id) >= g.dictionary().size()) {
    throw ArgumentError("unknown class code " + std::to_string(class_id));
  }
  if (orientation == Orientation::kUndirected && g.directed()) {
    throw ArgumentError(
        "undirected orientation requested on a directed graph; use in, out "
        "or to_undirected()");
  }
  ClassDegreeSequence seq;
  seq.class_id = class_id;
  seq.orientation = orientation;
  seq.class_size = g.class_size(class_id);
  seq.complement_size = g.labeled_count() - seq.class_size;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.label(v) != class_id) continue;
    DegreeEntry e{v, 0, 0};
    for (NodeId w : g.neighbors(v, orientation)) {
      LabelCode c = g.label(w);
      if (c == class_id) {
        ++e.in_class;
      } else if (c != kUnlabeled) {
        ++e.out_class;
      }
    }
    seq.entries.push_back(e);
  }
  return seq;
}

inline ClassDegreeSequence class_degree_sequence(const LabeledGraph& g,
                                                 const std::string& class_name,
                                                 Orientation orientation) {
  return class_degree_sequence(g, g.dictionary().code(class_name),
                               orientation);
}

}  // namespace monophily
