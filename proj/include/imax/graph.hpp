// Copyright 2026 The Authors.
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

// Immutable weighted digraph with forward and reverse CSR adjacency, plus
// edge-list ingestion and influence-probability assignment.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace imax {

using NodeId = std::uint32_t;

// One adjacency entry. In out-lists `node` is the target, in in-lists it is
// the source.
struct Arc {
  NodeId node;
  double weight;

  friend bool operator==(const Arc&, const Arc&) = default;
};

// How influence probabilities are assigned to edges.
struct WeightPolicy {
  enum class Kind {
    // w(u,v) = min(1, rho / |In(v)|); rho = 1 gives the WC convention.
    kGeneralizedInDegree,
    // w(u,v) = value for every edge.
    kUniformConstant,
    // Weights come from the third column of the edge list.
    kExplicit,
  };

  Kind kind = Kind::kGeneralizedInDegree;
  double value = 1.0;

  static WeightPolicy GeneralizedInDegree(double rho);
  static WeightPolicy UniformConstant(double w);
  static WeightPolicy Explicit();
};

// An input edge in dense ids. `weight` is only read under kExplicit.
struct InputEdge {
  NodeId source;
  NodeId target;
  double weight = 0.0;
};

class Graph {
 public:
  Graph() = default;

  // Builds a graph over nodes [0, node_count). Self-loops are dropped and a
  // repeated (u,v) keeps its first occurrence. Undirected input is stored in
  // both orientations. `labels`, if given, holds the original id of each
  // dense node; otherwise labels are the dense ids themselves.
  static Graph FromEdges(std::size_t node_count, std::span<const InputEdge> edges,
                         bool directed, const WeightPolicy& policy,
                         std::vector<std::int64_t> labels = {});

  std::size_t node_count() const { return labels_.size(); }
  std::size_t edge_count() const { return out_arcs_.size(); }
  bool directed() const { return directed_; }

  std::span<const Arc> out(NodeId u) const {
    return {out_arcs_.data() + out_offsets_[u], out_arcs_.data() + out_offsets_[u + 1]};
  }
  std::span<const Arc> in(NodeId v) const {
    return {in_arcs_.data() + in_offsets_[v], in_arcs_.data() + in_offsets_[v + 1]};
  }
  // Global index of u's first out-arc. out-arc i of u has edge id
  // first_out_edge(u) + i; ids are stable for the lifetime of the graph.
  std::size_t first_out_edge(NodeId u) const { return out_offsets_[u]; }
  // Same numbering for in-arcs; matches first_out_edge on the transpose.
  std::size_t first_in_edge(NodeId v) const { return in_offsets_[v]; }

  std::int64_t label(NodeId v) const { return labels_[v]; }
  const std::vector<std::int64_t>& labels() const { return labels_; }
  std::optional<NodeId> FindLabel(std::int64_t label) const;

  // Bytes held by the adjacency arrays.
  std::size_t memory_bytes() const;

  // Structural equality: same labels, arcs and weights.
  friend bool operator==(const Graph& a, const Graph& b);

 private:
  friend Graph Transpose(const Graph& g);

  bool directed_ = true;
  std::vector<std::int64_t> labels_;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<Arc> out_arcs_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<Arc> in_arcs_;
};

// Parses a whitespace-separated edge list ("u v" or "u v w" per line; '#'
// starts a comment line; LF or CRLF). Original ids are compacted to [0, n)
// in ascending order of the original id.
Graph ParseEdgeList(std::istream& in, bool directed, const WeightPolicy& policy);
Graph LoadGraph(const std::filesystem::path& path, bool directed,
                const WeightPolicy& policy);

// Swaps the roles of out- and in-adjacency.
Graph Transpose(const Graph& g);

// "original_id,dense_id" CSV, one row per node, with a header row.
void WriteIdMap(const Graph& g, std::ostream& out);

// "u v w" lines in dense ids, one per stored arc.
void WriteEdgeList(const Graph& g, std::ostream& out);

}  // namespace imax
