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

#include "imax/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "imax/error.hpp"

namespace imax {

WeightPolicy WeightPolicy::GeneralizedInDegree(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw DomainError("activeness rho must be a positive finite number");
  }
  return {Kind::kGeneralizedInDegree, rho};
}

WeightPolicy WeightPolicy::UniformConstant(double w) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw DomainError("uniform edge weight must lie in [0, 1]");
  }
  return {Kind::kUniformConstant, w};
}

WeightPolicy WeightPolicy::Explicit() { return {Kind::kExplicit, 0.0}; }

namespace {

}  // namespace

Graph Graph::FromEdges(std::size_t node_count, std::span<const InputEdge> edges,
                       bool directed, const WeightPolicy& policy,
                       std::vector<std::int64_t> labels) {
  if (!labels.empty() && labels.size() != node_count) {
    throw PreconditionError("label count does not match node count");
  }
  if (labels.empty()) {
    labels.resize(node_count);
    std::iota(labels.begin(), labels.end(), std::int64_t{0});
  }

  for (const InputEdge& e : edges) {
    if (e.source >= node_count || e.target >= node_count) {
      throw DomainError("edge endpoint outside [0, n)");
    }
    if (policy.kind == WeightPolicy::Kind::kExplicit && e.source != e.target &&
        !(e.weight >= 0.0 && e.weight <= 1.0)) {
      throw DomainError("explicit edge weight outside [0, 1]");
    }
  }

  Graph g;
  g.directed_ = directed;
  g.labels_ = std::move(labels);

  // Out side first, bucketed by source in input order, then sorted and
  // deduplicated per node. The first occurrence of a duplicate pair wins.
  std::vector<std::size_t>& out_offsets = g.out_offsets_;
  out_offsets.assign(node_count + 1, 0);
  for (const InputEdge& e : edges) {
    if (e.source == e.target) continue;
    ++out_offsets[e.source + 1];
    if (!directed) ++out_offsets[e.target + 1];
  }
  std::partial_sum(out_offsets.begin(), out_offsets.end(), out_offsets.begin());
  std::vector<Arc>& out_arcs = g.out_arcs_;
  out_arcs.resize(out_offsets.back());
  {
    std::vector<std::size_t> fill(out_offsets.begin(), out_offsets.end() - 1);
    for (const InputEdge& e : edges) {
      if (e.source == e.target) continue;
      out_arcs[fill[e.source]++] = Arc{e.target, e.weight};
      if (!directed) out_arcs[fill[e.target]++] = Arc{e.source, e.weight};
    }
  }
  std::size_t write = 0;
  for (NodeId u = 0; u < node_count; ++u) {
    const auto first = out_arcs.begin() + static_cast<std::ptrdiff_t>(out_offsets[u]);
    const auto last = out_arcs.begin() + static_cast<std::ptrdiff_t>(out_offsets[u + 1]);
    std::stable_sort(first, last, [](const Arc& x, const Arc& y) { return x.node < y.node; });
    const auto end = std::unique(first, last, [](const Arc& x, const Arc& y) {
      return x.node == y.node;
    });
    out_offsets[u] = write;
    write = static_cast<std::size_t>(std::move(first, end, out_arcs.begin() +
                                                            static_cast<std::ptrdiff_t>(write)) -
                                     out_arcs.begin());
  }
  out_offsets[node_count] = write;
  out_arcs.resize(write);
  out_arcs.shrink_to_fit();

  // Weights are assigned only once in-degrees are final.
  std::vector<std::size_t>& in_offsets = g.in_offsets_;
  in_offsets.assign(node_count + 1, 0);
  for (const Arc& arc : out_arcs) ++in_offsets[arc.node + 1];
  std::partial_sum(in_offsets.begin(), in_offsets.end(), in_offsets.begin());
  for (Arc& arc : out_arcs) {
    switch (policy.kind) {
      case WeightPolicy::Kind::kGeneralizedInDegree:
        arc.weight = std::min(1.0, policy.value / static_cast<double>(in_offsets[arc.node + 1] -
                                                                      in_offsets[arc.node]));
        break;
      case WeightPolicy::Kind::kUniformConstant:
        arc.weight = policy.value;
        break;
      case WeightPolicy::Kind::kExplicit:
        break;
    }
  }
  // Sources are visited in increasing order, so in-arcs come out sorted.
  g.in_arcs_.resize(out_arcs.size());
  std::vector<std::size_t> in_fill(in_offsets.begin(), in_offsets.end() - 1);
  for (NodeId u = 0; u < node_count; ++u) {
    for (std::size_t i = out_offsets[u]; i < out_offsets[u + 1]; ++i) {
      g.in_arcs_[in_fill[out_arcs[i].node]++] = Arc{u, out_arcs[i].weight};
    }
  }
  return g;
}

std::optional<NodeId> Graph::FindLabel(std::int64_t label) const {
  // Loaded graphs have sorted labels; generated graphs use the identity.
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it != labels_.end() && *it == label) {
    return static_cast<NodeId>(it - labels_.begin());
  }
  it = std::find(labels_.begin(), labels_.end(), label);
  if (it != labels_.end()) return static_cast<NodeId>(it - labels_.begin());
  return std::nullopt;
}

std::size_t Graph::memory_bytes() const {
  return labels_.size() * sizeof(std::int64_t) +
         (out_offsets_.size() + in_offsets_.size()) * sizeof(std::size_t) +
         (out_arcs_.size() + in_arcs_.size()) * sizeof(Arc);
}

bool operator==(const Graph& a, const Graph& b) {
  return a.directed_ == b.directed_ && a.labels_ == b.labels_ &&
         a.out_offsets_ == b.out_offsets_ && a.out_arcs_ == b.out_arcs_ &&
         a.in_offsets_ == b.in_offsets_ && a.in_arcs_ == b.in_arcs_;
}

Graph Transpose(const Graph& g) {
  Graph t;
  t.directed_ = g.directed_;
  t.labels_ = g.labels_;
  t.out_offsets_ = g.in_offsets_;
  t.out_arcs_ = g.in_arcs_;
  t.in_offsets_ = g.out_offsets_;
  t.in_arcs_ = g.out_arcs_;
  return t;
}

namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\f\v");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\f\v");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> Tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool ParseNumber(std::string_view token, T& value) {
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  return ec == std::errc() && ptr == end;
}

struct RawEdge {
  std::int64_t source;
  std::int64_t target;
  double weight;
};

}  // namespace

Graph ParseEdgeList(std::istream& in, bool directed, const WeightPolicy& policy) {
  const bool explicit_weights = policy.kind == WeightPolicy::Kind::kExplicit;
  std::vector<RawEdge> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = Trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto tokens = Tokens(body);
    if (tokens.size() != 2 && tokens.size() != 3) {
      throw ParseError(line_no, "expected \"u v\" or \"u v w\", got " +
                                    std::to_string(tokens.size()) + " fields");
    }
    RawEdge e{0, 0, 0.0};
    if (!ParseNumber(tokens[0], e.source) || !ParseNumber(tokens[1], e.target)) {
      throw ParseError(line_no, "node ids must be integers");
    }
    if (tokens.size() == 3 && !ParseNumber(tokens[2], e.weight)) {
      throw ParseError(line_no, "weight is not a number");
    }
    if (explicit_weights) {
      if (tokens.size() != 3) {
        throw FormatError("line " + std::to_string(line_no) +
                          ": explicit weights requested but no weight column");
      }
      if (!(e.weight >= 0.0 && e.weight <= 1.0)) {
        throw DomainError("line " + std::to_string(line_no) +
                          ": weight outside [0, 1]");
      }
    }
    raw.push_back(e);
  }

  std::vector<std::int64_t> labels;
  labels.reserve(2 * raw.size());
  for (const RawEdge& e : raw) {
    labels.push_back(e.source);
    labels.push_back(e.target);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  auto dense = [&](std::int64_t label) {
    return static_cast<NodeId>(std::lower_bound(labels.begin(), labels.end(), label) -
                               labels.begin());
  };

  std::vector<InputEdge> edges;
  edges.reserve(raw.size());
  for (const RawEdge& e : raw) edges.push_back({dense(e.source), dense(e.target), e.weight});
  raw = {};
  const std::size_t n = labels.size();
  return Graph::FromEdges(n, edges, directed, policy, std::move(labels));
}

Graph LoadGraph(const std::filesystem::path& path, bool directed,
                const WeightPolicy& policy) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return ParseEdgeList(in, directed, policy);
}

void WriteIdMap(const Graph& g, std::ostream& out) {
  out << "original_id,dense_id\n";
  for (NodeId v = 0; v < g.node_count(); ++v) out << g.label(v) << ',' << v << '\n';
}

void WriteEdgeList(const Graph& g, std::ostream& out) {
  char buf[32];
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (const Arc& a : g.out(u)) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), a.weight);
      out << u << ' ' << a.node << ' ' << std::string_view(buf, end - buf) << '\n';
    }
  }
}

}  // namespace imax
