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

// Hand-built graphs shared by the unit tests and the acceptance suite.

#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "imax/baselines.hpp"
#include "imax/graph.hpp"

namespace imax::testing {

inline Graph Directed(std::size_t n, std::vector<InputEdge> edges,
                      WeightPolicy policy = WeightPolicy::Explicit()) {
  return Graph::FromEdges(n, edges, /*directed=*/true, policy);
}

// Four-node DAG used for the LT and IC worked examples.
//   a->b 0.7, a->c 0.3, a->d 0.4, b->c 0.5, c->d 0.2
namespace diamond {
inline constexpr NodeId a = 0, b = 1, c = 2, d = 3;
inline Graph Make() {
  return Directed(4, {{a, b, 0.7}, {a, c, 0.3}, {a, d, 0.4}, {b, c, 0.5}, {c, d, 0.2}});
}
// Exact LT activation probabilities from a.
inline constexpr double kPrB = 0.7, kPrC = 0.65, kPrD = 0.53;
inline constexpr double kSpreadOfA = 1.0 + kPrB + kPrC + kPrD;
}  // namespace diamond

// IC with w = 1 everywhere: c reaches x,y,z,q; b reaches x,y,z; d reaches e,f.
// Initial gains c=5, b=4, d=3. After c is chosen, b drops to 1 while d keeps
// 3, so the second round re-evaluates exactly b then d and picks d.
namespace lazy_demo {
inline constexpr NodeId b = 0, c = 1, d = 2, e = 3, f = 4, q = 5, x = 6, y = 7, z = 8;
inline Graph Make() {
  return Directed(9,
                  {{c, x}, {c, y}, {c, z}, {c, q}, {b, x}, {b, y}, {b, z}, {d, e}, {d, f}},
                  WeightPolicy::UniformConstant(1.0));
}
}  // namespace lazy_demo

// Two sampled worlds over nodes a..h. In the first, c reaches
// {c,f,e,g,a,h}; in the second, {c,f,e,h}.
namespace two_worlds {
inline constexpr NodeId a = 0, b = 1, c = 2, d = 3, e = 4, f = 5, g = 6, h = 7;
inline std::vector<Snapshot> Make() {
  const std::vector<std::pair<NodeId, NodeId>> first{{c, f}, {f, e}, {e, g}, {c, a}, {a, h}};
  const std::vector<std::pair<NodeId, NodeId>> second{{c, f}, {f, e}, {f, h}};
  return {Snapshot::FromArcs(8, first), Snapshot::FromArcs(8, second)};
}
}  // namespace two_worlds

// Five RR sets over nodes a..f; c appears in three of them, more than any
// other node.
namespace five_sets {
inline constexpr NodeId a = 0, b = 1, c = 2, d = 3, e = 4, f = 5;
inline RRSetCollection Make() {
  RRSetCollection sets(6);
  const std::vector<std::vector<NodeId>> lists{{e, f, c}, {c, a}, {b, c, d}, {d}, {a, b}};
  for (const auto& s : lists) sets.Add(s);
  sets.BuildIndex();
  return sets;
}
}  // namespace five_sets

// G(n, p) over ordered pairs, unweighted.
inline std::vector<InputEdge> RandomDigraphEdges(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<InputEdge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      if (u != v && static_cast<double>(rng() >> 11) * 0x1.0p-53 < p) edges.push_back({u, v, 0});
    }
  }
  return edges;
}

inline Graph RandomDigraph(std::size_t n, double p, std::uint64_t seed, WeightPolicy policy) {
  return Graph::FromEdges(n, RandomDigraphEdges(n, p, seed), true, policy);
}

}  // namespace imax::testing
