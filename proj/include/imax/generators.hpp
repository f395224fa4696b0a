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

// Synthetic graph generators. Output edges use dense ids [0, n) and carry no
// weights; they are meant for Graph::FromEdges or WriteEdgeList-style files.
// All generators are deterministic in their seed.

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "imax/graph.hpp"

namespace imax {

// Preferential attachment: every new node links to `m` distinct earlier
// nodes picked with probability proportional to degree. Undirected.
std::vector<InputEdge> BarabasiAlbertEdges(std::size_t n, std::size_t m, std::uint64_t seed);

// G(n, p). Directed draws every ordered pair, undirected every unordered one.
std::vector<InputEdge> ErdosRenyiEdges(std::size_t n, double p, bool directed,
                                       std::uint64_t seed);

// Consecutive blocks of `block_size` nodes with G(block, p_in) inside each
// block, plus round(n * cross_per_node / 2) uniformly random cross-block
// pairs. Undirected. Cascades stay mostly inside blocks, which keeps
// per-cascade cost bounded even for weights near 1.
std::vector<InputEdge> CommunityEdges(std::size_t n, std::size_t block_size, double p_in,
                                      double cross_per_node, std::uint64_t seed);

}  // namespace imax
