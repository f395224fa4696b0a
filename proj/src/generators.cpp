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

#include "imax/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "imax/error.hpp"

namespace imax {
namespace {

// Distribution code of the standard library is implementation-defined, so
// draws are derived from the engine's raw words.
class Draws {
 public:
  explicit Draws(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t Below(std::uint64_t bound) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(engine_()) * bound) >> 64);
  }
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

void CheckProbability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("edge probability must lie in [0, 1]");
}

// Appends G(count, p) over nodes offset..offset+count-1 using geometric skips.
void AppendRandomPairs(std::size_t offset, std::size_t count, double p, bool directed,
                       Draws& draws, std::vector<InputEdge>& edges) {
  if (p <= 0.0 || count < 2) return;
  const auto label = [offset](std::uint64_t i) { return static_cast<NodeId>(offset + i); };
  const std::uint64_t n = count;
  const std::uint64_t per_row = directed ? n - 1 : 0;
  const std::uint64_t total = directed ? n * (n - 1) : n * (n - 1) / 2;
  const double log_q = std::log1p(-p);
  std::uint64_t index = 0;
  bool first = true;
  while (true) {
    if (p < 1.0) {
      const double skip = std::floor(std::log1p(-draws.Uniform()) / log_q);
      if (skip >= static_cast<double>(total)) break;
      index += static_cast<std::uint64_t>(skip) + (first ? 0 : 1);
    } else if (!first) {
      ++index;
    }
    first = false;
    if (index >= total) break;
    std::uint64_t u = 0;
    std::uint64_t v = 0;
    if (directed) {
      u = index / per_row;
      v = index % per_row;
      if (v >= u) ++v;
    } else {
      // Row u holds pairs (u, u+1..n-1); invert the triangular offset.
      const double nn = static_cast<double>(n);
      u = static_cast<std::uint64_t>(
          std::floor(nn - 0.5 - std::sqrt((nn - 0.5) * (nn - 0.5) - 2.0 * static_cast<double>(index))));
      auto row_start = [n](std::uint64_t r) { return r * (2 * n - r - 1) / 2; };
      while (u > 0 && row_start(u) > index) --u;
      while (u + 1 < n && row_start(u + 1) <= index) ++u;
      v = u + 1 + (index - row_start(u));
    }
    edges.push_back({label(u), label(v), 1.0});
  }
}

}  // namespace

std::vector<InputEdge> BarabasiAlbertEdges(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1) throw DomainError("attachment count must be at least 1");
  if (n <= m) throw DomainError("node count must exceed the attachment count");
  Draws draws(seed);
  std::vector<InputEdge> edges;
  edges.reserve(n * m);
  // One entry per edge endpoint; sampling from it is degree-proportional.
  std::vector<NodeId> endpoints;
  endpoints.reserve(2 * n * m);
  // The first m+1 nodes form a star on node 0 so every node has degree >= 1.
  for (std::size_t v = 1; v <= m; ++v) {
    edges.push_back({0, static_cast<NodeId>(v), 1.0});
    endpoints.push_back(0);
    endpoints.push_back(static_cast<NodeId>(v));
  }
  std::vector<NodeId> targets;
  for (std::size_t v = m + 1; v < n; ++v) {
    targets.clear();
    while (targets.size() < m) {
      const NodeId t = endpoints[draws.Below(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (NodeId t : targets) {
      edges.push_back({static_cast<NodeId>(v), t, 1.0});
      endpoints.push_back(static_cast<NodeId>(v));
      endpoints.push_back(t);
    }
  }
  return edges;
}

std::vector<InputEdge> ErdosRenyiEdges(std::size_t n, double p, bool directed,
                                       std::uint64_t seed) {
  CheckProbability(p);
  Draws draws(seed);
  std::vector<InputEdge> edges;
  AppendRandomPairs(0, n, p, directed, draws, edges);
  return edges;
}

std::vector<InputEdge> CommunityEdges(std::size_t n, std::size_t block_size, double p_in,
                                      double cross_per_node, std::uint64_t seed) {
  CheckProbability(p_in);
  if (block_size < 1) throw DomainError("block size must be at least 1");
  if (cross_per_node < 0.0) throw DomainError("cross-block rate must be non-negative");
  Draws draws(seed);
  std::vector<InputEdge> edges;
  for (std::size_t start = 0; start < n; start += block_size) {
    AppendRandomPairs(start, std::min(block_size, n - start), p_in, false, draws, edges);
  }
  if (n > block_size) {
    const auto cross = static_cast<std::size_t>(
        std::llround(static_cast<double>(n) * cross_per_node / 2.0));
    for (std::size_t i = 0; i < cross;) {
      const std::uint64_t u = draws.Below(n);
      const std::uint64_t v = draws.Below(n);
      if (u / block_size == v / block_size) continue;
      edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), 1.0});
      ++i;
    }
  }
  return edges;
}

}  // namespace imax
