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

#include "imax/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "cascade.hpp"
#include "imax/error.hpp"
#include "imax/rng.hpp"
#include "parallel.hpp"

namespace imax {

std::string_view ModelName(Model model) {
  return model == Model::kIC ? "ic" : "lt";
}

void DiffusionSpec::Validate() const {
  if (sim_count < 1) throw DomainError("simulation count must be at least 1");
}

SpreadEstimate SpreadTotals::Estimate() const {
  SpreadEstimate e;
  e.runs = runs;
  if (runs == 0) return e;
  const double r = static_cast<double>(runs);
  e.mean = static_cast<double>(sum) / r;
  if (runs > 1) {
    const double var = std::max(
        0.0, (static_cast<double>(sum_squares) - static_cast<double>(sum) * e.mean) / (r - 1.0));
    e.std_error = std::sqrt(var / r);
  }
  return e;
}

SpreadTotals SimulateSpreadTotals(const Graph& g, std::span<const NodeId> seeds,
                                  const DiffusionSpec& spec) {
  spec.Validate();
  if (seeds.empty()) throw PreconditionError("seed set is empty");
  for (NodeId s : seeds) {
    if (s >= g.node_count()) throw DomainError("seed id " + std::to_string(s) + " >= n");
  }
  std::vector<NodeId> initial(seeds.begin(), seeds.end());
  std::sort(initial.begin(), initial.end());
  initial.erase(std::unique(initial.begin(), initial.end()), initial.end());

  const auto runs = static_cast<std::int64_t>(spec.sim_count);
  const int threads = detail::ResolveThreads(spec.threads);
  std::uint64_t sum = 0;
  std::uint64_t sum_squares = 0;
  auto always = [](NodeId) { return true; };
  auto ignore = [](NodeId) {};

#pragma omp parallel num_threads(threads) reduction(+ : sum, sum_squares)
  {
    detail::CascadeWorkspace ws(g.node_count());
#pragma omp for schedule(static)
    for (std::int64_t j = 0; j < runs; ++j) {
      const KeyedStream stream(spec.rng_seed, RngDomain::kSpread, 0,
                               static_cast<std::uint64_t>(j));
      std::uint64_t active = 0;
      if (spec.model == Model::kIC) {
        active = ws.RunIc(
            g, initial, stream, always, [](NodeId, const Arc& a) { return a.weight; },
            ignore);
      } else {
        active = ws.RunLt(
            g, initial, stream, always, [](NodeId, const Arc& a) { return a.weight; },
            ignore);
      }
      sum += active;
      sum_squares += active * active;
    }
  }
  return {sum, sum_squares, static_cast<std::uint64_t>(runs)};
}

SpreadEstimate SimulateSpread(const Graph& g, std::span<const NodeId> seeds,
                              const DiffusionSpec& spec) {
  return SimulateSpreadTotals(g, seeds, spec).Estimate();
}

namespace {

void CheckEndpoints(const Graph& g, NodeId source, NodeId target,
                    const ResidualState& state) {
  if (source >= g.node_count() || target >= g.node_count()) {
    throw DomainError("node id outside [0, n)");
  }
  if (state.size() != g.node_count()) {
    throw PreconditionError("residual state does not match graph");
  }
  if (!state.alive(source)) throw PreconditionError("source is not alive");
}

// Alive nodes reachable from `source` in topological order. Throws on cycles.
std::vector<NodeId> ReachableTopologicalOrder(const Graph& g, NodeId source,
                                              const ResidualState& state) {
  enum : char { kWhite, kGrey, kBlack };
  std::vector<char> color(g.node_count(), kWhite);
  std::vector<NodeId> post_order;
  std::vector<std::pair<NodeId, std::size_t>> stack{{source, 0}};
  color[source] = kGrey;
  while (!stack.empty()) {
    auto& [u, next] = stack.back();
    const auto arcs = g.out(u);
    if (next == arcs.size()) {
      color[u] = kBlack;
      post_order.push_back(u);
      stack.pop_back();
      continue;
    }
    const NodeId v = arcs[next++].node;
    if (!state.alive(v)) continue;
    if (color[v] == kGrey) {
      throw UnsupportedInputError("alive subgraph reachable from the source has a cycle");
    }
    if (color[v] == kWhite) {
      color[v] = kGrey;
      stack.push_back({v, 0});
    }
  }
  std::reverse(post_order.begin(), post_order.end());
  return post_order;
}

}  // namespace

double ExactLtProbability(const Graph& g, NodeId source, NodeId target,
                          const ResidualState& state) {
  CheckEndpoints(g, source, target, state);
  if (source == target) return 1.0;
  if (!state.alive(target)) return 0.0;
  const auto order = ReachableTopologicalOrder(g, source, state);
  std::vector<double> mass(g.node_count(), 0.0);
  mass[source] = 1.0;
  for (NodeId u : order) {
    for (const Arc& a : g.out(u)) {
      if (state.alive(a.node) && a.node != source) mass[a.node] += mass[u] * a.weight;
    }
  }
  return mass[target];
}

double ExactIcSharedNothingProbability(const Graph& g, NodeId source, NodeId target,
                                       const ResidualState& state) {
  CheckEndpoints(g, source, target, state);
  if (source == target) return 1.0;
  if (!state.alive(target)) return 0.0;
  ReachableTopologicalOrder(g, source, state);

  constexpr std::size_t kMaxPaths = 1u << 20;
  std::unordered_set<std::uint64_t> used_edges;
  double none_fires = 1.0;
  std::size_t paths = 0;
  // Depth-first enumeration of simple paths; the DAG check guarantees
  // termination.
  std::vector<NodeId> path{source};
  std::vector<double> prob{1.0};
  std::vector<std::size_t> cursor{0};
  while (!path.empty()) {
    const NodeId u = path.back();
    const auto arcs = g.out(u);
    if (u == target || cursor.back() == arcs.size()) {
      if (u == target) {
        if (++paths > kMaxPaths) {
          throw UnsupportedInputError("too many source->target paths to enumerate");
        }
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
          const auto key = static_cast<std::uint64_t>(path[i]) * g.node_count() + path[i + 1];
          if (!used_edges.insert(key).second) {
            throw SharedEdgeError("paths to node " + std::to_string(target) +
                                  " share edge (" + std::to_string(path[i]) + "," +
                                  std::to_string(path[i + 1]) + ")");
          }
        }
        none_fires *= 1.0 - prob.back();
      }
      path.pop_back();
      prob.pop_back();
      cursor.pop_back();
      continue;
    }
    const Arc& a = arcs[cursor.back()++];
    if (!state.alive(a.node) || a.node == source) continue;
    path.push_back(a.node);
    prob.push_back(prob.back() * state.rc(u) * a.weight);
    cursor.push_back(0);
  }
  return 1.0 - none_fires;
}

}  // namespace imax
