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

// Reference algorithms: Monte-Carlo Greedy and CELF, snapshot-based
// StaticGreedy, and reverse influence sampling with greedy max-coverage.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "imax/diffusion.hpp"
#include "imax/graph.hpp"
#include "imax/seed_result.hpp"

namespace imax {

// Plain greedy: each round estimates sigma(S + v) for every v outside S with
// spec.sim_count cascades. All estimates share spec.rng_seed, so they are
// evaluated on the same sampled worlds. Costs O(k n r) cascades; meant for
// graphs of at most a few hundred nodes.
SeedResult GreedyMc(const Graph& g, std::size_t k, const DiffusionSpec& spec);

struct CelfOptions {
  // If set, receives the nodes re-evaluated in each round (round 0 holds the
  // initial evaluation of every node).
  std::vector<std::vector<NodeId>>* refreshed = nullptr;
};

// Lazy greedy over the same estimates as GreedyMc. Under IC every sampled
// world is a coverage function, so stale gains are exact upper bounds and the
// result matches GreedyMc seed for seed.
SeedResult Celf(const Graph& g, std::size_t k, const DiffusionSpec& spec,
                const CelfOptions& options = {});

// One sampled world: the surviving out-arcs plus the nodes removed so far.
class Snapshot {
 public:
  // Fixture constructor from explicit surviving arcs.
  static Snapshot FromArcs(std::size_t node_count,
                           std::span<const std::pair<NodeId, NodeId>> arcs);
  // IC: every edge survives independently with probability w. LT: every
  // node keeps at most one in-edge, (u,v) with probability w(u,v).
  static Snapshot Sample(const Graph& g, Model model, std::uint64_t rng_seed,
                         std::uint64_t index);

  std::size_t node_count() const { return removed_.size(); }
  std::span<const NodeId> out(NodeId u) const {
    return {targets_.data() + offsets_[u], targets_.data() + offsets_[u + 1]};
  }
  bool removed(NodeId v) const { return removed_[v] != 0; }

  // Nodes reachable from v (v included) through non-removed nodes; empty if
  // v itself is removed.
  std::vector<NodeId> Reachable(NodeId v) const;
  std::size_t CountReachable(NodeId v, std::vector<std::uint32_t>& mark,
                             std::uint32_t stamp, std::vector<NodeId>& queue) const;
  void RemoveReachable(NodeId v);

  std::size_t memory_bytes() const;

 private:
  std::vector<std::uint32_t> offsets_{0};
  std::vector<NodeId> targets_;
  std::vector<char> removed_;
};

// StaticGreedy: gain(v) is the mean over snapshots of v's reachable count
// among non-removed nodes; the winner and everything it reaches is removed
// from every snapshot. Gains only shrink, so evaluation is lazy.
SeedResult SgSelect(const Graph& g, std::size_t k, std::uint32_t snapshot_count,
                    Model model, std::uint64_t rng_seed, int threads = 0);
SeedResult SgSelectOnSnapshots(std::vector<Snapshot> snapshots, std::size_t k,
                               int threads = 0);

// One reverse-reachable set from `root` on the transpose graph. IC: coin-flip
// BFS along gT's out-arcs. LT: each reached node picks at most one of its
// original in-neighbours, u with probability w(u, v).
std::vector<NodeId> GenerateRRSetFrom(const Graph& gT, NodeId root, const DiffusionSpec& spec,
                                      std::uint64_t draw);
// As above with the root drawn uniformly from the draw's own stream.
std::vector<NodeId> GenerateRRSet(const Graph& gT, const DiffusionSpec& spec,
                                  std::uint64_t draw);

// Flat storage of RR sets with a node -> set inverted index.
class RRSetCollection {
 public:
  explicit RRSetCollection(std::size_t node_count) : node_count_(node_count) {}

  void Add(std::span<const NodeId> set);
  // Must be called after the last Add and before cover().
  void BuildIndex();

  std::size_t size() const { return offsets_.size() - 1; }
  std::size_t node_count() const { return node_count_; }
  std::size_t entry_count() const { return nodes_.size(); }
  std::span<const NodeId> set(std::size_t i) const {
    return {nodes_.data() + offsets_[i], nodes_.data() + offsets_[i + 1]};
  }
  std::span<const std::uint32_t> cover(NodeId v) const {
    return {cover_sets_.data() + cover_offsets_[v], cover_sets_.data() + cover_offsets_[v + 1]};
  }
  std::size_t memory_bytes() const;

 private:
  std::size_t node_count_;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<NodeId> nodes_;
  std::vector<std::uint64_t> cover_offsets_;
  std::vector<std::uint32_t> cover_sets_;
};

struct CoverageResult {
  std::vector<NodeId> seeds;
  // Sets newly covered by seeds[i].
  std::vector<std::uint64_t> newly_covered;
  std::uint64_t covered = 0;
};

// Greedy max-coverage: repeatedly take the node in the most uncovered sets
// (ties to the smaller id) and mark its sets covered.
CoverageResult GreedyMaxCoverage(const RRSetCollection& sets, std::size_t k);

struct RisOptions {
  std::uint64_t theta = 10000;
  // Double theta until the k-seed coverage fraction moves by less than
  // `tolerance` (relative) between consecutive rounds, or theta_max is hit.
  bool doubling = false;
  double tolerance = 0.01;
  std::uint64_t theta_max = std::uint64_t{1} << 24;
};

// Spread estimate is n * covered / theta.
SeedResult RisSelect(const Graph& g, std::size_t k, const RisOptions& options,
                     const DiffusionSpec& spec);

}  // namespace imax
