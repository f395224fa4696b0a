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

#include "imax/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <queue>
#include <string>

#include "imax/error.hpp"
#include "imax/rng.hpp"
#include "parallel.hpp"

namespace imax {
namespace {

using Clock = std::chrono::steady_clock;

double ElapsedMs(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void CheckK(std::size_t k, std::size_t n) {
  if (k < 1) throw DomainError("k must be at least 1");
  if (k > n) throw DomainError("k = " + std::to_string(k) + " exceeds n = " + std::to_string(n));
}

// Integer-valued lazy heap entry: larger value first, then smaller id.
struct LazyEntry {
  std::uint64_t value;
  NodeId node;
  std::uint32_t stamp;
};

struct LazyOrder {
  bool operator()(const LazyEntry& a, const LazyEntry& b) const {
    if (a.value != b.value) return a.value < b.value;
    return a.node > b.node;
  }
};

using LazyHeap = std::priority_queue<LazyEntry, std::vector<LazyEntry>, LazyOrder>;

std::uint64_t SpreadSum(const Graph& g, std::vector<NodeId>& seeds, NodeId extra,
                        const DiffusionSpec& spec) {
  seeds.push_back(extra);
  const std::uint64_t sum = SimulateSpreadTotals(g, seeds, spec).sum;
  seeds.pop_back();
  return sum;
}

}  // namespace

SeedResult GreedyMc(const Graph& g, std::size_t k, const DiffusionSpec& spec) {
  const auto start = Clock::now();
  const std::size_t n = g.node_count();
  CheckK(k, n);
  spec.Validate();
  const double runs = static_cast<double>(spec.sim_count);

  SeedResult result;
  std::vector<char> chosen(n, 0);
  std::vector<NodeId> seeds;
  std::uint64_t current = 0;
  for (std::size_t round = 0; round < k; ++round) {
    NodeId best = 0;
    std::uint64_t best_sum = 0;
    bool found = false;
    for (NodeId v = 0; v < n; ++v) {
      if (chosen[v]) continue;
      const std::uint64_t sum = SpreadSum(g, seeds, v, spec);
      ++result.exact_mg_computations;
      if (!found || sum > best_sum) {
        best = v;
        best_sum = sum;
        found = true;
      }
    }
    chosen[best] = 1;
    seeds.push_back(best);
    result.Push(best, static_cast<double>(best_sum - current) / runs);
    current = best_sum;
  }
  result.wall_time_ms = ElapsedMs(start);
  return result;
}

SeedResult Celf(const Graph& g, std::size_t k, const DiffusionSpec& spec,
                const CelfOptions& options) {
  const auto start = Clock::now();
  const std::size_t n = g.node_count();
  CheckK(k, n);
  spec.Validate();
  const double runs = static_cast<double>(spec.sim_count);

  SeedResult result;
  std::vector<NodeId> seeds;
  auto* refreshed = options.refreshed;
  if (refreshed) refreshed->assign(1, {});

  LazyHeap heap;
  for (NodeId v = 0; v < n; ++v) {
    heap.push({SpreadSum(g, seeds, v, spec), v, 0});
    ++result.exact_mg_computations;
    if (refreshed) refreshed->back().push_back(v);
  }

  std::uint64_t current = 0;
  std::uint32_t round = 0;
  while (seeds.size() < k && !heap.empty()) {
    LazyEntry top = heap.top();
    heap.pop();
    if (top.stamp == round) {
      seeds.push_back(top.node);
      result.Push(top.node, static_cast<double>(top.value) / runs);
      current += top.value;
      ++round;
      if (refreshed && seeds.size() < k) refreshed->emplace_back();
      continue;
    }
    const std::uint64_t sum = SpreadSum(g, seeds, top.node, spec);
    ++result.exact_mg_computations;
    if (refreshed) refreshed->back().push_back(top.node);
    heap.push({sum >= current ? sum - current : 0, top.node, round});
  }
  result.wall_time_ms = ElapsedMs(start);
  return result;
}

// ---------------------------------------------------------------------------
// Snapshots

Snapshot Snapshot::FromArcs(std::size_t node_count,
                            std::span<const std::pair<NodeId, NodeId>> arcs) {
  Snapshot s;
  s.removed_.assign(node_count, 0);
  s.offsets_.assign(node_count + 1, 0);
  for (const auto& [u, v] : arcs) {
    if (u >= node_count || v >= node_count) throw DomainError("snapshot arc outside [0, n)");
    ++s.offsets_[u + 1];
  }
  for (std::size_t i = 0; i < node_count; ++i) s.offsets_[i + 1] += s.offsets_[i];
  s.targets_.resize(arcs.size());
  std::vector<std::uint32_t> fill(s.offsets_.begin(), s.offsets_.end() - 1);
  for (const auto& [u, v] : arcs) s.targets_[fill[u]++] = v;
  return s;
}

Snapshot Snapshot::Sample(const Graph& g, Model model, std::uint64_t rng_seed,
                          std::uint64_t index) {
  const std::size_t n = g.node_count();
  std::vector<std::pair<NodeId, NodeId>> kept;
  if (model == Model::kIC) {
    const KeyedStream coins(rng_seed, RngDomain::kSnapshot, index, 0);
    for (NodeId u = 0; u < n; ++u) {
      const auto arcs = g.out(u);
      const std::size_t first = g.first_out_edge(u);
      for (std::size_t i = 0; i < arcs.size(); ++i) {
        if (coins.Uniform(first + i) < arcs[i].weight) kept.emplace_back(u, arcs[i].node);
      }
    }
  } else {
    const KeyedStream picks(rng_seed, RngDomain::kSnapshot, index, 1);
    for (NodeId v = 0; v < n; ++v) {
      const double x = picks.Uniform(v);
      double cumulative = 0.0;
      for (const Arc& a : g.in(v)) {
        cumulative += a.weight;
        if (x < cumulative) {
          kept.emplace_back(a.node, v);
          break;
        }
      }
    }
  }
  return FromArcs(n, kept);
}

std::size_t Snapshot::CountReachable(NodeId v, std::vector<std::uint32_t>& mark,
                                     std::uint32_t stamp, std::vector<NodeId>& queue) const {
  if (removed_[v]) return 0;
  queue.clear();
  queue.push_back(v);
  mark[v] = stamp;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (NodeId x : out(queue[head])) {
      if (mark[x] == stamp || removed_[x]) continue;
      mark[x] = stamp;
      queue.push_back(x);
    }
  }
  return queue.size();
}

std::vector<NodeId> Snapshot::Reachable(NodeId v) const {
  std::vector<std::uint32_t> mark(node_count(), 0);
  std::vector<NodeId> queue;
  CountReachable(v, mark, 1, queue);
  if (removed_[v]) queue.clear();
  return queue;
}

void Snapshot::RemoveReachable(NodeId v) {
  for (NodeId x : Reachable(v)) removed_[x] = 1;
}

std::size_t Snapshot::memory_bytes() const {
  return offsets_.capacity() * sizeof(std::uint32_t) + targets_.capacity() * sizeof(NodeId) +
         removed_.capacity();
}

namespace {

// Per-thread BFS scratch with wrap-safe stamps.
struct ReachScratch {
  explicit ReachScratch(std::size_t n) : mark(n, 0) {}
  std::uint64_t Total(const std::vector<Snapshot>& snapshots, NodeId v) {
    std::uint64_t total = 0;
    for (const Snapshot& s : snapshots) {
      if (++stamp == 0) {
        std::fill(mark.begin(), mark.end(), 0);
        stamp = 1;
      }
      total += s.CountReachable(v, mark, stamp, queue);
    }
    return total;
  }
  std::vector<std::uint32_t> mark;
  std::vector<NodeId> queue;
  std::uint32_t stamp = 0;
};

}  // namespace

SeedResult SgSelectOnSnapshots(std::vector<Snapshot> snapshots, std::size_t k, int threads) {
  const auto start = Clock::now();
  if (snapshots.empty()) throw DomainError("at least one snapshot is required");
  const std::size_t n = snapshots.front().node_count();
  CheckK(k, n);
  const double count = static_cast<double>(snapshots.size());

  SeedResult result;
  for (const Snapshot& s : snapshots) result.aux_bytes += s.memory_bytes();

  std::vector<std::uint64_t> initial(n, 0);
  const auto total_nodes = static_cast<std::int64_t>(n);
#pragma omp parallel num_threads(detail::ResolveThreads(threads))
  {
    ReachScratch scratch(n);
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t v = 0; v < total_nodes; ++v) {
      initial[v] = scratch.Total(snapshots, static_cast<NodeId>(v));
    }
  }
  result.exact_mg_computations = n;

  LazyHeap heap;
  for (NodeId v = 0; v < n; ++v) heap.push({initial[v], v, 0});

  ReachScratch scratch(n);
  std::uint32_t round = 0;
  while (result.seeds.size() < k && !heap.empty()) {
    LazyEntry top = heap.top();
    heap.pop();
    if (top.stamp != round) {
      heap.push({scratch.Total(snapshots, top.node), top.node, round});
      ++result.exact_mg_computations;
      continue;
    }
    if (top.value == 0) break;
    result.Push(top.node, static_cast<double>(top.value) / count);
    for (Snapshot& s : snapshots) s.RemoveReachable(top.node);
    ++round;
  }
  result.truncated = result.seeds.size() < k;
  result.wall_time_ms = ElapsedMs(start);
  return result;
}

SeedResult SgSelect(const Graph& g, std::size_t k, std::uint32_t snapshot_count, Model model,
                    std::uint64_t rng_seed, int threads) {
  const auto start = Clock::now();
  CheckK(k, g.node_count());
  if (snapshot_count < 1) throw DomainError("snapshot count must be at least 1");
  std::vector<Snapshot> snapshots(snapshot_count);
  const auto total = static_cast<std::int64_t>(snapshot_count);
#pragma omp parallel for num_threads(detail::ResolveThreads(threads)) schedule(dynamic, 1)
  for (std::int64_t i = 0; i < total; ++i) {
    snapshots[i] = Snapshot::Sample(g, model, rng_seed, static_cast<std::uint64_t>(i));
  }
  SeedResult result = SgSelectOnSnapshots(std::move(snapshots), k, threads);
  result.wall_time_ms = ElapsedMs(start);
  return result;
}

// ---------------------------------------------------------------------------
// Reverse influence sampling

namespace {

// Walks reversed arcs. `reversed` gives the arcs into a node and `first`
// their global index, so the same code serves a transpose (out side) and the
// original graph (in side) with identical draws.
template <typename Reversed, typename First>
std::vector<NodeId> ReverseSample(std::size_t n, Reversed reversed, First first_edge,
                                  NodeId root, const DiffusionSpec& spec, std::uint64_t draw) {
  if (root >= n) throw DomainError("root id outside [0, n)");
  const KeyedStream stream(spec.rng_seed, RngDomain::kRRSet, draw, 0);
  // Per-thread membership marks; an epoch bump clears them in O(1).
  thread_local std::vector<std::uint64_t> mark;
  thread_local std::uint64_t epoch = 0;
  if (mark.size() != n) {
    mark.assign(n, 0);
    epoch = 0;
  }
  ++epoch;
  std::vector<NodeId> set{root};
  mark[root] = epoch;
  if (spec.model == Model::kIC) {
    for (std::size_t head = 0; head < set.size(); ++head) {
      const NodeId v = set[head];
      const auto arcs = reversed(v);
      const std::size_t first = first_edge(v);
      for (std::size_t i = 0; i < arcs.size(); ++i) {
        const NodeId u = arcs[i].node;
        if (mark[u] != epoch && stream.Uniform(first + i) < arcs[i].weight) {
          mark[u] = epoch;
          set.push_back(u);
        }
      }
    }
    return set;
  }
  NodeId current = root;
  while (true) {
    const double x = stream.Uniform(current);
    double cumulative = 0.0;
    std::optional<NodeId> picked;
    for (const Arc& a : reversed(current)) {
      cumulative += a.weight;
      if (x < cumulative) {
        picked = a.node;
        break;
      }
    }
    if (!picked || mark[*picked] == epoch) break;
    mark[*picked] = epoch;
    set.push_back(*picked);
    current = *picked;
  }
  return set;
}

NodeId DrawRoot(std::size_t n, const DiffusionSpec& spec, std::uint64_t draw) {
  if (n == 0) throw DomainError("graph is empty");
  const KeyedStream roots(spec.rng_seed, RngDomain::kRRSet, draw, 1);
  return static_cast<NodeId>(roots.Below(0, n));
}

// RR set sampled straight from the in-arcs of g.
std::vector<NodeId> GenerateRRSetOnInArcs(const Graph& g, const DiffusionSpec& spec,
                                          std::uint64_t draw) {
  return ReverseSample(
      g.node_count(), [&](NodeId v) { return g.in(v); },
      [&](NodeId v) { return g.first_in_edge(v); }, DrawRoot(g.node_count(), spec, draw), spec,
      draw);
}

}  // namespace

std::vector<NodeId> GenerateRRSetFrom(const Graph& gT, NodeId root, const DiffusionSpec& spec,
                                      std::uint64_t draw) {
  return ReverseSample(
      gT.node_count(), [&](NodeId v) { return gT.out(v); },
      [&](NodeId v) { return gT.first_out_edge(v); }, root, spec, draw);
}

std::vector<NodeId> GenerateRRSet(const Graph& gT, const DiffusionSpec& spec,
                                  std::uint64_t draw) {
  return GenerateRRSetFrom(gT, DrawRoot(gT.node_count(), spec, draw), spec, draw);
}

void RRSetCollection::Add(std::span<const NodeId> set) {
  for (NodeId v : set) {
    if (v >= node_count_) throw DomainError("RR set member outside [0, n)");
  }
  nodes_.insert(nodes_.end(), set.begin(), set.end());
  offsets_.push_back(nodes_.size());
}

void RRSetCollection::BuildIndex() {
  cover_offsets_.assign(node_count_ + 1, 0);
  for (NodeId v : nodes_) ++cover_offsets_[v + 1];
  for (std::size_t v = 0; v < node_count_; ++v) cover_offsets_[v + 1] += cover_offsets_[v];
  cover_sets_.resize(nodes_.size());
  std::vector<std::uint64_t> fill(cover_offsets_.begin(), cover_offsets_.end() - 1);
  for (std::size_t i = 0; i < size(); ++i) {
    for (NodeId v : set(i)) cover_sets_[fill[v]++] = static_cast<std::uint32_t>(i);
  }
}

std::size_t RRSetCollection::memory_bytes() const {
  return offsets_.capacity() * sizeof(std::uint64_t) + nodes_.capacity() * sizeof(NodeId) +
         cover_offsets_.capacity() * sizeof(std::uint64_t) +
         cover_sets_.capacity() * sizeof(std::uint32_t);
}

CoverageResult GreedyMaxCoverage(const RRSetCollection& sets, std::size_t k) {
  const std::size_t n = sets.node_count();
  CheckK(k, n);
  std::vector<std::uint64_t> degree(n);
  for (NodeId v = 0; v < n; ++v) degree[v] = sets.cover(v).size();
  std::vector<char> covered(sets.size(), 0);
  std::vector<char> chosen(n, 0);

  CoverageResult result;
  for (std::size_t round = 0; round < k; ++round) {
    NodeId best = 0;
    bool found = false;
    for (NodeId v = 0; v < n; ++v) {
      if (chosen[v]) continue;
      if (!found || degree[v] > degree[best]) {
        best = v;
        found = true;
      }
    }
    if (!found) break;
    chosen[best] = 1;
    result.seeds.push_back(best);
    result.newly_covered.push_back(degree[best]);
    result.covered += degree[best];
    for (std::uint32_t i : sets.cover(best)) {
      if (covered[i]) continue;
      covered[i] = 1;
      for (NodeId x : sets.set(i)) --degree[x];
    }
  }
  return result;
}

SeedResult RisSelect(const Graph& g, std::size_t k, const RisOptions& options,
                     const DiffusionSpec& spec) {
  const auto start = Clock::now();
  const std::size_t n = g.node_count();
  CheckK(k, n);
  if (options.theta < 1) throw DomainError("theta must be at least 1");
  if (options.theta > options.theta_max) throw DomainError("theta exceeds theta_max");
  if (options.theta_max > std::uint64_t{UINT32_MAX}) {
    throw DomainError("theta_max must fit in 32 bits");
  }
  const int threads = detail::ResolveThreads(spec.threads);

  RRSetCollection sets(n);
  auto generate = [&](std::uint64_t from, std::uint64_t to) {
    // Generated in parallel, appended in draw order.
    constexpr std::uint64_t kBatch = 4096;
    std::vector<std::vector<NodeId>> batch;
    for (std::uint64_t lo = from; lo < to; lo += kBatch) {
      const std::uint64_t hi = std::min(to, lo + kBatch);
      batch.assign(hi - lo, {});
      const auto count = static_cast<std::int64_t>(hi - lo);
#pragma omp parallel for num_threads(threads) schedule(dynamic, 64)
      for (std::int64_t i = 0; i < count; ++i) {
        batch[i] = GenerateRRSetOnInArcs(g, spec, lo + static_cast<std::uint64_t>(i));
      }
      for (const auto& s : batch) sets.Add(s);
    }
    sets.BuildIndex();
  };

  std::uint64_t theta = options.theta;
  generate(0, theta);
  CoverageResult coverage = GreedyMaxCoverage(sets, k);
  bool capped = false;
  if (options.doubling) {
    while (true) {
      if (theta * 2 > options.theta_max) {
        capped = true;
        break;
      }
      const double before = static_cast<double>(coverage.covered) / static_cast<double>(theta);
      generate(theta, theta * 2);
      theta *= 2;
      coverage = GreedyMaxCoverage(sets, k);
      const double after = static_cast<double>(coverage.covered) / static_cast<double>(theta);
      if (before > 0.0 && std::abs(after - before) / before < options.tolerance) break;
    }
  }

  SeedResult result;
  const double scale = static_cast<double>(n) / static_cast<double>(theta);
  for (std::size_t i = 0; i < coverage.seeds.size(); ++i) {
    result.Push(coverage.seeds[i], static_cast<double>(coverage.newly_covered[i]) * scale);
  }
  const double fraction = static_cast<double>(coverage.covered) / static_cast<double>(theta);
  SpreadEstimate estimate;
  estimate.mean = static_cast<double>(n) * fraction;
  estimate.std_error = static_cast<double>(n) *
                       std::sqrt(fraction * (1.0 - fraction) / static_cast<double>(theta));
  estimate.runs = theta;
  result.own_estimate = estimate;
  result.rr_sets = sets.size();
  result.rr_entries = sets.entry_count();
  result.aux_bytes = sets.memory_bytes();
  result.sample_capped = capped;
  result.wall_time_ms = ElapsedMs(start);
  return result;
}

}  // namespace imax
