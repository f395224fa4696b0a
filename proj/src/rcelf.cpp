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

#include "imax/rcelf.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <string>

#include "cascade.hpp"
#include "imax/error.hpp"
#include "imax/rng.hpp"
#include "parallel.hpp"

namespace imax {

ContributionTrace ContributionTrace::Of(const ContributionMap& contributions) {
  // FNV-1a over (node, bit pattern of phi).
  ContributionTrace t;
  t.digest = 0xcbf29ce484222325ULL;
  auto feed = [&](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      t.digest ^= (word >> (8 * i)) & 0xff;
      t.digest *= 0x100000001b3ULL;
    }
  };
  for (const Contribution& c : contributions) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &c.phi, sizeof(bits));
    feed(c.node);
    feed(bits);
    t.sum += c.phi;
  }
  t.count = contributions.size();
  return t;
}

struct Mcsmg::Scratch {
  explicit Scratch(std::size_t n) : cascade(n), counts(n, 0) {}
  detail::CascadeWorkspace cascade;
  std::vector<std::uint32_t> counts;
  std::vector<NodeId> touched;
};

Mcsmg::Mcsmg(const Graph& g)
    : graph_(&g), scratch_(std::make_unique<Scratch>(g.node_count())) {}
Mcsmg::~Mcsmg() = default;
Mcsmg::Mcsmg(Mcsmg&&) noexcept = default;
Mcsmg& Mcsmg::operator=(Mcsmg&&) noexcept = default;

McsmgResult Mcsmg::Evaluate(const ResidualState& state, NodeId u,
                            const DiffusionSpec& spec) {
  const Graph& g = *graph_;
  spec.Validate();
  if (u >= g.node_count()) throw DomainError("candidate id outside [0, n)");
  if (state.size() != g.node_count()) {
    throw PreconditionError("residual state does not match graph");
  }
  if (!state.alive(u)) throw PreconditionError("candidate is not alive");

  Scratch& s = *scratch_;
  s.touched.clear();
  auto alive = [&state](NodeId v) { return state.alive(v); };
  auto count = [&s](NodeId v) {
    if (s.counts[v]++ == 0) s.touched.push_back(v);
  };
  const NodeId initial[1] = {u};
  const std::uint32_t runs = spec.sim_count;
  std::uint64_t sum = 0;
  std::uint64_t sum_squares = 0;
  for (std::uint32_t j = 0; j < runs; ++j) {
    const KeyedStream stream(spec.rng_seed, RngDomain::kMcsmg, u, j);
    std::uint64_t reached = 0;
    if (spec.model == Model::kIC) {
      reached = s.cascade.RunIc(
          g, initial, stream, alive,
          [&state](NodeId tmp, const Arc& a) { return state.rc(tmp) * a.weight; }, count);
    } else {
      reached = s.cascade.RunLt(
          g, initial, stream, alive, [](NodeId, const Arc& a) { return a.weight; }, count);
    }
    sum += reached;
    sum_squares += reached * reached;
  }

  const double r = static_cast<double>(runs);
  const double rc_u = state.rc(u);
  McsmgResult result;
  result.mg = rc_u;
  std::sort(s.touched.begin(), s.touched.end());
  result.contributions.reserve(s.touched.size());
  for (NodeId v : s.touched) {
    const double phi = std::min(state.rc(v), static_cast<double>(s.counts[v]) / r * rc_u);
    s.counts[v] = 0;
    if (phi <= 0.0) continue;
    result.contributions.push_back({v, phi});
    result.mg += phi;
  }
  result.reach = static_cast<double>(sum) / r;
  if (runs > 1) {
    const double var = std::max(
        0.0, (static_cast<double>(sum_squares) - static_cast<double>(sum) * result.reach) /
                 (r - 1.0));
    result.reach_std_error = std::sqrt(var / r);
  }
  return result;
}

McsmgResult ComputeMcsmg(const Graph& g, const ResidualState& state, NodeId u,
                         const DiffusionSpec& spec) {
  return Mcsmg(g).Evaluate(state, u, spec);
}

UpperBound UpperBoundMg(const Graph& g, const ResidualState& state, NodeId u,
                        std::span<const NeighborRecord> records) {
  if (u >= g.node_count()) throw DomainError("candidate id outside [0, n)");
  const double rc_u = state.rc(u);
  UpperBound bound;
  if (rc_u <= 0.0) return bound;
  double reach = 1.0;
  double variance = 0.0;
  for (const Arc& a : g.out(u)) {
    if (!state.alive(a.node)) continue;
    const NeighborRecord* record =
        a.node < records.size() && records[a.node].known() ? &records[a.node] : nullptr;
    if (record == nullptr) {
      ++bound.fallbacks;
      reach += a.weight * static_cast<double>(g.node_count());
      continue;
    }
    reach += a.weight * record->reach;
    variance += a.weight * a.weight * record->std_error * record->std_error;
  }
  bound.value = rc_u * reach;
  bound.std_error = rc_u * std::sqrt(variance);
  return bound;
}

namespace {

struct HeapEntry {
  double value;
  NodeId node;
  RefreshEvent::Kind kind;
  std::uint32_t stamp;
  double std_error;
};

// Max-heap on value; ties go to the smaller node id.
struct HeapOrder {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    if (a.value != b.value) return a.value < b.value;
    return a.node > b.node;
  }
};

// The best exact evaluation of the current iteration, kept so the winner's
// contributions need not be re-simulated.
struct BestExact {
  static constexpr NodeId kNone = std::numeric_limits<NodeId>::max();
  NodeId node = kNone;
  double value = 0.0;
  ContributionMap contributions;

  void Offer(NodeId v, double mg, ContributionMap&& c) {
    if (node == kNone || mg > value || (mg == value && v < node)) {
      node = v;
      value = mg;
      contributions = std::move(c);
    }
  }
};

// Nodes whose initial gain is bounded rather than simulated: a greedy
// independent set in ascending degree order, so every bounded node's
// out-neighbours get exact initial results.
std::vector<char> ChooseBoundedAtStart(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  auto degree = [&g](NodeId v) { return g.out(v).size() + g.in(v).size(); };
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return degree(a) < degree(b); });
  std::vector<char> bounded(n, 0);
  std::vector<char> blocked(n, 0);
  for (NodeId v : order) {
    if (blocked[v]) continue;
    bounded[v] = 1;
    for (const Arc& a : g.out(v)) blocked[a.node] = 1;
    for (const Arc& a : g.in(v)) blocked[a.node] = 1;
  }
  return bounded;
}

}  // namespace

SeedResult SelectSeedsRcelf(const Graph& g, std::size_t k, const DiffusionSpec& spec,
                            const RcelfOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  spec.Validate();
  const std::size_t n = g.node_count();
  if (k < 1) throw DomainError("k must be at least 1");
  if (k > n) throw DomainError("k = " + std::to_string(k) + " exceeds n = " + std::to_string(n));

  const bool filter = options.use_bound_filter;
  auto trace = [&](NodeId v, std::uint32_t it, RefreshEvent::Kind kind, double value,
                   double se) {
    if (options.trace) options.trace->push_back({v, it, kind, value, se});
  };

  SeedResult result;
  ResidualState state = InitResidual(g);
  std::vector<NeighborRecord> records(n);
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapOrder> heap;
  BestExact best;

  // Initial gains against the empty seed set.
  {
    const std::vector<char> bounded = filter ? ChooseBoundedAtStart(g) : std::vector<char>(n, 0);
    std::vector<NodeId> exact_nodes;
    for (NodeId v = 0; v < n; ++v) {
      if (!bounded[v]) exact_nodes.push_back(v);
    }
    std::vector<double> mg(n, 0.0);
    const int threads = detail::ResolveThreads(spec.threads);
    const auto count = static_cast<std::int64_t>(exact_nodes.size());
    std::vector<BestExact> local_best(static_cast<std::size_t>(threads));
#pragma omp parallel num_threads(threads)
    {
      Mcsmg engine(g);
#ifdef _OPENMP
      BestExact& mine = local_best[static_cast<std::size_t>(omp_get_thread_num())];
#else
      BestExact& mine = local_best[0];
#endif
#pragma omp for schedule(dynamic, 64)
      for (std::int64_t i = 0; i < count; ++i) {
        const NodeId v = exact_nodes[static_cast<std::size_t>(i)];
        McsmgResult r = engine.Evaluate(state, v, spec);
        mg[v] = r.mg;
        records[v] = {r.reach, r.reach_std_error};
        mine.Offer(v, r.mg, std::move(r.contributions));
      }
    }
    for (BestExact& b : local_best) {
      if (b.node != BestExact::kNone) best.Offer(b.node, b.value, std::move(b.contributions));
    }
    result.exact_mg_computations += exact_nodes.size();
    for (NodeId v : exact_nodes) {
      trace(v, 0, RefreshEvent::Kind::kExact, mg[v], records[v].std_error);
      heap.push({mg[v], v, RefreshEvent::Kind::kExact, 0, records[v].std_error});
    }
    // Bounded nodes form an independent set, so none of these bounds reads
    // another bounded node's record.
    for (NodeId v = 0; v < n; ++v) {
      if (!bounded[v]) continue;
      const UpperBound b = UpperBoundMg(g, state, v, records);
      ++result.bound_computations;
      result.bound_fallbacks += b.fallbacks;
      trace(v, 0, RefreshEvent::Kind::kBound, b.value, b.std_error);
      heap.push({b.value, v, RefreshEvent::Kind::kBound, 0, b.std_error});
      // With RC = 1 the bound is also a bound on v's reach.
      if (b.fallbacks == 0) records[v] = {b.value, b.std_error};
    }
  }

  Mcsmg engine(g);
  for (std::uint32_t it = 0; it < k; ++it) {
    if (it > 0) best = BestExact{};
    std::optional<HeapEntry> chosen;
    while (!heap.empty()) {
      const HeapEntry top = heap.top();
      heap.pop();
      if (!state.alive(top.node)) continue;
      if (top.stamp == it && top.kind == RefreshEvent::Kind::kExact) {
        chosen = top;
        break;
      }
      if (filter && top.stamp < it) {
        const UpperBound b = UpperBoundMg(g, state, top.node, records);
        ++result.bound_computations;
        result.bound_fallbacks += b.fallbacks;
        // The stale value still bounds the current gain; keep the tighter.
        const bool use_new = b.value < top.value;
        const double value = use_new ? b.value : top.value;
        const double se = use_new ? b.std_error : top.std_error;
        trace(top.node, it, RefreshEvent::Kind::kBound, value, se);
        heap.push({value, top.node, RefreshEvent::Kind::kBound, it, se});
        continue;
      }
      McsmgResult r = engine.Evaluate(state, top.node, spec);
      ++result.exact_mg_computations;
      records[top.node] = {r.reach, r.reach_std_error};
      const double se = r.std_error(state.rc(top.node));
      trace(top.node, it, RefreshEvent::Kind::kExact, r.mg, se);
      heap.push({r.mg, top.node, RefreshEvent::Kind::kExact, it, se});
      best.Offer(top.node, r.mg, std::move(r.contributions));
    }
    if (!chosen) {
      result.truncated = true;
      break;
    }
    const NodeId seed = chosen->node;
    ContributionMap contributions;
    if (best.node == seed) {
      contributions = std::move(best.contributions);
    } else {
      // Unreachable while the heap discipline holds; the evaluation is
      // deterministic, so recomputing yields the same map.
      contributions = engine.Evaluate(state, seed, spec).contributions;
    }
    result.Push(seed, chosen->value);
    result.contribution_trace.push_back(ContributionTrace::Of(contributions));
    state.Apply(contributions, seed);
  }

  result.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();
  return result;
}

}  // namespace imax
