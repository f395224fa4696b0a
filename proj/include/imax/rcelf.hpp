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

// Residual-capacity seed selection (RCELF).
//
// Every node starts with residual capacity 1. The marginal gain of a
// candidate u is its own capacity plus the capacity it would claim from the
// nodes it influences, estimated by one batch of Monte-Carlo cascades on the
// residual graph (MCSMG). Selecting a seed subtracts those claims from the
// influenced nodes, so later candidates compete only for what is left.
//
// Selection runs CELF's lazy max-heap over these gains. An optional filter
// replaces the refresh of a stale heap entry by a constant-cost upper bound
// assembled from the out-neighbours' most recent simulation results, and
// only runs MCSMG when such a bound reaches the top of the heap.

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "imax/diffusion.hpp"
#include "imax/graph.hpp"
#include "imax/residual.hpp"
#include "imax/seed_result.hpp"

namespace imax {

struct McsmgResult {
  // RC(u) + sum of contributions.
  double mg = 0.0;
  ContributionMap contributions;
  // Mean number of alive nodes active per cascade, u included, before any
  // residual crediting or capping.
  double reach = 1.0;
  double reach_std_error = 0.0;

  // Standard error of mg, taken as RC(u) times that of reach.
  double std_error(double rc_u) const { return rc_u * reach_std_error; }
};

// Batch marginal-gain estimator. Holds O(n) scratch space so repeated
// evaluations cost only what the cascades touch; one instance per thread.
//
// Cascade j for candidate u reads random numbers keyed by (seed, u, j) and
// never by the iteration, so re-evaluating u after capacities shrank replays
// the same worlds on a smaller residual graph and can only lose activations.
//
// IC: edge (tmp, v) fires with probability RC(tmp) * w(tmp, v).
// LT: an active tmp adds w(tmp, v) to v's accumulator against theta_v.
// Only alive nodes activate. With count(v) activations over r cascades,
// phi(u, v) = min(RC(v), count(v) / r * RC(u)).
class Mcsmg {
 public:
  explicit Mcsmg(const Graph& g);
  ~Mcsmg();
  Mcsmg(Mcsmg&&) noexcept;
  Mcsmg& operator=(Mcsmg&&) noexcept;

  McsmgResult Evaluate(const ResidualState& state, NodeId u, const DiffusionSpec& spec);

 private:
  struct Scratch;
  const Graph* graph_;
  std::unique_ptr<Scratch> scratch_;
};

McsmgResult ComputeMcsmg(const Graph& g, const ResidualState& state, NodeId u,
                         const DiffusionSpec& spec);

// What the bound needs to know about a node from its latest evaluation.
struct NeighborRecord {
  // Mean reach (see McsmgResult::reach) under the state it was measured in,
  // or an upper bound on it. Negative when nothing is known.
  double reach = -1.0;
  double std_error = 0.0;

  bool known() const { return reach >= 0.0; }
};

struct UpperBound {
  double value = 0.0;
  double std_error = 0.0;
  // Out-neighbours without a record, each bounded by reach = n.
  std::size_t fallbacks = 0;
};

// RC(u) * (1 + sum over alive v in Out(u) of w(u,v) * reach_o(v)).
//
// Capacities only shrink and nodes only die, so the reach a node had under an
// earlier state bounds its reach now. A cascade from u reaches each v with
// probability at most w(u, v) and then spreads no further than v's own
// cascade, and the gain of u never exceeds RC(u) times its reach.
UpperBound UpperBoundMg(const Graph& g, const ResidualState& state, NodeId u,
                        std::span<const NeighborRecord> records);

// One refresh of a heap entry, recorded when a trace is requested.
struct RefreshEvent {
  enum class Kind { kExact, kBound };
  NodeId node;
  std::uint32_t iteration;
  Kind kind;
  double value;
  double std_error;
};

struct RcelfOptions {
  bool use_bound_filter = true;
  std::vector<RefreshEvent>* trace = nullptr;
};

// Selects up to k seeds. Requires 1 <= k <= n. A seed is only committed when
// the heap root holds an exact gain computed against the current residual
// state; ties go to the smaller node id.
SeedResult SelectSeedsRcelf(const Graph& g, std::size_t k, const DiffusionSpec& spec,
                            const RcelfOptions& options = {});

}  // namespace imax
