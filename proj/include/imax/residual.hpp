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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "imax/graph.hpp"

namespace imax {

// Residual capacities at or below this value count as exhausted.
inline constexpr double kDiscardThreshold = 1e-12;

// Portion phi of node's residual capacity credited to a candidate seed.
struct Contribution {
  NodeId node;
  double phi;

  friend bool operator==(const Contribution&, const Contribution&) = default;
};

// Sorted by node id, one entry per influenced node.
using ContributionMap = std::vector<Contribution>;

// Per-node residual capacity RC(v) in [0, 1] and the derived alive flag.
//
// Single writer: one selection loop owns and mutates a state. Capacities only
// ever decrease through Apply().
class ResidualState {
 public:
  ResidualState() = default;
  // Every node starts with RC = 1 and alive.
  explicit ResidualState(std::size_t node_count)
      : rc_(node_count, 1.0), alive_(node_count, 1), alive_count_(node_count) {}

  // Arbitrary capacities, for fixtures that start mid-run. Values must lie in
  // [0, 1].
  static ResidualState FromCapacities(std::vector<double> rc);

  std::size_t size() const { return rc_.size(); }
  std::size_t alive_count() const { return alive_count_; }
  double rc(NodeId v) const { return rc_[v]; }
  bool alive(NodeId v) const { return alive_[v] != 0; }
  std::span<const double> capacities() const { return rc_; }

  // Commits `seed`: RC(seed) drops to 0, and each listed node loses its phi
  // (floored at 0). Entries for dead nodes or for the seed itself are ignored.
  void Apply(const ContributionMap& contributions, NodeId seed);

 private:
  void Lower(NodeId v, double value);

  std::vector<double> rc_;
  std::vector<char> alive_;
  std::size_t alive_count_ = 0;
};

inline ResidualState InitResidual(const Graph& g) { return ResidualState(g.node_count()); }

inline void ApplyContributions(ResidualState& state, const ContributionMap& contributions,
                               NodeId seed) {
  state.Apply(contributions, seed);
}

}  // namespace imax
