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
#include <cstdint>
#include <optional>
#include <vector>

#include "imax/diffusion.hpp"
#include "imax/graph.hpp"
#include "imax/residual.hpp"

namespace imax {

// Compact fingerprint of the contribution map committed with one seed.
struct ContributionTrace {
  std::size_t count = 0;
  double sum = 0.0;
  std::uint64_t digest = 0;

  static ContributionTrace Of(const ContributionMap& contributions);
  friend bool operator==(const ContributionTrace&, const ContributionTrace&) = default;
};

// Output of every selection algorithm.
struct SeedResult {
  std::vector<NodeId> seeds;
  // Marginal gain credited to seeds[i] when it was chosen.
  std::vector<double> gains;
  // delta[i] = gains[0] + ... + gains[i].
  std::vector<double> delta;
  // RCELF only: one entry per committed seed.
  std::vector<ContributionTrace> contribution_trace;
  // The algorithm's own spread estimate, when it has one (RIS coverage).
  std::optional<SpreadEstimate> own_estimate;

  std::uint64_t exact_mg_computations = 0;
  std::uint64_t bound_computations = 0;
  std::uint64_t bound_fallbacks = 0;
  std::uint64_t rr_sets = 0;
  std::uint64_t rr_entries = 0;
  // Bytes of algorithm-owned sample storage (snapshots, RR sets).
  std::size_t aux_bytes = 0;
  // Fewer than k seeds: every remaining node was exhausted.
  bool truncated = false;
  // RIS doubling stopped at theta_max before the coverage settled.
  bool sample_capped = false;
  double wall_time_ms = 0.0;

  double total_delta() const { return delta.empty() ? 0.0 : delta.back(); }
  void Push(NodeId seed, double gain) {
    seeds.push_back(seed);
    gains.push_back(gain);
    delta.push_back(total_delta() + gain);
  }
};

}  // namespace imax
