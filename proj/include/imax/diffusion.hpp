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

// Diffusion semantics: the forward Monte-Carlo spread estimator and exact
// path-probability oracles for small acyclic graphs.

#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "imax/graph.hpp"
#include "imax/residual.hpp"

namespace imax {

enum class Model { kIC, kLT };

std::string_view ModelName(Model model);

// Everything that determines a stochastic run. WC is IC over a graph whose
// weights came from WeightPolicy::GeneralizedInDegree; the weights live in
// the Graph, `weight_policy` records how they were produced.
struct DiffusionSpec {
  Model model = Model::kIC;
  WeightPolicy weight_policy = WeightPolicy::GeneralizedInDegree(1.0);
  std::uint32_t sim_count = 200;
  std::uint64_t rng_seed = 0;
  // Worker threads; 0 uses the runtime default. Never affects results.
  int threads = 0;

  void Validate() const;
};

struct SpreadEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t runs = 0;
};

// Raw sums over runs of the activated-set size, kept as integers so that
// estimates with common random numbers compare exactly.
struct SpreadTotals {
  std::uint64_t sum = 0;
  std::uint64_t sum_squares = 0;
  std::uint64_t runs = 0;

  SpreadEstimate Estimate() const;
};

// Mean size of the final active set over spec.sim_count runs. IC: each edge
// (u,v) fires once with probability w(u,v). LT: each node draws its threshold
// once per run and activates when the summed weight of active in-neighbours
// reaches it. Run j, draw d always reads the same random number, so repeated
// calls with one rng_seed share their sampled worlds.
SpreadEstimate SimulateSpread(const Graph& g, std::span<const NodeId> seeds,
                              const DiffusionSpec& spec);
SpreadTotals SimulateSpreadTotals(const Graph& g, std::span<const NodeId> seeds,
                                  const DiffusionSpec& spec);

// LT activation probability of `target` from `source` alone: the sum over all
// source->target paths through alive nodes of the product of edge weights.
// Dead nodes neither activate nor relay; capacities of alive nodes do not
// scale LT paths (residual credit is applied by the caller as RC(source) *
// probability). Throws UnsupportedInputError if the alive part reachable from
// `source` has a cycle.
double ExactLtProbability(const Graph& g, NodeId source, NodeId target,
                          const ResidualState& state);

// IC activation probability when all source->target paths are pairwise
// edge-disjoint: 1 - prod_P (1 - prod_{i<m} RC(v_i) w(v_i, v_i+1)).
// Throws SharedEdgeError when two paths share an edge, UnsupportedInputError
// on cycles.
double ExactIcSharedNothingProbability(const Graph& g, NodeId source, NodeId target,
                                       const ResidualState& state);

}  // namespace imax
