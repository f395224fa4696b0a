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

// Single-cascade kernels shared by the spread estimator and MCSMG.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "imax/graph.hpp"
#include "imax/rng.hpp"

namespace imax::detail {

// Reusable per-thread scratch space; one run costs O(touched), not O(n).
class CascadeWorkspace {
 public:
  explicit CascadeWorkspace(std::size_t n)
      : mark_(n, 0), threshold_(n, 0.0), accumulated_(n, 0.0) {
    queue_.reserve(64);
  }

  // Runs one IC cascade from `initial`. Edge e = (tmp, v) with global id
  // `edge` fires when stream.Uniform(edge) < probability(tmp, arc).
  // `participates(v)` gates which nodes may activate. Calls on_activate(v)
  // for every node activated beyond `initial`. Returns the final active count.
  template <typename Participates, typename Probability, typename OnActivate>
  std::size_t RunIc(const Graph& g, std::span<const NodeId> initial,
                    const KeyedStream& stream, Participates&& participates,
                    Probability&& probability, OnActivate&& on_activate) {
    NextEpoch();
    queue_.clear();
    for (NodeId s : initial) {
      if (mark_[s] == epoch_) continue;
      mark_[s] = epoch_;
      queue_.push_back(s);
    }
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const NodeId tmp = queue_[head];
      const auto arcs = g.out(tmp);
      const std::size_t first = g.first_out_edge(tmp);
      for (std::size_t i = 0; i < arcs.size(); ++i) {
        const NodeId v = arcs[i].node;
        if (mark_[v] == epoch_ || !participates(v)) continue;
        if (stream.Uniform(first + i) < probability(tmp, arcs[i])) {
          mark_[v] = epoch_;
          queue_.push_back(v);
          on_activate(v);
        }
      }
    }
    return queue_.size();
  }

  // Runs one LT cascade. Node v draws theta_v = 1 - stream.Uniform(v) in
  // (0, 1] on first contact and activates once its accumulated in-weight
  // from active nodes reaches theta_v. `weight(tmp, arc)` is the amount an
  // active tmp adds to arc.node.
  template <typename Participates, typename Weight, typename OnActivate>
  std::size_t RunLt(const Graph& g, std::span<const NodeId> initial,
                    const KeyedStream& stream, Participates&& participates,
                    Weight&& weight, OnActivate&& on_activate) {
    NextEpoch();
    queue_.clear();
    // Contacted nodes carry the current epoch; active ones hold kActive.
    for (NodeId s : initial) {
      if (mark_[s] == epoch_) continue;
      mark_[s] = epoch_;
      accumulated_[s] = kActive;
      queue_.push_back(s);
    }
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const NodeId tmp = queue_[head];
      for (const Arc& arc : g.out(tmp)) {
        const NodeId v = arc.node;
        if (mark_[v] != epoch_) {
          if (!participates(v)) continue;
          mark_[v] = epoch_;
          threshold_[v] = 1.0 - stream.Uniform(v);
          accumulated_[v] = 0.0;
        } else if (accumulated_[v] == kActive) {
          continue;
        }
        accumulated_[v] += weight(tmp, arc);
        if (accumulated_[v] >= threshold_[v]) {
          accumulated_[v] = kActive;
          queue_.push_back(v);
          on_activate(v);
        }
      }
    }
    return queue_.size();
  }

  // Nodes active at the end of the last run, initial nodes first.
  std::span<const NodeId> active() const { return queue_; }

 private:
  static constexpr double kActive = std::numeric_limits<double>::infinity();

  void NextEpoch() {
    if (++epoch_ == 0) {
      std::fill(mark_.begin(), mark_.end(), 0);
      epoch_ = 1;
    }
  }

  std::vector<std::uint32_t> mark_;
  std::vector<double> threshold_;
  std::vector<double> accumulated_;
  std::vector<NodeId> queue_;
  std::uint32_t epoch_ = 0;
};

}  // namespace imax::detail
