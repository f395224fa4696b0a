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

#include "imax/residual.hpp"

#include <algorithm>
#include <string>

#include "imax/error.hpp"

namespace imax {

ResidualState ResidualState::FromCapacities(std::vector<double> rc) {
  ResidualState state(rc.size());
  for (NodeId v = 0; v < rc.size(); ++v) {
    if (!(rc[v] >= 0.0 && rc[v] <= 1.0)) {
      throw DomainError("residual capacity of node " + std::to_string(v) +
                        " outside [0, 1]");
    }
    state.Lower(v, rc[v]);
  }
  return state;
}

void ResidualState::Lower(NodeId v, double value) {
  if (!alive_[v]) return;
  rc_[v] = std::min(rc_[v], std::max(0.0, value));
  if (rc_[v] <= kDiscardThreshold) {
    rc_[v] = 0.0;
    alive_[v] = 0;
    --alive_count_;
  }
}

void ResidualState::Apply(const ContributionMap& contributions, NodeId seed) {
  if (seed >= rc_.size()) throw DomainError("seed id outside [0, n)");
  if (!alive_[seed]) throw PreconditionError("seed is not alive");
  for (const Contribution& c : contributions) {
    if (!(c.phi >= 0.0 && c.phi <= 1.0)) {
      throw DomainError("contribution outside [0, 1]");
    }
    if (c.node >= rc_.size()) throw DomainError("contribution for unknown node");
  }
  Lower(seed, 0.0);
  for (const Contribution& c : contributions) {
    if (c.node == seed || !alive_[c.node]) continue;
    Lower(c.node, rc_[c.node] - c.phi);
  }
}

}  // namespace imax
