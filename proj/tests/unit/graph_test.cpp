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

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "imax/error.hpp"
#include "imax/graph.hpp"
#include "imax/residual.hpp"

namespace imax {
namespace {

Graph Parse(const std::string& text, bool directed, WeightPolicy policy) {
  std::istringstream in(text);
  return ParseEdgeList(in, directed, policy);
}

double WeightOf(const Graph& g, NodeId u, NodeId v) {
  for (const Arc& a : g.out(u)) {
    if (a.node == v) return a.weight;
  }
  return -1.0;
}

TEST_CASE("in-degree weights split evenly over a node's in-edges") {
  // Five edges; node 12 has two in-edges.
  const Graph g = Parse("10 12\n11 12\n12 13\n13 14\n10 11\n", true,
                        WeightPolicy::GeneralizedInDegree(1.0));
  REQUIRE(g.node_count() == 5);
  REQUIRE(g.edge_count() == 5);
  const NodeId a = *g.FindLabel(10), b = *g.FindLabel(11), c = *g.FindLabel(12);
  CHECK(WeightOf(g, a, c) == 0.5);
  CHECK(WeightOf(g, b, c) == 0.5);
  CHECK(WeightOf(g, a, b) == 1.0);
}

TEST_CASE("empty input yields an empty graph") {
  const Graph g = Parse("", true, WeightPolicy::GeneralizedInDegree(1.0));
  CHECK(g.node_count() == 0);
  CHECK(g.edge_count() == 0);
  const Graph only_comments = Parse("# nothing\n\n   \n", false, WeightPolicy::Explicit());
  CHECK(only_comments.node_count() == 0);
}

TEST_CASE("activeness above the in-degree clamps to probability 1") {
  const Graph g = Parse("0 1\n", true, WeightPolicy::GeneralizedInDegree(3.0));
  CHECK(WeightOf(g, 0, 1) == 1.0);
}

TEST_CASE("weights sum to min(1, rho) over every in-list") {
  for (double rho : {0.1, 0.5, 1.0}) {
    const Graph g = testing::RandomDigraph(60, 0.1, 7, WeightPolicy::GeneralizedInDegree(rho));
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (g.in(v).empty()) continue;
      double sum = 0.0;
      for (const Arc& a : g.in(v)) sum += a.weight;
      CHECK(std::abs(sum - std::min(1.0, rho)) < 1e-9);
    }
  }
}

TEST_CASE("every edge appears once on each side with the same weight") {
  const Graph g = testing::RandomDigraph(40, 0.15, 3, WeightPolicy::GeneralizedInDegree(0.7));
  std::size_t in_total = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) in_total += g.in(v).size();
  CHECK(in_total == g.edge_count());
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (const Arc& a : g.out(u)) {
      int matches = 0;
      for (const Arc& back : g.in(a.node)) {
        if (back.node == u) {
          ++matches;
          CHECK(back.weight == a.weight);
        }
      }
      CHECK(matches == 1);
    }
  }
}

TEST_CASE("undirected input is stored in both orientations") {
  const Graph g = Parse("1 2\n2 3\n", false, WeightPolicy::UniformConstant(0.3));
  CHECK(g.edge_count() == 4);
  CHECK(WeightOf(g, 0, 1) == doctest::Approx(0.3));
  CHECK(WeightOf(g, 1, 0) == doctest::Approx(0.3));
  CHECK(WeightOf(g, 2, 1) == doctest::Approx(0.3));
  CHECK_FALSE(g.directed());
}

TEST_CASE("self-loops are dropped and the first duplicate wins") {
  const Graph g = Parse("0 0 0.9\n0 1 0.25\n0 1 0.75\n", true, WeightPolicy::Explicit());
  CHECK(g.edge_count() == 1);
  CHECK(WeightOf(g, 0, 1) == 0.25);
}

TEST_CASE("sparse original ids are compacted in ascending order") {
  const Graph g = Parse("900 5\n5 -3\n", true, WeightPolicy::GeneralizedInDegree(1.0));
  REQUIRE(g.node_count() == 3);
  CHECK(g.label(0) == -3);
  CHECK(g.label(1) == 5);
  CHECK(g.label(2) == 900);
  CHECK(g.FindLabel(900) == NodeId{2});
  CHECK_FALSE(g.FindLabel(4).has_value());
  std::ostringstream ids;
  WriteIdMap(g, ids);
  CHECK(ids.str() == "original_id,dense_id\n-3,0\n5,1\n900,2\n");
}

TEST_CASE("CRLF line endings and tabs are accepted") {
  const Graph g = Parse("# header\r\n1\t2\t0.5\r\n2 3 0.25\r\n", true, WeightPolicy::Explicit());
  CHECK(g.edge_count() == 2);
  CHECK(WeightOf(g, 0, 1) == 0.5);
}

TEST_CASE("malformed lines report their line number") {
  try {
    Parse("0 1\n# ok\n0 1 2 3\n", true, WeightPolicy::GeneralizedInDegree(1.0));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(Parse("0 x\n", true, WeightPolicy::GeneralizedInDegree(1.0)), ParseError);
  CHECK_THROWS_AS(Parse("0\n", true, WeightPolicy::GeneralizedInDegree(1.0)), ParseError);
  CHECK_THROWS_AS(Parse("0 1 zz\n", true, WeightPolicy::Explicit()), ParseError);
}

TEST_CASE("explicit weights need a weight column inside [0, 1]") {
  CHECK_THROWS_AS(Parse("0 1\n", true, WeightPolicy::Explicit()), FormatError);
  CHECK_THROWS_AS(Parse("0 1 1.5\n", true, WeightPolicy::Explicit()), DomainError);
  CHECK_THROWS_AS(Parse("0 1 -0.1\n", true, WeightPolicy::Explicit()), DomainError);
  // A third column is ignored by the derived policies.
  CHECK_NOTHROW(Parse("0 1 7\n", true, WeightPolicy::GeneralizedInDegree(1.0)));
}

TEST_CASE("weight policy factories validate their parameter") {
  CHECK_THROWS_AS(WeightPolicy::GeneralizedInDegree(0.0), DomainError);
  CHECK_THROWS_AS(WeightPolicy::GeneralizedInDegree(-1.0), DomainError);
  CHECK_THROWS_AS(WeightPolicy::UniformConstant(1.01), DomainError);
  CHECK_NOTHROW(WeightPolicy::UniformConstant(0.0));
}

TEST_CASE("transpose swaps the sides and is an involution") {
  const Graph g = testing::diamond::Make();
  const Graph t = Transpose(g);
  CHECK(t.out(testing::diamond::d).size() == 2);
  CHECK(WeightOf(t, testing::diamond::c, testing::diamond::b) == 0.5);
  CHECK(Transpose(t) == g);
  CHECK_FALSE(t == g);

  const Graph empty = Parse("", true, WeightPolicy::Explicit());
  CHECK(Transpose(empty) == empty);

  const Graph single = testing::Directed(2, {{0, 1, 0.5}});
  const Graph flipped = Transpose(single);
  REQUIRE(flipped.out(1).size() == 1);
  CHECK(flipped.out(1)[0] == Arc{0, 0.5});
  CHECK(flipped.out(0).empty());
}

TEST_CASE("loading is deterministic") {
  const std::string text = "3 1\n1 2\n2 3\n7 1\n";
  CHECK(Parse(text, false, WeightPolicy::GeneralizedInDegree(0.4)) ==
        Parse(text, false, WeightPolicy::GeneralizedInDegree(0.4)));
}

TEST_CASE("edge list writer round-trips through the explicit parser") {
  const Graph g = testing::RandomDigraph(30, 0.2, 11, WeightPolicy::GeneralizedInDegree(0.3));
  std::ostringstream out;
  WriteEdgeList(g, out);
  const Graph back = Parse(out.str(), true, WeightPolicy::Explicit());
  // Isolated nodes do not survive an edge list, so compare arcs per label.
  for (NodeId u = 0; u < back.node_count(); ++u) {
    const NodeId original = static_cast<NodeId>(back.label(u));
    REQUIRE(back.out(u).size() == g.out(original).size());
    for (std::size_t i = 0; i < back.out(u).size(); ++i) {
      CHECK(back.label(back.out(u)[i].node) == g.out(original)[i].node);
      CHECK(back.out(u)[i].weight == g.out(original)[i].weight);
    }
  }
}

// ---------------------------------------------------------------------------
// Residual state

TEST_CASE("fresh residual state is all ones and alive") {
  const ResidualState s = InitResidual(testing::diamond::Make());
  CHECK(s.size() == 4);
  CHECK(s.alive_count() == 4);
  for (NodeId v = 0; v < 4; ++v) {
    CHECK(s.rc(v) == 1.0);
    CHECK(s.alive(v));
  }
  CHECK(InitResidual(Graph{}).size() == 0);
}

TEST_CASE("applying a seed's contributions lowers capacities") {
  using namespace testing::diamond;
  ResidualState s = InitResidual(Make());
  s.Apply({{b, 0.7}}, a);
  CHECK(s.rc(b) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(s.rc(a) == 0.0);
  CHECK_FALSE(s.alive(a));
  CHECK(s.alive_count() == 3);
}

TEST_CASE("zero contributions only retire the seed") {
  ResidualState s(4);
  s.Apply({{1, 0.0}, {2, 0.0}}, 0);
  CHECK(s.rc(1) == 1.0);
  CHECK(s.rc(2) == 1.0);
  CHECK(s.rc(0) == 0.0);
}

TEST_CASE("capacities floor at zero and the node dies") {
  ResidualState s = ResidualState::FromCapacities({1.0, 0.1});
  s.Apply({{1, 0.25}}, 0);
  CHECK(s.rc(1) == 0.0);
  CHECK_FALSE(s.alive(1));
  CHECK(s.alive_count() == 0);
}

TEST_CASE("residue below the discard threshold counts as dead") {
  ResidualState s = ResidualState::FromCapacities({1.0, 0.3});
  s.Apply({{1, 0.3 - 1e-13}}, 0);
  CHECK_FALSE(s.alive(1));
}

TEST_CASE("dead nodes and the seed itself are ignored in the map") {
  ResidualState s = ResidualState::FromCapacities({1.0, 1.0, 0.0});
  CHECK_FALSE(s.alive(2));
  s.Apply({{0, 0.5}, {2, 0.5}, {1, 0.5}}, 0);
  CHECK(s.rc(0) == 0.0);
  CHECK(s.rc(2) == 0.0);
  CHECK(s.rc(1) == 0.5);
}

TEST_CASE("applying contributions rejects bad input") {
  ResidualState s(3);
  CHECK_THROWS_AS(s.Apply({}, 5), DomainError);
  CHECK_THROWS_AS(s.Apply({{1, 1.5}}, 0), DomainError);
  CHECK_THROWS_AS(s.Apply({{1, -0.1}}, 0), DomainError);
  s.Apply({}, 0);
  CHECK_THROWS_AS(s.Apply({}, 0), PreconditionError);
  CHECK_THROWS_AS(ResidualState::FromCapacities({0.5, 1.2}), DomainError);
}

TEST_CASE("capacities never increase under random updates") {
  std::mt19937_64 rng(5);
  ResidualState s(50);
  std::vector<double> before(s.capacities().begin(), s.capacities().end());
  for (int round = 0; round < 40; ++round) {
    NodeId seed = static_cast<NodeId>(rng() % 50);
    if (!s.alive(seed)) continue;
    ContributionMap m;
    for (NodeId v = 0; v < 50; ++v) {
      if (rng() % 3 == 0) m.push_back({v, static_cast<double>(rng() % 100) / 400.0});
    }
    s.Apply(m, seed);
    for (NodeId v = 0; v < 50; ++v) {
      CHECK(s.rc(v) <= before[v]);
      CHECK(s.rc(v) >= 0.0);
      before[v] = s.rc(v);
    }
  }
  // Re-initialisation restores every capacity.
  const ResidualState fresh(50);
  for (NodeId v = 0; v < 50; ++v) CHECK(fresh.rc(v) == 1.0);
}

}  // namespace
}  // namespace imax
