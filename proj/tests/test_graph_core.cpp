#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lcl/graph.hpp>
#include <lcl/problem.hpp>
#include <lcl/serialize.hpp>

#include "test_util.hpp"

using namespace lcl;

TEST_CASE("build validates structure") {
  CHECK_THROWS_AS(PortedMultigraph::build({{0, 0}}, {}), GraphError);
  CHECK_THROWS_AS(PortedMultigraph::build({{1, 1}, {1, 1}}, {}), GraphError);
  // edge to an unknown node
  EdgeRecord e;
  e.ep[0] = {1, 1};
  e.ep[1] = {2, 1};
  CHECK_THROWS_AS(PortedMultigraph::build({{1, 1}}, {e}), GraphError);
  // port out of range
  e.ep[1] = {1, 5};
  CHECK_THROWS_AS(PortedMultigraph::build({{1, 2}}, {e}), GraphError);
}

TEST_CASE("self-loops and parallel edges") {
  EdgeRecord loop;
  loop.ep[0] = {1, 1};
  loop.ep[1] = {1, 2};
  PortedMultigraph g = PortedMultigraph::build({{1, 2}}, {loop});
  CHECK(g.n() == 1);
  CHECK(g.m() == 1);
  CHECK(g.edges()[0].self_loop());
  CHECK(g.incident(1).size() == 2);  // one entry per side

  EdgeRecord a, b;
  a.ep[0] = {1, 1};
  a.ep[1] = {2, 1};
  b.ep[0] = {1, 2};
  b.ep[1] = {2, 2};
  PortedMultigraph p = PortedMultigraph::build({{1, 2}, {2, 2}}, {a, b});
  CHECK(p.m() == 2);
  CHECK(p.other_endpoint(0, 0) == 2);
}

TEST_CASE("ball radii on the 8-cycle") {
  PortedMultigraph g = cycle_graph(8);
  Labeling empty;
  View b2 = ball(g, empty, 1, 2);
  CHECK(b2.vnodes.size() == 5);  // 1 +- 2 around the cycle
  CHECK(b2.vedges.size() == 4);
  CHECK(b2.frontier.size() == 2);
  CHECK_FALSE(b2.component_complete());

  View b4 = ball(g, empty, 1, 4);  // the whole cycle
  CHECK(b4.vnodes.size() == 8);
  CHECK(b4.vedges.size() == 8);
  CHECK(b4.frontier == std::set<int>{5});
  CHECK(b4.component_complete());
  CHECK(multigraph_isomorphic(b4.as_graph(), g));
}

TEST_CASE("view keeps original ids, ports and labels") {
  PortedMultigraph g = cycle_graph(4);
  Labeling in;
  in.set(kInV, Carrier::V, 3, "x");
  in.set(kInE, Carrier::E, 2, "y");
  View v = ball(g, in, 3, 1);
  CHECK(v.root == 3);
  CHECK(v.dist.at(3) == 0);
  CHECK(v.dist.at(2) == 1);
  CHECK(v.dist.at(4) == 1);
  CHECK(v.node_degree(3) == 2);
  CHECK(v.labels.get(kInV, 3, "-") == "x");
  bool found = false;
  for (std::size_t i = 0; i < v.orig_edge.size(); ++i)
    if (v.orig_edge[i] == 2) {
      found = true;
      CHECK(v.labels.get(kInE, static_cast<int>(i), "-") == "y");
    }
  CHECK(found);
}

TEST_CASE("distances and components") {
  PortedMultigraph g = cycle_graph(8);
  CHECK(hop_distance(g, 1, 5) == 4);
  CHECK(hop_distance(g, 1, 8) == 1);
  CHECK(components(g).size() == 1);
  PortedMultigraph two =
      PortedMultigraph::build({{1, 0}, {2, 0}}, {});
  CHECK(components(two).size() == 2);
  CHECK_FALSE(hop_distance(two, 1, 2).has_value());
  auto d = bfs_distances(g, {1, 5});
  CHECK(d.at(3) == 2);
  CHECK(d.at(7) == 2);
}

TEST_CASE("multigraph isomorphism") {
  CHECK(multigraph_isomorphic(cycle_graph(5), cycle_graph(5)));
  CHECK_FALSE(multigraph_isomorphic(cycle_graph(5), cycle_graph(6)));
  CHECK_FALSE(multigraph_isomorphic(cycle_graph(4), path_graph(4)));
  // C4 with shuffled ids
  std::vector<NodeRecord> nodes{{7, 2}, {3, 2}, {9, 2}, {5, 2}};
  int ids[] = {7, 3, 9, 5};
  std::vector<EdgeRecord> edges;
  for (int i = 0; i < 4; ++i) {
    EdgeRecord e;
    e.ep[0] = {ids[i], 2};
    e.ep[1] = {ids[(i + 1) % 4], 1};
    edges.push_back(e);
  }
  CHECK(multigraph_isomorphic(cycle_graph(4),
                              PortedMultigraph::build(nodes, edges)));
}

TEST_CASE("serialization round-trips byte-identically") {
  PortedMultigraph g = cycle_graph(5);
  Labeling in;
  in.set(kInV, Carrier::V, 2, "hello");
  in.set(kInB, Carrier::B, half_key(3, 1), "world");
  std::string bytes = encode(g, in);
  auto [g2, in2] = decode(bytes);
  CHECK(encode(g2, in2) == bytes);
  CHECK(g2.n() == 5);
  CHECK(in2.get(kInB, half_key(3, 1), "-") == "world");
  CHECK_THROWS_AS(decode("not a graph"), FormatError);
}
