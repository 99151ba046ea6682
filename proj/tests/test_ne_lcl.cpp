#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lcl/problem.hpp>
#include <lcl/sinkless.hpp>

#include "test_util.hpp"

using namespace lcl;

TEST_CASE("verify checks totality and alphabets") {
  PortedMultigraph g = path_graph(2);
  Labeling in;
  NeLclProblem so = sinkless_orientation();
  Labeling out;  // nothing assigned
  auto v = verify(so, g, in, out);
  CHECK_FALSE(v.empty());
  out = canonical_output(so, g);
  out.set(kOutB, Carrier::B, half_key(0, 0), "sideways");
  CHECK_FALSE(verify(so, g, in, out).empty());
}

TEST_CASE("sinkless orientation on a triangle: exactly two solutions") {
  PortedMultigraph g = cycle_graph(3);
  Labeling in;
  NeLclProblem so = sinkless_orientation();
  EnumerationResult r = enumerate_solutions(so, g, in, 1000000);
  CHECK(r.count == 2);  // clockwise and counterclockwise
  for (const auto& sol : r.solutions) CHECK(verify(so, g, in, sol).empty());
}

TEST_CASE("sinkless orientation on a 4-cycle: exactly two solutions") {
  PortedMultigraph g = cycle_graph(4);
  Labeling in;
  EnumerationResult r = enumerate_solutions(sinkless_orientation(), g, in, 1000000);
  CHECK(r.count == 2);
}

TEST_CASE("trees have no sinkless orientation") {
  Labeling in;
  NeLclProblem so = sinkless_orientation();
  CHECK(enumerate_solutions(so, path_graph(4), in, 1000000).count == 0);
  CHECK_FALSE(so_oracle(path_graph(4)).has_value());
}

TEST_CASE("a self-loop is orientable") {
  EdgeRecord loop;
  loop.ep[0] = {1, 1};
  loop.ep[1] = {1, 2};
  PortedMultigraph g = PortedMultigraph::build({{1, 2}}, {loop});
  Labeling in;
  NeLclProblem so = sinkless_orientation();
  auto sol = so_oracle(g);
  REQUIRE(sol.has_value());
  CHECK(verify(so, g, in, *sol).empty());
}

TEST_CASE("oracle agrees with enumeration on small graphs") {
  Labeling in;
  NeLclProblem so = sinkless_orientation();
  std::vector<PortedMultigraph> graphs;
  for (int n = 3; n <= 6; ++n) graphs.push_back(cycle_graph(n));
  for (int n = 2; n <= 5; ++n) graphs.push_back(path_graph(n));
  {  // two parallel edges: a 2-cycle, solvable
    EdgeRecord a, b;
    a.ep[0] = {1, 1};
    a.ep[1] = {2, 1};
    b.ep[0] = {1, 2};
    b.ep[1] = {2, 2};
    graphs.push_back(PortedMultigraph::build({{1, 2}, {2, 2}}, {a, b}));
  }
  {  // star K_{1,3}: a tree, unsolvable
    std::vector<NodeRecord> nodes{{1, 3}, {2, 1}, {3, 1}, {4, 1}};
    std::vector<EdgeRecord> edges;
    for (int i = 0; i < 3; ++i) {
      EdgeRecord e;
      e.ep[0] = {1, i + 1};
      e.ep[1] = {i + 2, 1};
      edges.push_back(e);
    }
    graphs.push_back(PortedMultigraph::build(nodes, edges));
  }
  {  // cycle with a pendant: solvable
    std::vector<NodeRecord> nodes{{1, 3}, {2, 2}, {3, 2}, {4, 1}};
    std::vector<EdgeRecord> edges(4);
    edges[0].ep[0] = {1, 1};
    edges[0].ep[1] = {2, 1};
    edges[1].ep[0] = {2, 2};
    edges[1].ep[1] = {3, 1};
    edges[2].ep[0] = {3, 2};
    edges[2].ep[1] = {1, 2};
    edges[3].ep[0] = {1, 3};
    edges[3].ep[1] = {4, 1};
    graphs.push_back(PortedMultigraph::build(nodes, edges));
  }
  for (const auto& g : graphs) {
    auto sol = so_oracle(g);
    long long count = enumerate_solutions(so, g, in, 1000000).count;
    CHECK(sol.has_value() == (count > 0));
    if (sol) CHECK(verify(so, g, in, *sol).empty());
  }
}

TEST_CASE("enumeration guards against label-space blowup") {
  PortedMultigraph g = cycle_graph(10);
  Labeling in;
  CHECK_THROWS_AS(enumerate_solutions(sinkless_orientation(), g, in, 1),
                  GraphError);
}
