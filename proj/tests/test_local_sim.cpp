#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lcl/local_sim.hpp>
#include <lcl/sinkless.hpp>

#include "test_util.hpp"

using namespace lcl;

TEST_CASE("rng streams are deterministic and node-decorrelated") {
  Rng a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  CHECK(a.next_u64() == b.next_u64());
  CHECK(a.next_u64() == b.next_u64());
  Rng a2(42, 7);
  CHECK(a2.next_u64() != c.next_u64());
  Rng a3(42, 7);
  CHECK(a3.next_u64() != d.next_u64());
  Rng e(1, 1);
  for (int i = 0; i < 100; ++i) CHECK(e.next_below(10) < 10);
}

TEST_CASE("run gathers the right radius and applies the rule per node") {
  PortedMultigraph g = cycle_graph(6);
  Labeling in;
  LocalAlgorithm alg;
  alg.name = "count-visible";
  alg.radius = [](int) { return 2; };
  alg.rule = [](const View& view, int n, int delta, Rng&) {
    RuleOut out;
    CHECK(n == 6);
    CHECK(delta == 2);
    out.v = std::to_string(view.vnodes.size());
    for (std::size_t i = 0; i < view.inc(view.root).size(); ++i) {
      out.e.push_back("e");
      out.b.push_back("b");
    }
    return out;
  };
  RunResult r = run(g, in, alg, 0);
  REQUIRE(r.ok());
  for (const auto& nr : g.nodes())
    CHECK(r.out.get(kOutV, nr.id, "") == "5");  // radius 2 on a 6-cycle
  CHECK(r.out.get(kOutE, 0, "") == "e");
  CHECK(r.out.get(kOutB, half_key(0, 1), "") == "b");
}

TEST_CASE("edge label disagreement is a run error") {
  PortedMultigraph g = path_graph(2);
  Labeling in;
  LocalAlgorithm alg;
  alg.name = "disagree";
  alg.radius = [](int) { return 0; };
  alg.rule = [](const View& view, int, int, Rng&) {
    RuleOut out;
    out.v = "-";
    out.e.push_back(view.root == 1 ? "a" : "b");
    out.b.push_back("-");
    return out;
  };
  RunResult r = run(g, in, alg, 0);
  CHECK_FALSE(r.ok());
}

TEST_CASE("declared failures surface as errors") {
  PortedMultigraph g = path_graph(2);
  Labeling in;
  LocalAlgorithm alg;
  alg.name = "give-up";
  alg.radius = [](int) { return 0; };
  alg.rule = [](const View&, int, int, Rng&) {
    RuleOut out;
    out.fail = "nope";
    return out;
  };
  CHECK_FALSE(run(g, in, alg, 0).ok());
}

TEST_CASE("measured locality of the full-gather sinkless solver") {
  Labeling in;
  NeLclProblem so = sinkless_orientation();
  // full gather needs the radius that covers the whole cycle from any node
  auto t8 = measure_locality(cycle_graph(8), in, so, so_family(), 10);
  CHECK(t8 == 4);
  auto t4 = measure_locality(cycle_graph(4), in, so, so_family(), 10);
  CHECK(t4 == 2);
  // trees are unsolvable at any radius
  auto tp = measure_locality(path_graph(5), in, so, so_family(), 6);
  CHECK_FALSE(tp.has_value());
}
