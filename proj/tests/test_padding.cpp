#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lcl/padding.hpp>
#include <lcl/sinkless.hpp>

#include "test_util.hpp"

using namespace lcl;

TEST_CASE("padding a triangle") {
  PortedMultigraph tri = cycle_graph(3);
  Labeling empty;
  PaddedGraph pg = pad_graph(tri, empty, GadgetSpec{2, {2, 2}});
  CHECK(pg.g.n() == 21);  // 3 gadgets of 7 nodes
  int pe = 0, ge = 0;
  for (int ei = 0; ei < pg.g.m(); ++ei)
    (parse_ein(pg.in.get(kInE, ei, "-")).kind == "PortEdge" ? pe : ge) += 1;
  CHECK(pe == 3);
  CHECK(ge == 24);  // 3 gadgets of 8 edges
  // every gadget is valid
  CHECK(check_gadget(pg.g, pg.in, 2).empty());
  // port edges join Port_a to Port_b along the base ports
  for (int ei = 0; ei < pg.g.m(); ++ei) {
    if (parse_ein(pg.in.get(kInE, ei, "-")).kind != "PortEdge") continue;
    for (int s = 0; s < 2; ++s) {
      VIn v = parse_vin(pg.in.get(kInV, pg.g.edges()[ei].ep[s].node, "-"));
      CHECK(v.port.rfind("Port_", 0) == 0);
    }
  }
}

TEST_CASE("an isolated base node pads to a bare gadget") {
  PortedMultigraph one = PortedMultigraph::build({{1, 0}}, {});
  Labeling empty;
  PaddedGraph pg = pad_graph(one, empty, GadgetSpec{2, {1, 1}});
  CHECK(pg.g.n() == 3);
  CHECK(pg.g.m() == 2);
}

TEST_CASE("base inputs ride along in the pi fields") {
  PortedMultigraph tri = cycle_graph(3);
  Labeling h_in;
  h_in.set(kInV, Carrier::V, 2, "vlabel");
  h_in.set(kInE, Carrier::E, 0, "elabel");
  h_in.set(kInB, Carrier::B, half_key(0, 1), "blabel");
  PaddedGraph pg = pad_graph(tri, h_in, GadgetSpec{2, {1, 1}});
  int vhits = 0, ehits = 0, bhits = 0;
  for (const auto& nr : pg.g.nodes())
    if (parse_vin(pg.in.get(kInV, nr.id, "-")).pi == "vlabel") ++vhits;
  CHECK(vhits == 3);  // the whole gadget of base node 2
  for (int ei = 0; ei < pg.g.m(); ++ei) {
    EIn e = parse_ein(pg.in.get(kInE, ei, "-"));
    if (e.pi == "elabel") ++ehits;
    for (int s = 0; s < 2; ++s)
      if (parse_bin(pg.in.get(kInB, half_key(ei, s), "-")).pi == "blabel")
        ++bhits;
  }
  CHECK(ehits == 1);
  CHECK(bhits == 1);
}

TEST_CASE("padding rejects degree overflow") {
  PortedMultigraph tri = cycle_graph(3);
  Labeling empty;
  CHECK_THROWS_AS(pad_graph(tri, empty, GadgetSpec{1, {1}}), GraphError);
}

TEST_CASE("round trip: solve, verify, extract") {
  NeLclProblem so = sinkless_orientation();
  Labeling empty;
  for (int delta : {2, 3}) {
    PortedMultigraph base = cycle_graph(4);
    PaddedGraph pg = pad_graph(base, empty, GadgetSpec{delta, std::vector<int>(delta, 2)});
    NeLclProblem pp = pi_prime_problem(so, delta);
    RunResult rr = solve_pi_prime(pg.g, pg.in, so, so_full_gather_solver(), delta);
    REQUIRE(rr.ok());
    CHECK(verify(pp, pg.g, pg.in, rr.out).empty());
    auto vs = extract_virtual_solution(pg.g, pg.in, rr.out, delta);
    REQUIRE(vs.has_value());
    CHECK(multigraph_isomorphic(vs->vg, base));
    CHECK(verify(so, vs->vg, vs->vin, vs->vout).empty());
  }
}

TEST_CASE("corrupting an accepted solution is rejected") {
  NeLclProblem so = sinkless_orientation();
  Labeling empty;
  PortedMultigraph tri = cycle_graph(3);
  PaddedGraph pg = pad_graph(tri, empty, GadgetSpec{2, {1, 1}});
  NeLclProblem pp = pi_prime_problem(so, 2);
  RunResult rr = solve_pi_prime(pg.g, pg.in, so, so_full_gather_solver(), 2);
  REQUIRE(rr.ok());
  REQUIRE(verify(pp, pg.g, pg.in, rr.out).empty());
  // flip the epsilon discipline on a PortEdge
  for (int ei = 0; ei < pg.g.m(); ++ei)
    if (parse_ein(pg.in.get(kInE, ei, "-")).kind == "PortEdge") {
      Labeling c = rr.out;
      c.set(kOutE, Carrier::E, ei, "Ok");
      CHECK_FALSE(verify(pp, pg.g, pg.in, c).empty());
      break;
    }
  // flip a gadget-edge label to Err
  for (int ei = 0; ei < pg.g.m(); ++ei)
    if (parse_ein(pg.in.get(kInE, ei, "-")).kind == "GadEdge") {
      Labeling c = rr.out;
      c.set(kOutE, Carrier::E, ei, "Err");
      CHECK_FALSE(verify(pp, pg.g, pg.in, c).empty());
      break;
    }
  // drop a port from S at one node only: breaks list equality or port rules
  {
    Labeling c = rr.out;
    int pnode = pg.ports_of.at(1)[0];
    PiPrimeV pv = parse_ppv(c.get(kOutV, pnode, ""), 2);
    REQUIRE_FALSE(pv.bad);
    pv.list.S.clear();
    c.set(kOutV, Carrier::V, pnode, emit_ppv(pv));
    CHECK_FALSE(verify(pp, pg.g, pg.in, c).empty());
  }
}

TEST_CASE("hard instances") {
  HardInstance h30 = hard_instance(30, 3);
  CHECK(h30.g.n() == 30);
  CHECK(h30.f == 5);
  CHECK(h30.gadget_n == 4);
  CHECK(h30.isolated == 10);

  HardInstance h100 = hard_instance(100, 3);
  CHECK(h100.g.n() == 100);
  CHECK(h100.f == 10);
  CHECK(h100.gadget_n == 10);
  CHECK(h100.isolated == 0);

  CHECK_THROWS_AS(hard_instance(3, 3), GraphError);
}

TEST_CASE("recursion levels") {
  NeLclProblem so = sinkless_orientation();
  NeLclProblem p1 = recurse(so, 1, 2);
  CHECK(p1.name == so.name);
  NeLclProblem p2 = recurse(so, 2, 2);
  NeLclProblem p3 = recurse(so, 3, 2);
  // alphabets grow with each level
  CHECK(p2.out_v.canonical.size() > p1.out_v.canonical.size());
  CHECK(p3.out_v.canonical.size() > p2.out_v.canonical.size());
  CHECK_THROWS_AS(recurse(so, 0, 2), GraphError);
}

TEST_CASE("two-level pipeline on a doubly-padded triangle") {
  NeLclProblem so = sinkless_orientation();
  Labeling empty;
  PortedMultigraph tri = cycle_graph(3);
  GadgetSpec spec{2, {1, 1}};
  PaddedGraph lvl1 = pad_graph(tri, empty, spec);
  CHECK(lvl1.g.n() == 9);
  PaddedGraph lvl2 = pad_graph(lvl1.g, lvl1.in, spec);
  CHECK(lvl2.g.n() == 27);
  NeLclProblem pp2 = recurse(so, 2, 2);
  LocalAlgorithm solver = pi_prime_solver(so, so_full_gather_solver(), 2);
  RunResult rr = run(lvl2.g, lvl2.in, solver, 0);
  REQUIRE(rr.ok());
  CHECK(verify(pp2, lvl2.g, lvl2.in, rr.out).empty());
  auto vs = extract_virtual_solution(lvl2.g, lvl2.in, rr.out, 2);
  REQUIRE(vs.has_value());
  CHECK(multigraph_isomorphic(vs->vg, lvl1.g));
  CHECK(verify(so, vs->vg, vs->vin, vs->vout).empty());
}

TEST_CASE("pi-prime label codec") {
  NeLclProblem so = sinkless_orientation();
  SigmaList l = canonical_list(so, 3);
  CHECK(l.ie.size() == 3);
  PiPrimeV v{l, "PortErr_2", "Ok", false};
  PiPrimeV v2 = parse_ppv(emit_ppv(v), 3);
  CHECK_FALSE(v2.bad);
  CHECK(v2.ps == "PortErr_2");
  CHECK(parse_ppv("junk", 3).bad);
  CHECK(parse_ppv("{\"ps\":\"NoPortErr\"}", 3).bad);
}
