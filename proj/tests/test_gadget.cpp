#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <lcl/gadget.hpp>

using namespace lcl;

namespace {

bool has_violation(const std::vector<std::pair<int, std::string>>& v, int node,
                   const std::string& id) {
  return std::find(v.begin(), v.end(), std::make_pair(node, id)) != v.end();
}

}  // namespace

TEST_CASE("gadget sizes follow the size formula") {
  CHECK(GadgetSpec{1, {1}}.node_count() == 2);
  CHECK(GadgetSpec{1, {2}}.node_count() == 4);
  CHECK(GadgetSpec{1, {3}}.node_count() == 8);
  CHECK(GadgetSpec{2, {1, 1}}.node_count() == 3);
  CHECK(GadgetSpec{3, {2, 2, 2}}.node_count() == 10);

  // h=2 sub-gadget: 3 nodes, 3 edges (two parent pairs, one horizontal pair)
  Gadget d1h2 = build_gadget({1, {2}});
  CHECK(d1h2.g.n() == 4);  // + the center
  CHECK(d1h2.g.m() == 4);  // + the center edge
  // h=3 sub-gadget: 7 nodes, 10 edges (6 parent + 4 horizontal)
  Gadget d1h3 = build_gadget({1, {3}});
  CHECK(d1h3.g.n() == 8);
  CHECK(d1h3.g.m() == 11);
  Gadget d3h2 = build_gadget({3, {2, 2, 2}});
  CHECK(d3h2.g.n() == 10);
  CHECK(d3h2.g.m() == 12);
  Gadget flat = build_gadget({2, {1, 1}});
  CHECK(flat.g.n() == 3);
  CHECK(flat.g.m() == 2);
}

TEST_CASE("structural labels of a built gadget") {
  Gadget gad = build_gadget({2, {2, 2}});
  int centers = 0, ports = 0;
  for (const auto& nr : gad.g.nodes()) {
    VIn v = parse_vin(gad.in.get(kInV, nr.id, "-"));
    if (v.node == "Center") ++centers;
    if (v.port != "NoPort") {
      ++ports;
      // ports carry the matching index label
      CHECK(label_index(v.port) == label_index(v.node));
    }
    CHECK(v.color >= 0);
    CHECK(v.color < color_palette(2));
    // colors are replicated on the node's half-edges
    for (const auto& [ei, side] : gad.g.incident(nr.id)) {
      BIn b = parse_bin(gad.in.get(kInB, half_key(ei, side), "-"));
      CHECK(b.color == v.color);
    }
  }
  CHECK(centers == 1);
  CHECK(ports == 2);
  CHECK(gad.center_id == 1);
  CHECK(gad.port_ids.size() == 2);
  CHECK(gad.g.degree(gad.center_id) == 2);
}

TEST_CASE("port-to-port distance is 2h") {
  for (int h = 1; h <= 4; ++h) {
    Gadget gad = build_gadget({2, std::vector<int>(2, h)});
    auto d = hop_distance(gad.g, gad.port_ids[0], gad.port_ids[1]);
    REQUIRE(d.has_value());
    CHECK(*d == 2 * h);
  }
}

TEST_CASE("valid gadgets pass check_gadget, including mixed heights") {
  for (int delta = 1; delta <= 4; ++delta)
    for (int h = 1; h <= 5; ++h) {
      Gadget gad = build_gadget({delta, std::vector<int>(delta, h)});
      CHECK(check_gadget(gad.g, gad.in, delta).empty());
    }
  Gadget mixed = build_gadget({3, {1, 3, 2}});
  CHECK(check_gadget(mixed.g, mixed.in, 3).empty());
}

TEST_CASE("Parent relabeled to Right violates the co-label constraint") {
  Gadget gad = build_gadget({2, {2, 2}});
  // find a half-edge labeled Parent
  int edge = -1, side = -1, node = -1;
  for (int ei = 0; ei < gad.g.m() && edge < 0; ++ei)
    for (int s = 0; s < 2; ++s)
      if (parse_bin(gad.in.get(kInB, half_key(ei, s), "-")).dir == "Parent") {
        edge = ei;
        side = s;
        node = gad.g.edges()[ei].ep[s].node;
        break;
      }
  REQUIRE(edge >= 0);
  Labeling in = gad.in;
  BIn b = parse_bin(in.get(kInB, half_key(edge, side), "-"));
  b.dir = "Right";
  in.set(kInB, Carrier::B, half_key(edge, side), emit_bin(b));
  auto viol = check_gadget(gad.g, in, 2);
  CHECK(has_violation(viol, node, "sg.2a"));
}

TEST_CASE("dropping a port label violates the corner constraint") {
  Gadget gad = build_gadget({2, {2, 2}});
  int port_node = gad.port_ids[0];
  Labeling in = gad.in;
  VIn v = parse_vin(in.get(kInV, port_node, "-"));
  v.port = "NoPort";
  in.set(kInV, Carrier::V, port_node, emit_vin(v));
  auto viol = check_gadget(gad.g, in, 2);
  CHECK(has_violation(viol, port_node, "sg.3h"));
}

TEST_CASE("duplicate sub-gadget index is caught at the center") {
  Gadget gad = build_gadget({2, {1, 1}});
  int root2 = gad.port_ids[1];  // single-node sub-gadget 2
  Labeling in = gad.in;
  VIn v = parse_vin(in.get(kInV, root2, "-"));
  v.node = "Index_1";
  in.set(kInV, Carrier::V, root2, emit_vin(v));
  auto viol = check_gadget(gad.g, in, 2);
  CHECK(has_violation(viol, gad.center_id, "g.2d"));
}

TEST_CASE("seeded mutations") {
  Gadget gad = build_gadget({2, {2, 2}});
  CHECK(gad.g.m() == 8);
  Mutant del = mutate_gadget(gad.g, gad.in, MutationKind::DeleteEdge, 0);
  CHECK(del.g.m() == 7);
  CHECK_FALSE(check_gadget(del.g, del.in, 2).empty());

  Mutant rec = mutate_gadget(gad.g, gad.in, MutationKind::Recolor, 1);
  CHECK_FALSE(check_gadget(rec.g, rec.in, 2).empty());

  // swapping the two port numbers yields an isomorphic, still-valid gadget
  Mutant sw = mutate_gadget(gad.g, gad.in, MutationKind::SwapPort, 0);
  CHECK(check_gadget(sw.g, sw.in, 2).empty());
  CHECK(multigraph_isomorphic(sw.g, gad.g));

  // determinism: same seed, same mutant
  Mutant a = mutate_gadget(gad.g, gad.in, MutationKind::RelabelNode, 5);
  Mutant b = mutate_gadget(gad.g, gad.in, MutationKind::RelabelNode, 5);
  CHECK(a.description == b.description);
  CHECK(a.in.get(kInV, 1, "-") == b.in.get(kInV, 1, "-"));
}

TEST_CASE("label codecs round-trip") {
  VIn v{"Index_2", "Port_2", 7, "base"};
  VIn v2 = parse_vin(emit_vin(v));
  CHECK(v2.node == "Index_2");
  CHECK(v2.port == "Port_2");
  CHECK(v2.color == 7);
  CHECK(v2.pi == "base");
  CHECK(parse_vin("-").port == "NoPort");
  CHECK(parse_ein("-").kind == "GadEdge");
  CHECK(label_index("Down_12") == 12);
  CHECK(label_index("Right") == -1);
  CHECK(label_index("Port_0") == 0);
}
