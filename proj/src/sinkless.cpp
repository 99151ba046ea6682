#include "lcl/sinkless.hpp"

#include <algorithm>
#include <deque>

namespace lcl {

NeLclProblem sinkless_orientation() {
  NeLclProblem p;
  p.name = "sinkless-orientation";
  // inputs are ignored, so any input labeling is admissible (this lets padded
  // instances, whose gadget labels ride along as base inputs, recurse cleanly)
  auto any = [](const std::string&) { return true; };
  p.in_v = {any, {}, "-"};
  p.in_e = {any, {}, "-"};
  p.in_b = {any, {}, "-"};
  p.out_b = Alphabet::of({"in", "out"});
  p.node_check = [](const NodeCtx& ctx) -> std::vector<std::string> {
    for (const auto& h : ctx.inc)
      if (h.b_out == "out") return {};
    return {"so.node"};
  };
  p.edge_check = [](const EdgeCtx& ctx) -> std::vector<std::string> {
    if (ctx.b_out[0].empty() || ctx.b_out[1].empty()) return {};  // partial
    if (ctx.b_out[0] == ctx.b_out[1]) return {"so.edge"};
    return {};
  };
  return p;
}

namespace {

constexpr const char* kOut = "out";
constexpr const char* kIn = "in";

// orient edge `ei` away from node `from`: its side(s) at `from` get "out".
// For non-loops there is exactly one such side.
void orient_from(const PortedMultigraph& g, Labeling& lab, int ei, int from) {
  const auto& e = g.edges()[ei];
  int side = (e.ep[0].node == from) ? 0 : 1;
  lab.set(kOutB, Carrier::B, half_key(ei, side), kOut);
  lab.set(kOutB, Carrier::B, half_key(ei, 1 - side), kIn);
}

bool oriented(const Labeling& lab, int ei) {
  return !lab.get(kOutB, half_key(ei, 0)).empty();
}

}  // namespace

std::optional<Labeling> so_oracle(const PortedMultigraph& g) {
  Labeling lab;
  lab.layer(kOutV, Carrier::V);
  lab.layer(kOutE, Carrier::E);
  lab.layer(kOutB, Carrier::B);
  for (const auto& nr : g.nodes()) lab.set(kOutV, Carrier::V, nr.id, "-");
  for (int ei = 0; ei < g.m(); ++ei) lab.set(kOutE, Carrier::E, ei, "-");

  for (const auto& comp : components(g)) {
    int root = comp.front();
    if (comp.size() == 1 && g.degree(root) == 0) return std::nullopt;  // sink
    // BFS forest from the smallest id; tree edge per discovered node
    std::map<int, int> parent;       // node -> parent node
    std::map<int, int> parent_edge;  // node -> tree edge index
    std::set<int> tree_edges;
    std::deque<int> queue{root};
    std::set<int> seen{root};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (const auto& [ei, side] : g.incident(u)) {
        int w = g.other_endpoint(ei, side);
        if (!seen.count(w)) {
          seen.insert(w);
          parent[w] = u;
          parent_edge[w] = ei;
          tree_edges.insert(ei);
          queue.push_back(w);
        }
      }
    }
    // canonical cycle closer: smallest-index non-tree edge in the component
    int closer = -1;
    for (int ei = 0; ei < g.m(); ++ei) {
      if (!seen.count(g.edges()[ei].ep[0].node)) continue;
      if (!tree_edges.count(ei)) {
        closer = ei;
        break;
      }
    }
    if (closer < 0) return std::nullopt;  // tree component
    const auto& ce = g.edges()[closer];
    int a = ce.ep[0].node, b = ce.ep[1].node;
    std::set<int> cycle_nodes;
    if (ce.self_loop()) {
      lab.set(kOutB, Carrier::B, half_key(closer, 0), kOut);
      lab.set(kOutB, Carrier::B, half_key(closer, 1), kIn);
      cycle_nodes.insert(a);
    } else {
      // orient closer a -> b, then the tree path b -> ... -> a
      lab.set(kOutB, Carrier::B, half_key(closer, 0), kOut);
      lab.set(kOutB, Carrier::B, half_key(closer, 1), kIn);
      // tree path between a and b: climb both to the root, splice at the
      // lowest common prefix
      auto chain = [&](int v) {
        std::vector<int> c{v};
        while (parent.count(c.back())) c.push_back(parent[c.back()]);
        return c;
      };
      std::vector<int> ca = chain(a), cb = chain(b);
      std::set<int> in_ca(ca.begin(), ca.end());
      int meet = -1;
      for (int v : cb)
        if (in_ca.count(v)) {
          meet = v;
          break;
        }
      std::vector<int> path;  // b ... meet ... a
      for (int v : cb) {
        path.push_back(v);
        if (v == meet) break;
      }
      std::vector<int> up_a;
      for (int v : ca) {
        if (v == meet) break;
        up_a.push_back(v);
      }
      std::reverse(up_a.begin(), up_a.end());
      path.insert(path.end(), up_a.begin(), up_a.end());
      for (std::size_t i = 0; i + 1 < path.size(); ++i)
        orient_from(g, lab, parent_edge.count(path[i]) &&
                                    parent[path[i]] == path[i + 1]
                                ? parent_edge[path[i]]
                                : parent_edge[path[i + 1]],
                    path[i]);
      cycle_nodes.insert(path.begin(), path.end());
    }
    // orient everyone else toward the cycle along tree edges
    std::deque<int> q2(cycle_nodes.begin(), cycle_nodes.end());
    std::set<int> done = cycle_nodes;
    while (!q2.empty()) {
      int u = q2.front();
      q2.pop_front();
      for (const auto& [ei, side] : g.incident(u)) {
        int w = g.other_endpoint(ei, side);
        if (done.count(w)) continue;
        done.insert(w);
        if (!oriented(lab, ei)) orient_from(g, lab, ei, w);  // child -> parent
        q2.push_back(w);
      }
    }
    // leftover edges (extra non-tree edges): canonical side-0-out
    for (int ei = 0; ei < g.m(); ++ei) {
      if (!seen.count(g.edges()[ei].ep[0].node)) continue;
      if (!oriented(lab, ei)) {
        lab.set(kOutB, Carrier::B, half_key(ei, 0), kOut);
        lab.set(kOutB, Carrier::B, half_key(ei, 1), kIn);
      }
    }
  }
  return lab;
}

LocalAlgorithm so_full_gather_solver(int radius) {
  LocalAlgorithm alg;
  alg.name = "so-full-gather";
  alg.radius = [radius](int n) { return radius < 0 ? n : radius; };
  alg.rule = [](const View& view, int, int, Rng&) -> RuleOut {
    RuleOut out;
    if (!view.component_complete()) {
      out.fail = "view does not cover the whole component";
      return out;
    }
    PortedMultigraph comp = view.as_graph();
    auto lab = so_oracle(comp);
    if (!lab) {
      out.fail = "sinkless orientation unsolvable on this component";
      return out;
    }
    out.v = "-";
    for (const auto& [ei, side] : view.inc(view.root)) {
      out.e.push_back("-");
      out.b.push_back(lab->get(kOutB, half_key(ei, side)));
    }
    return out;
  };
  return alg;
}

AlgorithmFamily so_family() {
  return [](int t) { return so_full_gather_solver(t); };
}

}  // namespace lcl
