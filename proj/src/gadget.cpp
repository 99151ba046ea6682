#include "lcl/gadget.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include <json.hpp>

namespace lcl {

using nlohmann::json;

namespace {

const std::vector<std::string> kSubDirs = {"Parent", "Right", "Left", "LChild",
                                           "RChild"};
const std::vector<std::string> kAllDirs = {"Parent", "Right", "Left",
                                           "LChild", "RChild", "Up"};

bool is_sub_dir(const std::string& d) {
  return std::find(kSubDirs.begin(), kSubDirs.end(), d) != kSubDirs.end();
}

bool is_dir_label(const std::string& d) {
  if (std::find(kAllDirs.begin(), kAllDirs.end(), d) != kAllDirs.end()) return true;
  return d.rfind("Down_", 0) == 0 && label_index(d) >= 1;
}

}  // namespace

int label_index(const std::string& label) {
  auto pos = label.find('_');
  if (pos == std::string::npos || pos + 1 >= label.size()) return -1;
  int v = 0;
  for (std::size_t i = pos + 1; i < label.size(); ++i) {
    if (label[i] < '0' || label[i] > '9') return -1;
    v = v * 10 + (label[i] - '0');
    if (v > 1000000) return -1;
  }
  return v;
}

int GadgetSpec::node_count() const {
  int n = 1;
  for (int h : heights) n += (1 << h) - 1;
  return n;
}

// ---------------------------------------------------------------------------
// Label encoding
// ---------------------------------------------------------------------------

std::string emit_vin(const VIn& v) {
  json j;
  j["node"] = v.node;
  j["port"] = v.port;
  j["color"] = v.color;
  if (v.pi != "-") j["pi"] = v.pi;
  return j.dump();
}

std::string emit_bin(const BIn& b) {
  json j;
  j["dir"] = b.dir;
  j["color"] = b.color;
  if (b.pi != "-") j["pi"] = b.pi;
  return j.dump();
}

std::string emit_ein(const EIn& e) {
  json j;
  j["kind"] = e.kind;
  if (e.pi != "-") j["pi"] = e.pi;
  return j.dump();
}

namespace {

json parse_or_null(const std::string& s) {
  if (s.empty() || s == "-") return json();
  json j = json::parse(s, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return json();
  return j;
}

}  // namespace

VIn parse_vin(const std::string& s) {
  VIn v;
  json j = parse_or_null(s);
  if (j.is_null()) return v;
  if (j.contains("node") && j["node"].is_string()) v.node = j["node"];
  if (j.contains("port") && j["port"].is_string()) v.port = j["port"];
  if (j.contains("color") && j["color"].is_number_integer()) v.color = j["color"];
  if (j.contains("pi") && j["pi"].is_string()) v.pi = j["pi"];
  return v;
}

BIn parse_bin(const std::string& s) {
  BIn b;
  json j = parse_or_null(s);
  if (j.is_null()) return b;
  if (j.contains("dir") && j["dir"].is_string()) b.dir = j["dir"];
  if (j.contains("color") && j["color"].is_number_integer()) b.color = j["color"];
  if (j.contains("pi") && j["pi"].is_string()) b.pi = j["pi"];
  return b;
}

EIn parse_ein(const std::string& s) {
  EIn e;
  json j = parse_or_null(s);
  if (j.is_null()) return e;
  if (j.contains("kind") && j["kind"].is_string()) e.kind = j["kind"];
  if (j.contains("pi") && j["pi"].is_string()) e.pi = j["pi"];
  return e;
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

Gadget build_gadget(const GadgetSpec& spec, int id_base) {
  if (spec.delta < 1 || static_cast<int>(spec.heights.size()) != spec.delta)
    throw GraphError("gadget spec needs delta >= 1 and one height per sub-gadget");
  for (int h : spec.heights)
    if (h < 1 || h > 24) throw GraphError("sub-gadget height out of range");

  Gadget out;
  out.spec = spec;
  out.center_id = id_base;

  // id layout: center, then each sub-gadget level by level
  std::vector<int> base(spec.delta + 1);
  base[0] = id_base + 1;
  for (int i = 1; i <= spec.delta; ++i)
    base[i] = (i == spec.delta ? 0 : base[i - 1] + (1 << spec.heights[i - 1]) - 1);
  auto node_id = [&](int i, int level, int x) {
    return base[i - 1] + ((1 << level) - 1) + x;
  };

  struct HalfLab {
    std::string dir;
  };
  std::vector<EdgeRecord> raw_edges;  // ports filled later
  std::vector<std::pair<std::string, std::string>> edge_dirs;
  std::map<int, int> degree;

  auto add_edge = [&](int u, const std::string& du, int v, const std::string& dv) {
    EdgeRecord e;
    e.ep[0].node = u;
    e.ep[1].node = v;
    raw_edges.push_back(e);
    edge_dirs.emplace_back(du, dv);
    degree[u] += 1;
    degree[v] += 1;
  };

  std::vector<NodeRecord> nodes;
  Labeling in;
  in.layer(kInV, Carrier::V);
  in.layer(kInB, Carrier::B);

  degree[out.center_id] = 0;
  for (int i = 1; i <= spec.delta; ++i) {
    int h = spec.heights[i - 1];
    for (int level = 0; level < h; ++level)
      for (int x = 0; x < (1 << level); ++x) degree[node_id(i, level, x)] = 0;
    for (int level = 1; level < h; ++level) {
      for (int x = 0; x < (1 << level); ++x) {
        add_edge(node_id(i, level, x), "Parent", node_id(i, level - 1, x / 2),
                 x % 2 == 0 ? "LChild" : "RChild");
      }
    }
    for (int level = 0; level < h; ++level)
      for (int x = 0; x + 1 < (1 << level); ++x)
        add_edge(node_id(i, level, x), "Right", node_id(i, level, x + 1), "Left");
    out.port_ids.push_back(node_id(i, h - 1, (1 << (h - 1)) - 1));
  }
  for (int i = 1; i <= spec.delta; ++i)
    add_edge(out.center_id, "Down_" + std::to_string(i), node_id(i, 0, 0), "Up");

  // assign ports in edge order
  std::map<int, int> next_port;
  for (auto& e : raw_edges) {
    e.ep[0].port = ++next_port[e.ep[0].node];
    e.ep[1].port = ++next_port[e.ep[1].node];
  }
  for (const auto& [id, d] : degree) nodes.push_back({id, d});

  out.g = PortedMultigraph::build(nodes, raw_edges);

  // node labels
  std::map<int, VIn> vlab;
  vlab[out.center_id] = {"Center", "NoPort", -1, "-"};
  for (int i = 1; i <= spec.delta; ++i) {
    int h = spec.heights[i - 1];
    for (int level = 0; level < h; ++level)
      for (int x = 0; x < (1 << level); ++x) {
        VIn v;
        v.node = "Index_" + std::to_string(i);
        v.port = node_id(i, level, x) == out.port_ids[i - 1]
                     ? "Port_" + std::to_string(i)
                     : "NoPort";
        vlab[node_id(i, level, x)] = v;
      }
  }

  // greedy distance-2 coloring in id order
  for (auto& [id, v] : vlab) {
    std::set<int> used;
    for (const auto& [e1, s1] : out.g.incident(id)) {
      int w = out.g.other_endpoint(e1, s1);
      auto it = vlab.find(w);
      if (it->second.color >= 0) used.insert(it->second.color);
      for (const auto& [e2, s2] : out.g.incident(w)) {
        int w2 = out.g.other_endpoint(e2, s2);
        auto it2 = vlab.find(w2);
        if (w2 != id && it2->second.color >= 0) used.insert(it2->second.color);
      }
    }
    int c = 0;
    while (used.count(c)) ++c;
    if (c >= color_palette(spec.delta))
      throw GraphError("distance-2 palette exceeded");
    v.color = c;
  }

  for (const auto& [id, v] : vlab) in.set(kInV, Carrier::V, id, emit_vin(v));
  for (int ei = 0; ei < out.g.m(); ++ei) {
    for (int side = 0; side < 2; ++side) {
      BIn b;
      b.dir = side == 0 ? edge_dirs[ei].first : edge_dirs[ei].second;
      b.color = vlab[out.g.edges()[ei].ep[side].node].color;
      in.set(kInB, Carrier::B, half_key(ei, side), emit_bin(b));
    }
  }
  out.in = in;
  return out;
}

// ---------------------------------------------------------------------------
// Structural checking
// ---------------------------------------------------------------------------

namespace {

struct Slot {
  int edge = 0;  // local edge index in the view
  int side = 0;
  BIn b;
  int far = 0;  // far node id
};

struct StarInfo {
  VIn v;
  std::vector<Slot> slots;  // GadEdge slots whose far end is inside the mask
  bool has(const std::string& dir) const {
    for (const auto& s : slots)
      if (s.b.dir == dir) return true;
    return false;
  }
  bool has_down() const {
    for (const auto& s : slots)
      if (s.b.dir.rfind("Down_", 0) == 0) return true;
    return false;
  }
};

struct Mask {
  std::map<int, int> dist;  // GadEdge distance from root, <= 2
  std::map<int, StarInfo> star;
};

Mask build_mask(const View& view, int root, int radius) {
  Mask m;
  // GadEdge adjacency within the view
  std::map<int, std::vector<std::pair<int, int>>> adj;  // id -> (local edge, side)
  std::vector<bool> gad(view.vedges.size(), false);
  for (std::size_t ei = 0; ei < view.vedges.size(); ++ei) {
    EIn e = parse_ein(view.labels.get(kInE, static_cast<std::int64_t>(ei), "-"));
    if (e.kind != "GadEdge") continue;
    gad[ei] = true;
    for (int side = 0; side < 2; ++side)
      adj[view.vedges[ei].ep[side].node].emplace_back(static_cast<int>(ei), side);
  }
  std::deque<int> queue{root};
  m.dist[root] = 0;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    if (m.dist[u] == radius) continue;
    for (const auto& [ei, side] : adj[u]) {
      int w = view.vedges[ei].ep[1 - side].node;
      if (!m.dist.count(w)) {
        m.dist[w] = m.dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  for (const auto& [id, d] : m.dist) {
    StarInfo si;
    si.v = parse_vin(view.labels.get(kInV, id, "-"));
    for (const auto& [ei, side] : view.inc(id)) {
      if (ei >= static_cast<int>(gad.size()) || !gad[ei]) continue;
      int far = view.vedges[ei].ep[1 - side].node;
      if (!m.dist.count(far)) continue;  // beyond the mask
      Slot s;
      s.edge = ei;
      s.side = side;
      s.b = parse_bin(view.labels.get(kInB, half_key(ei, side), "-"));
      s.far = far;
      si.slots.push_back(s);
    }
    m.star[id] = std::move(si);
  }
  return m;
}

// follow one labeled step from each node in `from`
std::set<int> step(const Mask& m, const std::set<int>& from, const std::string& dir) {
  std::set<int> to;
  for (int u : from) {
    auto it = m.star.find(u);
    if (it == m.star.end()) continue;
    for (const auto& s : it->second.slots)
      if (s.b.dir == dir) to.insert(s.far);
  }
  return to;
}

}  // namespace

std::vector<std::string> gadget_local_check(const View& view, int root, int delta) {
  Mask m = build_mask(view, root, 2);
  const StarInfo& u = m.star.at(root);
  std::vector<std::string> out;
  auto emit = [&](const char* id) { out.push_back(id); };

  bool center = u.v.node == "Center";
  int own_index = label_index(u.v.node);

  // sg.1a: no self-loops or parallel edges
  {
    std::set<int> seen;
    bool bad = false;
    for (const auto& s : u.slots) {
      if (s.far == root) bad = true;
      if (seen.count(s.far)) bad = true;
      seen.insert(s.far);
    }
    if (bad) emit("sg.1a");
  }
  // sg.1b: pairwise distinct, well-formed side labels
  {
    std::set<std::string> seen;
    bool bad = false;
    for (const auto& s : u.slots) {
      if (!is_dir_label(s.b.dir)) bad = true;
      if (seen.count(s.b.dir)) bad = true;
      seen.insert(s.b.dir);
    }
    if (bad) emit("sg.1b");
  }
  // sg.1c: Index label present and shared with sub-gadget neighbors
  if (!center) {
    bool bad = own_index < 1 || u.v.node.rfind("Index_", 0) != 0;
    for (const auto& s : u.slots)
      if (is_sub_dir(s.b.dir) && m.star.at(s.far).v.node != u.v.node) bad = true;
    if (bad) emit("sg.1c");
  }
  // sg.1d: Port_i matches Index_i; the center carries no port label
  {
    bool bad = false;
    if (center) {
      if (u.v.port != "NoPort") bad = true;
    } else if (u.v.port != "NoPort") {
      if (u.v.port.rfind("Port_", 0) != 0 || label_index(u.v.port) != own_index)
        bad = true;
    }
    if (bad) emit("sg.1d");
  }

  if (!center) {
    // sg.2a / sg.2b: co-labels across an edge
    bool bad2a = false, bad2b = false;
    for (const auto& s : u.slots) {
      BIn farb = parse_bin(view.labels.get(kInB, half_key(s.edge, 1 - s.side), "-"));
      if (s.b.dir == "Right" && farb.dir != "Left") bad2a = true;
      if (s.b.dir == "Left" && farb.dir != "Right") bad2a = true;
      if (s.b.dir == "Parent" && farb.dir != "LChild" && farb.dir != "RChild")
        bad2b = true;
      if ((s.b.dir == "LChild" || s.b.dir == "RChild") && farb.dir != "Parent")
        bad2b = true;
    }
    if (bad2a) emit("sg.2a");
    if (bad2b) emit("sg.2b");
    // sg.2c: u(LChild, Right, Parent) = u when the path exists
    {
      std::set<int> cur{root};
      cur = step(m, cur, "LChild");
      cur = step(m, cur, "Right");
      cur = step(m, cur, "Parent");
      for (int w : cur)
        if (w != root) {
          emit("sg.2c");
          break;
        }
    }
    // sg.2d: u(Right, LChild, Left, Parent) = u when the path exists
    {
      std::set<int> cur{root};
      cur = step(m, cur, "Right");
      cur = step(m, cur, "LChild");
      cur = step(m, cur, "Left");
      cur = step(m, cur, "Parent");
      for (int w : cur)
        if (w != root) {
          emit("sg.2d");
          break;
        }
    }

    bool has_r = u.has("Right"), has_l = u.has("Left");
    bool has_lc = u.has("LChild"), has_rc = u.has("RChild");
    bool has_p = u.has("Parent");
    // sg.3a / sg.3b: level boundaries agree with the parent
    bool bad3a = false, bad3b = false, bad3c = false, bad3d = false;
    for (const auto& s : u.slots) {
      if (s.b.dir != "Parent") continue;
      const StarInfo& par = m.star.at(s.far);
      BIn farb = parse_bin(view.labels.get(kInB, half_key(s.edge, 1 - s.side), "-"));
      // the right boundary is the rightmost path: a node lacks Right exactly
      // when its parent does and it is the parent's right child (and
      // symmetrically for Left); left children always have a Right sibling
      if (!has_r && par.has("Right")) bad3a = true;
      if (has_r && !par.has("Right") && farb.dir == "RChild") bad3a = true;
      if (!has_l && par.has("Left")) bad3b = true;
      if (has_l && !par.has("Left") && farb.dir == "LChild") bad3b = true;
      if (!has_r && farb.dir != "RChild") bad3c = true;
      if (!has_l && farb.dir != "LChild") bad3d = true;
    }
    if (bad3a) emit("sg.3a");
    if (bad3b) emit("sg.3b");
    if (bad3c) emit("sg.3c");
    if (bad3d) emit("sg.3d");
    // sg.3e: a node without horizontal edges is the root (or a lone leaf):
    // its sub-gadget edges are exactly {LChild, RChild} or none, no Parent
    if (!has_r && !has_l) {
      int subs = 0;
      bool only_children = true;
      for (const auto& s : u.slots)
        if (is_sub_dir(s.b.dir)) {
          ++subs;
          if (s.b.dir != "LChild" && s.b.dir != "RChild") only_children = false;
        }
      bool ok = (subs == 0) || (subs == 2 && only_children && has_lc && has_rc);
      if (!ok || has_p) emit("sg.3e");
    }
    // sg.3f: both children or none
    if (has_lc != has_rc) emit("sg.3f");
    // sg.3g: the bottom boundary is a full level
    if (!has_lc && !has_rc) {
      bool bad = false;
      for (const auto& s : u.slots) {
        if (s.b.dir != "Right" && s.b.dir != "Left") continue;
        const StarInfo& nb = m.star.at(s.far);
        if (nb.has("LChild") || nb.has("RChild")) bad = true;
      }
      if (bad) emit("sg.3g");
    }
    // sg.3h: ports are exactly the bottom-right corners
    {
      bool is_corner = !has_r && !has_lc && !has_rc;
      if ((u.v.port != "NoPort") != is_corner) emit("sg.3h");
    }
    // g.1: root-center adjacency
    {
      int centers = 0;
      bool bad = false;
      for (const auto& s : u.slots) {
        if (m.star.at(s.far).v.node == "Center") ++centers;
        if (s.b.dir == "Up" && m.star.at(s.far).v.node != "Center") bad = true;
        if (s.b.dir.rfind("Down_", 0) == 0) bad = true;
      }
      if (!has_p && centers != 1) bad = true;
      if (has_p && centers != 0) bad = true;
      if (bad) emit("g.1");
    }
  } else {
    // center checks g.2a-g.2d
    bool bad2a = u.slots.size() != static_cast<std::size_t>(delta);
    bool bad2b = false, bad2c = false, bad2d = false;
    std::set<int> indices;
    for (const auto& s : u.slots) {
      const StarInfo& nb = m.star.at(s.far);
      int i = label_index(nb.v.node);
      if (nb.v.node.rfind("Index_", 0) != 0 || i < 1 || nb.has("Parent")) bad2a = true;
      if (s.b.dir.rfind("Down_", 0) != 0 || label_index(s.b.dir) != i) bad2b = true;
      BIn farb = parse_bin(view.labels.get(kInB, half_key(s.edge, 1 - s.side), "-"));
      if (farb.dir != "Up") bad2c = true;
      if (i >= 1 && indices.count(i)) bad2d = true;
      indices.insert(i);
    }
    if (bad2a) emit("g.2a");
    if (bad2b) emit("g.2b");
    if (bad2c) emit("g.2c");
    if (bad2d) emit("g.2d");
  }

  // col.rep: own color in range and replicated on own half-edges
  {
    bool bad = u.v.color < 0 || u.v.color >= color_palette(delta);
    for (const auto& s : u.slots)
      if (s.b.color != u.v.color) bad = true;
    if (center && u.v.color < 0) bad = u.v.color >= color_palette(delta);
    if (bad) emit("col.rep");
  }
  // col.d2: proper distance-2 coloring around u, including collisions
  // between two of u's neighbors (u is the witnessing middle node)
  {
    bool bad = false;
    std::set<int> reach;  // nodes within distance 2, excluding u
    std::set<int> nbr_colors;
    for (const auto& s : u.slots) {
      const StarInfo& nb = m.star.at(s.far);
      if (s.far != root) reach.insert(s.far);
      if (nb.v.color >= 0 && nbr_colors.count(nb.v.color)) bad = true;
      nbr_colors.insert(nb.v.color);
      for (const auto& s2 : nb.slots)
        if (s2.far != root) reach.insert(s2.far);
    }
    for (int w : reach)
      if (m.star.at(w).v.color == u.v.color) bad = true;
    if (bad) emit("col.d2");
  }
  return out;
}

std::vector<std::pair<int, std::string>> check_gadget(const PortedMultigraph& g,
                                                      const Labeling& in,
                                                      int delta) {
  std::vector<std::pair<int, std::string>> out;
  for (const auto& nr : g.nodes()) {
    View v = ball(g, in, nr.id, 2);
    for (const auto& id : gadget_local_check(v, nr.id, delta))
      out.emplace_back(nr.id, id);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mutations
// ---------------------------------------------------------------------------

namespace {

std::uint64_t mix(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

// rebuild a labeling after edges were re-indexed; keep[i] = old index of new i
Labeling remap_edges(const Labeling& in, const std::vector<int>& keep) {
  Labeling out;
  for (const auto& [name, layer] : in.layers) {
    Layer l;
    l.carrier = layer.carrier;
    if (layer.carrier == Carrier::V) {
      l.values = layer.values;
    } else if (layer.carrier == Carrier::E) {
      for (std::size_t ni = 0; ni < keep.size(); ++ni) {
        auto it = layer.values.find(keep[ni]);
        if (it != layer.values.end()) l.values[static_cast<std::int64_t>(ni)] = it->second;
      }
    } else {
      for (std::size_t ni = 0; ni < keep.size(); ++ni)
        for (int side = 0; side < 2; ++side) {
          auto it = layer.values.find(half_key(keep[ni], side));
          if (it != layer.values.end())
            l.values[half_key(static_cast<int>(ni), side)] = it->second;
        }
    }
    out.layers.emplace(name, std::move(l));
  }
  return out;
}

}  // namespace

Mutant mutate_gadget(const PortedMultigraph& g, const Labeling& in,
                     MutationKind kind, std::uint64_t seed) {
  std::uint64_t r = mix(seed + 0x6a09e667f3bcc909ULL);
  Mutant out;
  std::vector<NodeRecord> nodes = g.nodes();
  std::vector<EdgeRecord> edges = g.edges();
  auto node_at = [&](std::uint64_t k) { return nodes[k % nodes.size()].id; };

  switch (kind) {
    case MutationKind::DeleteEdge: {
      if (edges.empty()) throw GraphError("delete-edge on edgeless graph");
      int ei = static_cast<int>(r % edges.size());
      EdgeRecord victim = edges[ei];
      std::vector<int> keep;
      std::vector<EdgeRecord> ne;
      for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
        if (i == ei) continue;
        keep.push_back(i);
        ne.push_back(edges[i]);
      }
      // close the port gaps at both endpoints
      for (auto& e : ne)
        for (int side = 0; side < 2; ++side)
          for (int vs = 0; vs < 2; ++vs)
            if (e.ep[side].node == victim.ep[vs].node &&
                e.ep[side].port > victim.ep[vs].port &&
                !(vs == 1 && victim.self_loop() &&
                  victim.ep[0].node == victim.ep[1].node && false))
              e.ep[side].port -= 1;
      for (auto& nr : nodes) {
        if (nr.id == victim.ep[0].node) nr.degree -= 1;
        if (nr.id == victim.ep[1].node) nr.degree -= 1;
      }
      out.g = PortedMultigraph::build(nodes, ne);
      out.in = remap_edges(in, keep);
      out.description = "delete-edge " + std::to_string(ei);
      break;
    }
    case MutationKind::AddEdge: {
      int u = node_at(r);
      int v = node_at(mix(r));
      EdgeRecord e;
      e.ep[0].node = u;
      e.ep[1].node = v;
      for (auto& nr : nodes) {
        if (nr.id == u) {
          e.ep[0].port = nr.degree + 1;
          nr.degree += 1;
        }
      }
      for (auto& nr : nodes) {
        if (nr.id == v) {
          e.ep[1].port = nr.degree + 1;
          nr.degree += 1;
        }
      }
      edges.push_back(e);
      out.g = PortedMultigraph::build(nodes, edges);
      out.in = in;
      int ei = static_cast<int>(edges.size()) - 1;
      BIn b0, b1;
      b0.dir = "Right";
      b1.dir = "Left";
      b0.color = parse_vin(in.get(kInV, u, "-")).color;
      b1.color = parse_vin(in.get(kInV, v, "-")).color;
      out.in.set(kInB, Carrier::B, half_key(ei, 0), emit_bin(b0));
      out.in.set(kInB, Carrier::B, half_key(ei, 1), emit_bin(b1));
      if (out.in.has(kInE))
        out.in.set(kInE, Carrier::E, ei, in.get(kInE, 0, "-"));
      out.description = "add-edge " + std::to_string(u) + "-" + std::to_string(v);
      break;
    }
    case MutationKind::RelabelHalfEdge: {
      if (edges.empty()) throw GraphError("relabel-halfedge on edgeless graph");
      std::int64_t key = static_cast<std::int64_t>(r % (edges.size() * 2));
      BIn b = parse_bin(in.get(kInB, key, "-"));
      std::size_t at = 0;
      for (std::size_t i = 0; i < kAllDirs.size(); ++i)
        if (kAllDirs[i] == b.dir) at = i;
      b.dir = kAllDirs[(at + 1) % kAllDirs.size()];
      out.g = g;
      out.in = in;
      out.in.set(kInB, Carrier::B, key, emit_bin(b));
      out.description = "relabel-halfedge " + std::to_string(key) + " -> " + b.dir;
      break;
    }
    case MutationKind::RelabelNode: {
      int u = node_at(r);
      VIn v = parse_vin(in.get(kInV, u, "-"));
      switch (mix(r + 1) % 3) {
        case 0:
          v.port = v.port == "NoPort" ? "Port_1" : "NoPort";
          break;
        case 1:
          if (v.node == "Center")
            v.node = "Index_1";
          else
            v.node = "Index_" + std::to_string(label_index(v.node) + 1);
          break;
        default:
          v.node = v.node == "Center" ? "Index_1" : "Center";
          break;
      }
      out.g = g;
      out.in = in;
      out.in.set(kInV, Carrier::V, u, emit_vin(v));
      out.description = "relabel-node " + std::to_string(u) + " -> " + emit_vin(v);
      break;
    }
    case MutationKind::SwapPort: {
      int u = -1;
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        const auto& nr = nodes[(r + k) % nodes.size()];
        if (nr.degree >= 2) {
          u = nr.id;
          break;
        }
      }
      if (u < 0) throw GraphError("swap-port needs a node of degree >= 2");
      int d = g.degree(u);
      int p1 = static_cast<int>(mix(r + 2) % d) + 1;
      int p2 = static_cast<int>(mix(r + 3) % d) + 1;
      if (p1 == p2) p2 = p2 % d + 1;
      for (auto& e : edges)
        for (int side = 0; side < 2; ++side) {
          if (e.ep[side].node != u) continue;
          if (e.ep[side].port == p1)
            e.ep[side].port = p2;
          else if (e.ep[side].port == p2)
            e.ep[side].port = p1;
        }
      out.g = PortedMultigraph::build(nodes, edges);
      out.in = in;
      out.description = "swap-port node " + std::to_string(u) + " ports " +
                        std::to_string(p1) + "," + std::to_string(p2);
      break;
    }
    case MutationKind::Recolor: {
      int u = -1;
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        const auto& nr = nodes[(r + k) % nodes.size()];
        if (nr.degree >= 1) {
          u = nr.id;
          break;
        }
      }
      if (u < 0) throw GraphError("recolor needs a node with a neighbor");
      auto [ei, side] = g.incident(u).front();
      int w = g.other_endpoint(ei, side);
      int c = parse_vin(in.get(kInV, w, "-")).color;
      VIn v = parse_vin(in.get(kInV, u, "-"));
      v.color = c;
      out.g = g;
      out.in = in;
      out.in.set(kInV, Carrier::V, u, emit_vin(v));
      for (const auto& [e2, s2] : g.incident(u)) {
        BIn b = parse_bin(in.get(kInB, half_key(e2, s2), "-"));
        b.color = c;
        out.in.set(kInB, Carrier::B, half_key(e2, s2), emit_bin(b));
      }
      out.description = "recolor node " + std::to_string(u) + " -> " +
                        std::to_string(c);
      break;
    }
  }
  return out;
}

}  // namespace lcl
