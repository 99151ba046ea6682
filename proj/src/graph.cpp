#include "lcl/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace lcl {

PortedMultigraph PortedMultigraph::build(const std::vector<NodeRecord>& nodes,
                                         const std::vector<EdgeRecord>& edges) {
  PortedMultigraph g;
  for (const auto& nr : nodes) {
    if (nr.id <= 0) throw GraphError("node id must be positive");
    if (nr.degree < 0) throw GraphError("negative degree");
    if (g.index_.count(nr.id))
      throw GraphError("duplicate node id " + std::to_string(nr.id));
    g.index_[nr.id] = static_cast<int>(g.nodes_.size());
    g.nodes_.push_back(nr);
    g.incident_[nr.id] = {};
  }
  std::map<std::pair<int, int>, int> used;  // (id, port) -> edge index
  for (std::size_t ei = 0; ei < edges.size(); ++ei) {
    const auto& e = edges[ei];
    for (int side = 0; side < 2; ++side) {
      const Endpoint& ep = e.ep[side];
      auto it = g.index_.find(ep.node);
      if (it == g.index_.end())
        throw GraphError("edge references unknown node " + std::to_string(ep.node));
      int deg = g.nodes_[it->second].degree;
      if (ep.port < 1 || ep.port > deg)
        throw GraphError("port " + std::to_string(ep.port) + " out of range for node " +
                         std::to_string(ep.node) + " of degree " + std::to_string(deg));
      auto key = std::make_pair(ep.node, ep.port);
      if (used.count(key))
        throw GraphError("port " + std::to_string(ep.port) + " of node " +
                         std::to_string(ep.node) + " used twice");
      used[key] = static_cast<int>(ei);
    }
    g.edges_.push_back(e);
  }
  for (const auto& nr : g.nodes_) {
    for (int p = 1; p <= nr.degree; ++p) {
      auto key = std::make_pair(nr.id, p);
      auto it = used.find(key);
      if (it == used.end())
        throw GraphError("port " + std::to_string(p) + " of node " +
                         std::to_string(nr.id) + " unused");
      int ei = it->second;
      int side = (g.edges_[ei].ep[0].node == nr.id && g.edges_[ei].ep[0].port == p) ? 0 : 1;
      g.incident_[nr.id].emplace_back(ei, side);
    }
  }
  return g;
}

const NodeRecord& PortedMultigraph::node(int id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw GraphError("unknown node id " + std::to_string(id));
  return nodes_[it->second];
}

int PortedMultigraph::max_degree() const {
  int d = 0;
  for (const auto& nr : nodes_) d = std::max(d, nr.degree);
  return d;
}

std::optional<std::pair<int, int>> PortedMultigraph::at_port(int id, int port) const {
  const auto& inc = incident(id);
  if (port < 1 || port > static_cast<int>(inc.size())) return std::nullopt;
  return inc[port - 1];
}

const std::vector<std::pair<int, int>>& PortedMultigraph::incident(int id) const {
  auto it = incident_.find(id);
  if (it == incident_.end()) throw GraphError("unknown node id " + std::to_string(id));
  return it->second;
}

int View::node_degree(int id) const {
  for (const auto& nr : vnodes)
    if (nr.id == id) return nr.degree;
  throw GraphError("node not in view");
}

bool View::component_complete() const {
  for (const auto& nr : vnodes) {
    auto it = incident.find(nr.id);
    int present = it == incident.end() ? 0 : static_cast<int>(it->second.size());
    if (present != nr.degree) return false;
  }
  return true;
}

const std::vector<std::pair<int, int>>& View::inc(int id) const {
  auto it = incident.find(id);
  if (it == incident.end()) throw GraphError("node not in view");
  return it->second;
}

PortedMultigraph View::as_graph() const {
  if (!component_complete())
    throw GraphError("view does not cover a complete component");
  return PortedMultigraph::build(vnodes, vedges);
}

View ball(const PortedMultigraph& g, const Labeling& labels, int root, int r) {
  if (!g.has_node(root)) throw GraphError("unknown root " + std::to_string(root));
  if (r < 0) throw GraphError("negative radius");
  View v;
  v.root = root;
  v.radius = r;
  std::deque<int> queue{root};
  v.dist[root] = 0;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    int du = v.dist[u];
    if (du == r) continue;
    // expand neighbors in increasing id order for determinism
    std::vector<int> nbrs;
    for (const auto& [ei, side] : g.incident(u)) nbrs.push_back(g.other_endpoint(ei, side));
    std::sort(nbrs.begin(), nbrs.end());
    for (int w : nbrs) {
      if (!v.dist.count(w)) {
        v.dist[w] = du + 1;
        queue.push_back(w);
      }
    }
  }
  for (const auto& [id, d] : v.dist) {
    v.vnodes.push_back(g.node(id));
    if (d == r) v.frontier.insert(id);
  }
  // induced edges in parent order
  for (int ei = 0; ei < g.m(); ++ei) {
    const auto& e = g.edges()[ei];
    if (v.dist.count(e.ep[0].node) && v.dist.count(e.ep[1].node)) {
      int local = static_cast<int>(v.vedges.size());
      v.vedges.push_back(e);
      v.orig_edge.push_back(ei);
      for (int side = 0; side < 2; ++side)
        v.incident[e.ep[side].node].emplace_back(local, side);
    }
  }
  for (auto& [id, inc] : v.incident) {
    std::sort(inc.begin(), inc.end(), [&](const auto& a, const auto& b) {
      return v.vedges[a.first].ep[a.second].port < v.vedges[b.first].ep[b.second].port;
    });
  }
  for (const auto& nr : v.vnodes)
    if (!v.incident.count(nr.id)) v.incident[nr.id] = {};
  // restrict labels; E/B re-keyed to local edge indices
  for (const auto& [name, layer] : labels.layers) {
    Layer out;
    out.carrier = layer.carrier;
    switch (layer.carrier) {
      case Carrier::V:
        for (const auto& [k, val] : layer.values)
          if (v.dist.count(static_cast<int>(k))) out.values[k] = val;
        break;
      case Carrier::E:
        for (std::size_t local = 0; local < v.orig_edge.size(); ++local) {
          auto it = layer.values.find(v.orig_edge[local]);
          if (it != layer.values.end()) out.values[static_cast<std::int64_t>(local)] = it->second;
        }
        break;
      case Carrier::B:
        for (std::size_t local = 0; local < v.orig_edge.size(); ++local)
          for (int side = 0; side < 2; ++side) {
            auto it = layer.values.find(half_key(v.orig_edge[local], side));
            if (it != layer.values.end())
              out.values[half_key(static_cast<int>(local), side)] = it->second;
          }
        break;
    }
    v.labels.layers.emplace(name, std::move(out));
  }
  return v;
}

std::optional<int> hop_distance(const PortedMultigraph& g, int u, int v) {
  if (!g.has_node(u) || !g.has_node(v)) throw GraphError("unknown node id");
  auto d = bfs_distances(g, {u});
  auto it = d.find(v);
  if (it == d.end()) return std::nullopt;
  return it->second;
}

std::map<int, int> bfs_distances(const PortedMultigraph& g,
                                 const std::vector<int>& sources) {
  std::map<int, int> dist;
  std::deque<int> queue;
  for (int s : sources) {
    if (!dist.count(s)) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (const auto& [ei, side] : g.incident(u)) {
      int w = g.other_endpoint(ei, side);
      if (!dist.count(w)) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

std::vector<std::vector<int>> components(const PortedMultigraph& g) {
  std::set<int> seen;
  std::vector<std::vector<int>> comps;
  for (const auto& nr : g.nodes()) {
    if (seen.count(nr.id)) continue;
    auto d = bfs_distances(g, {nr.id});
    std::vector<int> comp;
    for (const auto& [id, _] : d) {
      comp.push_back(id);
      seen.insert(id);
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  std::sort(comps.begin(), comps.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return comps;
}

namespace {

// adjacency signature: neighbor index -> multiplicity, self-loops doubled
std::map<int, int> adj_multiset(const PortedMultigraph& g, int id,
                                const std::map<int, int>& pos) {
  std::map<int, int> m;
  for (const auto& [ei, side] : g.incident(id)) {
    int w = g.other_endpoint(ei, side);
    m[pos.at(w)] += 1;
  }
  return m;
}

bool iso_search(const std::vector<int>& a_ids, const std::vector<int>& b_ids,
                const std::vector<std::map<int, int>>& a_adj,
                const std::vector<std::map<int, int>>& b_adj,
                std::vector<int>& map_ab, std::vector<bool>& used, std::size_t i) {
  if (i == a_ids.size()) return true;
  for (std::size_t j = 0; j < b_ids.size(); ++j) {
    if (used[j]) continue;
    if (a_adj[i].size() != b_adj[j].size()) continue;
    // check consistency with already-mapped vertices
    bool ok = true;
    for (const auto& [w, mult] : a_adj[i]) {
      if (static_cast<std::size_t>(w) <= i || w == static_cast<int>(i)) {
        int target = (w == static_cast<int>(i)) ? static_cast<int>(j) : map_ab[w];
        auto it = b_adj[j].find(target);
        if (it == b_adj[j].end() || it->second != mult) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;
    map_ab[i] = static_cast<int>(j);
    used[j] = true;
    if (iso_search(a_ids, b_ids, a_adj, b_adj, map_ab, used, i + 1)) return true;
    used[j] = false;
    map_ab[i] = -1;
  }
  return false;
}

}  // namespace

bool multigraph_isomorphic(const PortedMultigraph& a, const PortedMultigraph& b) {
  if (a.n() != b.n() || a.m() != b.m()) return false;
  std::vector<int> a_ids, b_ids;
  std::map<int, int> a_pos, b_pos;
  for (const auto& nr : a.nodes()) a_ids.push_back(nr.id);
  for (const auto& nr : b.nodes()) b_ids.push_back(nr.id);
  for (std::size_t i = 0; i < a_ids.size(); ++i) a_pos[a_ids[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < b_ids.size(); ++i) b_pos[b_ids[i]] = static_cast<int>(i);
  std::vector<int> a_deg, b_deg;
  for (const auto& nr : a.nodes()) a_deg.push_back(nr.degree);
  for (const auto& nr : b.nodes()) b_deg.push_back(nr.degree);
  {
    auto sa = a_deg, sb = b_deg;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
  }
  std::vector<std::map<int, int>> a_adj, b_adj;
  for (int id : a_ids) a_adj.push_back(adj_multiset(a, id, a_pos));
  for (int id : b_ids) b_adj.push_back(adj_multiset(b, id, b_pos));
  std::vector<int> map_ab(a_ids.size(), -1);
  std::vector<bool> used(b_ids.size(), false);
  return iso_search(a_ids, b_ids, a_adj, b_adj, map_ab, used, 0);
}

}  // namespace lcl
