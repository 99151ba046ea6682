#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lcl {

class GraphError : public std::runtime_error {
 public:
  explicit GraphError(const std::string& m) : std::runtime_error(m) {}
};

struct Endpoint {
  int node = 0;  // node id
  int port = 0;  // 1-based port slot
  friend bool operator==(const Endpoint& a, const Endpoint& b) {
    return a.node == b.node && a.port == b.port;
  }
};

struct EdgeRecord {
  Endpoint ep[2];
  bool self_loop() const { return ep[0].node == ep[1].node; }
};

struct NodeRecord {
  int id = 0;
  int degree = 0;
};

enum class Carrier { V, E, B };

// Labeling keys: V -> node id, E -> edge index, B -> edge index * 2 + side.
inline std::int64_t half_key(int edge, int side) {
  return static_cast<std::int64_t>(edge) * 2 + side;
}

struct Layer {
  Carrier carrier = Carrier::V;
  std::map<std::int64_t, std::string> values;
};

struct Labeling {
  std::map<std::string, Layer> layers;

  bool has(const std::string& name) const { return layers.count(name) != 0; }
  Layer& layer(const std::string& name, Carrier c) {
    auto it = layers.find(name);
    if (it == layers.end()) {
      Layer l;
      l.carrier = c;
      it = layers.emplace(name, std::move(l)).first;
    }
    return it->second;
  }
  const Layer* find(const std::string& name) const {
    auto it = layers.find(name);
    return it == layers.end() ? nullptr : &it->second;
  }
  std::string get(const std::string& name, std::int64_t key,
                  const std::string& dflt = "") const {
    const Layer* l = find(name);
    if (!l) return dflt;
    auto it = l->values.find(key);
    return it == l->values.end() ? dflt : it->second;
  }
  void set(const std::string& name, Carrier c, std::int64_t key,
           const std::string& value) {
    layer(name, c).values[key] = value;
  }
};

// Port-numbered multigraph. Self-loops occupy two distinct ports of one
// node; parallel edges and disconnected graphs are allowed. Node ids are
// unique positive integers, not necessarily contiguous.
class PortedMultigraph {
 public:
  PortedMultigraph() = default;

  // degrees: id -> degree. Edges reference (id, port) pairs.
  static PortedMultigraph build(const std::vector<NodeRecord>& nodes,
                                const std::vector<EdgeRecord>& edges);

  const std::vector<NodeRecord>& nodes() const { return nodes_; }
  const std::vector<EdgeRecord>& edges() const { return edges_; }
  int n() const { return static_cast<int>(nodes_.size()); }
  int m() const { return static_cast<int>(edges_.size()); }

  bool has_node(int id) const { return index_.count(id) != 0; }
  const NodeRecord& node(int id) const;
  int degree(int id) const { return node(id).degree; }
  int max_degree() const;

  // (edge index, side) occupying the given port, or nullopt if the port is
  // unused (only possible in graphs under construction; build() rejects it).
  std::optional<std::pair<int, int>> at_port(int id, int port) const;

  // incident (edge index, side) pairs in port order; a self-loop shows up
  // twice, once per side.
  const std::vector<std::pair<int, int>>& incident(int id) const;

  int other_endpoint(int edge_index, int side) const {
    return edges_[edge_index].ep[1 - side].node;
  }

 private:
  std::vector<NodeRecord> nodes_;
  std::vector<EdgeRecord> edges_;
  std::map<int, int> index_;  // id -> position in nodes_
  std::map<int, std::vector<std::pair<int, int>>> incident_;
};

// Radius-r neighborhood of a root node: the induced sub-multigraph on all
// nodes within r hops, original ids and ports preserved, labels restricted.
// Edge indices are local; orig_edge maps back to the parent graph.
struct View {
  int root = 0;
  int radius = 0;
  std::vector<NodeRecord> vnodes;     // nodes with original degrees, id order
  std::vector<EdgeRecord> vedges;     // endpoints with original ports
  std::vector<int> orig_edge;         // local edge index -> parent edge index
  std::map<int, int> dist;            // node id -> hop distance from root
  std::set<int> frontier;             // nodes at distance exactly radius
  Labeling labels;                    // E/B layers re-keyed to local indices
  std::map<int, std::vector<std::pair<int, int>>> incident;  // id -> (local edge, side), port order

  bool has_node(int id) const { return dist.count(id) != 0; }
  int node_degree(int id) const;  // original degree in the parent graph
  // true when every incident edge of every view node is present in the view
  bool component_complete() const;
  const std::vector<std::pair<int, int>>& inc(int id) const;
  int other(int local_edge, int side) const {
    return vedges[local_edge].ep[1 - side].node;
  }
  // Rebuild a proper graph from a component-complete view. Edge order follows
  // orig_edge order, so all nodes of one component reconstruct identically.
  PortedMultigraph as_graph() const;
};

// Restriction of the labels layers to the view is part of the view contract.
View ball(const PortedMultigraph& g, const Labeling& labels, int root, int r);

// Hop distance between two nodes; nullopt across components.
std::optional<int> hop_distance(const PortedMultigraph& g, int u, int v);

// BFS distances from a set of sources (by node id).
std::map<int, int> bfs_distances(const PortedMultigraph& g,
                                 const std::vector<int>& sources);

// Connected components as sorted id lists, ordered by smallest member id.
std::vector<std::vector<int>> components(const PortedMultigraph& g);

// Unlabeled multigraph isomorphism (self-loops and parallel edges count with
// multiplicity). Intended for small graphs; backtracking search.
bool multigraph_isomorphic(const PortedMultigraph& a, const PortedMultigraph& b);

}  // namespace lcl
