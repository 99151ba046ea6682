#include "lcl/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lcl {

using nlohmann::json;

namespace {

const char* carrier_name(Carrier c) {
  switch (c) {
    case Carrier::V: return "V";
    case Carrier::E: return "E";
    case Carrier::B: return "B";
  }
  return "?";
}

Carrier carrier_from(const std::string& s) {
  if (s == "V") return Carrier::V;
  if (s == "E") return Carrier::E;
  if (s == "B") return Carrier::B;
  throw FormatError("bad carrier: " + s);
}

}  // namespace

std::string encode(const PortedMultigraph& g, const Labeling& labels) {
  json doc;
  doc["meta"]["n"] = g.n();
  doc["meta"]["delta"] = g.max_degree();
  json nodes = json::array();
  std::vector<NodeRecord> sorted = g.nodes();
  std::sort(sorted.begin(), sorted.end(),
            [](const NodeRecord& a, const NodeRecord& b) { return a.id < b.id; });
  for (const auto& nr : sorted) {
    json jn;
    jn["id"] = nr.id;
    jn["degree"] = nr.degree;
    json lab = json::object();
    for (const auto& [name, layer] : labels.layers) {
      if (layer.carrier != Carrier::V) continue;
      auto it = layer.values.find(nr.id);
      if (it != layer.values.end()) lab[name] = it->second;
    }
    if (!lab.empty()) jn["labels"] = lab;
    nodes.push_back(jn);
  }
  doc["nodes"] = nodes;
  json edges = json::array();
  for (int ei = 0; ei < g.m(); ++ei) {
    const auto& e = g.edges()[ei];
    json je;
    for (int side = 0; side < 2; ++side) {
      json js;
      js["id"] = e.ep[side].node;
      js["port"] = e.ep[side].port;
      json lab = json::object();
      for (const auto& [name, layer] : labels.layers) {
        if (layer.carrier != Carrier::B) continue;
        auto it = layer.values.find(half_key(ei, side));
        if (it != layer.values.end()) lab[name] = it->second;
      }
      if (!lab.empty()) js["labels"] = lab;
      je[side == 0 ? "side0" : "side1"] = js;
    }
    json lab = json::object();
    for (const auto& [name, layer] : labels.layers) {
      if (layer.carrier != Carrier::E) continue;
      auto it = layer.values.find(ei);
      if (it != layer.values.end()) lab[name] = it->second;
    }
    if (!lab.empty()) je["labels"] = lab;
    edges.push_back(je);
  }
  doc["edges"] = edges;
  // declare layers so empty layers survive the round trip
  json layers = json::object();
  for (const auto& [name, layer] : labels.layers)
    layers[name] = carrier_name(layer.carrier);
  doc["layers"] = layers;
  return doc.dump(2) + "\n";
}

std::pair<PortedMultigraph, Labeling> decode(const std::string& bytes) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed stream: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges"))
    throw FormatError("malformed stream: missing sections");
  std::vector<NodeRecord> nodes;
  std::vector<EdgeRecord> edges;
  Labeling labels;
  if (doc.contains("layers")) {
    for (const auto& [name, c] : doc["layers"].items())
      labels.layer(name, carrier_from(c.get<std::string>()));
  }
  for (const auto& jn : doc["nodes"]) {
    NodeRecord nr;
    nr.id = jn.at("id").get<int>();
    nr.degree = jn.at("degree").get<int>();
    nodes.push_back(nr);
    if (jn.contains("labels"))
      for (const auto& [name, val] : jn["labels"].items())
        labels.set(name, Carrier::V, nr.id, val.get<std::string>());
  }
  int ei = 0;
  for (const auto& je : doc["edges"]) {
    EdgeRecord e;
    const char* sides[2] = {"side0", "side1"};
    for (int side = 0; side < 2; ++side) {
      const auto& js = je.at(sides[side]);
      e.ep[side].node = js.at("id").get<int>();
      e.ep[side].port = js.at("port").get<int>();
      if (js.contains("labels"))
        for (const auto& [name, val] : js["labels"].items())
          labels.set(name, Carrier::B, half_key(ei, side), val.get<std::string>());
    }
    if (je.contains("labels"))
      for (const auto& [name, val] : je["labels"].items())
        labels.set(name, Carrier::E, ei, val.get<std::string>());
    edges.push_back(e);
    ++ei;
  }
  PortedMultigraph g;
  try {
    g = PortedMultigraph::build(nodes, edges);
  } catch (const GraphError& e) {
    throw FormatError(std::string("invalid graph in stream: ") + e.what());
  }
  return {std::move(g), std::move(labels)};
}

void save_graph(const std::string& path, const PortedMultigraph& g,
                const Labeling& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path);
  out << encode(g, labels);
}

std::pair<PortedMultigraph, Labeling> load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return decode(ss.str());
}

}  // namespace lcl
