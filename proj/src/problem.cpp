#include "lcl/problem.hpp"

#include <algorithm>

namespace lcl {

NodeCtx make_node_ctx(const PortedMultigraph& g, const Labeling& in,
                      const Labeling& out, int id) {
  NodeCtx ctx;
  ctx.v_in = in.get(kInV, id, "-");
  ctx.v_out = out.get(kOutV, id, "");
  for (const auto& [ei, side] : g.incident(id)) {
    HalfInfo h;
    h.port = g.edges()[ei].ep[side].port;
    h.e_in = in.get(kInE, ei, "-");
    h.e_out = out.get(kOutE, ei, "");
    h.b_in = in.get(kInB, half_key(ei, side), "-");
    h.b_out = out.get(kOutB, half_key(ei, side), "");
    ctx.inc.push_back(std::move(h));
  }
  return ctx;
}

EdgeCtx make_edge_ctx(const PortedMultigraph& g, const Labeling& in,
                      const Labeling& out, int ei) {
  EdgeCtx ctx;
  const auto& e = g.edges()[ei];
  ctx.e_in = in.get(kInE, ei, "-");
  ctx.e_out = out.get(kOutE, ei, "");
  for (int side = 0; side < 2; ++side) {
    int id = e.ep[side].node;
    ctx.v_in[side] = in.get(kInV, id, "-");
    ctx.v_out[side] = out.get(kOutV, id, "");
    ctx.b_in[side] = in.get(kInB, half_key(ei, side), "-");
    ctx.b_out[side] = out.get(kOutB, half_key(ei, side), "");
  }
  return ctx;
}

std::vector<Violation> verify(const NeLclProblem& p, const PortedMultigraph& g,
                              const Labeling& in, const Labeling& out) {
  std::vector<Violation> v;
  if (p.input_check) {
    auto iv = p.input_check(g, in);
    v.insert(v.end(), iv.begin(), iv.end());
    if (!v.empty()) return v;
  }
  auto check_alpha = [&](const Alphabet& a, const Labeling& l, const std::string& layer,
                         Carrier c, bool is_input) {
    for (const auto& nr : g.nodes()) {
      if (c != Carrier::V) break;
      std::string s = l.get(layer, nr.id, is_input ? "-" : "");
      if (s.empty())
        v.push_back({is_input ? Violation::Kind::Input : Violation::Kind::Node, nr.id,
                     "partial labeling: " + layer});
      else if (!a.contains(s))
        v.push_back({is_input ? Violation::Kind::Input : Violation::Kind::Node, nr.id,
                     "label outside alphabet: " + layer});
    }
    if (c == Carrier::V) return;
    for (int ei = 0; ei < g.m(); ++ei) {
      if (c == Carrier::E) {
        std::string s = l.get(layer, ei, is_input ? "-" : "");
        if (s.empty())
          v.push_back({is_input ? Violation::Kind::Input : Violation::Kind::Edge, ei,
                       "partial labeling: " + layer});
        else if (!a.contains(s))
          v.push_back({is_input ? Violation::Kind::Input : Violation::Kind::Edge, ei,
                       "label outside alphabet: " + layer});
      } else {
        for (int side = 0; side < 2; ++side) {
          std::string s = l.get(layer, half_key(ei, side), is_input ? "-" : "");
          if (s.empty())
            v.push_back({is_input ? Violation::Kind::Input : Violation::Kind::Edge, ei,
                         "partial labeling: " + layer});
          else if (!a.contains(s))
            v.push_back({is_input ? Violation::Kind::Input : Violation::Kind::Edge, ei,
                         "label outside alphabet: " + layer});
        }
      }
    }
  };
  check_alpha(p.in_v, in, kInV, Carrier::V, true);
  check_alpha(p.in_e, in, kInE, Carrier::E, true);
  check_alpha(p.in_b, in, kInB, Carrier::B, true);
  check_alpha(p.out_v, out, kOutV, Carrier::V, false);
  check_alpha(p.out_e, out, kOutE, Carrier::E, false);
  check_alpha(p.out_b, out, kOutB, Carrier::B, false);
  if (!v.empty()) return v;

  for (const auto& nr : g.nodes()) {
    if (p.node_check) {
      auto ids = p.node_check(make_node_ctx(g, in, out, nr.id));
      for (const auto& c : ids) v.push_back({Violation::Kind::Node, nr.id, c});
    }
  }
  for (int ei = 0; ei < g.m(); ++ei) {
    if (p.edge_check) {
      auto ids = p.edge_check(make_edge_ctx(g, in, out, ei));
      for (const auto& c : ids) v.push_back({Violation::Kind::Edge, ei, c});
    }
  }
  if (p.wide_node_check) {
    Labeling merged = in;
    for (const auto& [name, layer] : out.layers) merged.layers[name] = layer;
    for (const auto& nr : g.nodes()) {
      auto view = ball(g, merged, nr.id, p.wide_radius);
      auto ids = p.wide_node_check(view);
      for (const auto& c : ids) v.push_back({Violation::Kind::Node, nr.id, c});
    }
  }
  return v;
}

namespace {

struct Slot {
  Carrier carrier;
  std::int64_t key;
};

}  // namespace

EnumerationResult enumerate_solutions(const NeLclProblem& p,
                                      const PortedMultigraph& g,
                                      const Labeling& in, long long cap,
                                      int keep) {
  if (p.out_v.values.empty() || p.out_e.values.empty() || p.out_b.values.empty())
    throw GraphError("enumerate_solutions needs finite output alphabets");
  // total label-space size guard
  long double space = 1;
  for (int i = 0; i < g.n(); ++i) space *= p.out_v.values.size();
  for (int i = 0; i < g.m(); ++i)
    space *= static_cast<long double>(p.out_e.values.size()) * p.out_b.values.size() *
             p.out_b.values.size();
  if (space > static_cast<long double>(cap))
    throw GraphError("enumeration cap exceeded");

  // assignment order: node outputs first, then per edge (e, b0, b1) so that
  // edge constraints prune as soon as an edge is fully labeled
  std::vector<Slot> slots;
  for (const auto& nr : g.nodes()) slots.push_back({Carrier::V, nr.id});
  for (int ei = 0; ei < g.m(); ++ei) {
    slots.push_back({Carrier::E, ei});
    slots.push_back({Carrier::B, half_key(ei, 0)});
    slots.push_back({Carrier::B, half_key(ei, 1)});
  }
  EnumerationResult res;
  Labeling out;
  // prepare empty layers
  out.layer(kOutV, Carrier::V);
  out.layer(kOutE, Carrier::E);
  out.layer(kOutB, Carrier::B);

  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == slots.size()) {
      // node constraints need the full star; check all at the end
      for (const auto& nr : g.nodes()) {
        if (p.node_check && !p.node_check(make_node_ctx(g, in, out, nr.id)).empty())
          return;
      }
      res.count += 1;
      if (static_cast<int>(res.solutions.size()) < keep) res.solutions.push_back(out);
      return;
    }
    const Slot& s = slots[i];
    const Alphabet& a = s.carrier == Carrier::V   ? p.out_v
                        : s.carrier == Carrier::E ? p.out_e
                                                  : p.out_b;
    const char* layer = s.carrier == Carrier::V   ? kOutV
                        : s.carrier == Carrier::E ? kOutE
                                                  : kOutB;
    for (const auto& val : a.values) {
      out.layers[layer].values[s.key] = val;
      bool ok = true;
      if (s.carrier == Carrier::B && (s.key & 1) == 1 && p.edge_check) {
        int ei = static_cast<int>(s.key >> 1);
        if (!p.edge_check(make_edge_ctx(g, in, out, ei)).empty()) ok = false;
      }
      if (ok) rec(i + 1);
    }
    out.layers[layer].values.erase(s.key);
  };
  rec(0);
  return res;
}

Labeling canonical_output(const NeLclProblem& p, const PortedMultigraph& g) {
  Labeling out;
  for (const auto& nr : g.nodes())
    out.set(kOutV, Carrier::V, nr.id, p.out_v.canonical);
  for (int ei = 0; ei < g.m(); ++ei) {
    out.set(kOutE, Carrier::E, ei, p.out_e.canonical);
    out.set(kOutB, Carrier::B, half_key(ei, 0), p.out_b.canonical);
    out.set(kOutB, Carrier::B, half_key(ei, 1), p.out_b.canonical);
  }
  return out;
}

}  // namespace lcl
