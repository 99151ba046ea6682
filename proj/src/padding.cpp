#include "lcl/padding.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>
#include <set>

#include <json.hpp>

namespace lcl {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Padded graphs
// ---------------------------------------------------------------------------

PaddedGraph pad_graph(const PortedMultigraph& h, const Labeling& h_in,
                      const std::map<int, GadgetSpec>& specs) {
  PaddedGraph out;
  std::vector<NodeRecord> nodes;
  std::vector<EdgeRecord> edges;
  Labeling in;
  in.layer(kInV, Carrier::V);
  in.layer(kInE, Carrier::E);
  in.layer(kInB, Carrier::B);

  std::map<int, int> extra_port;  // port node id -> extra PortEdge slots used
  int next_base = 1;
  for (const auto& nr : h.nodes()) {
    auto it = specs.find(nr.id);
    if (it == specs.end()) throw GraphError("missing gadget spec for base node");
    if (nr.degree > it->second.delta)
      throw GraphError("base degree exceeds gadget delta");
    Gadget gad = build_gadget(it->second, next_base);
    next_base += it->second.node_count();
    out.center_of[nr.id] = gad.center_id;
    out.ports_of[nr.id] = gad.port_ids;

    int edge_off = static_cast<int>(edges.size());
    for (const auto& gn : gad.g.nodes()) nodes.push_back(gn);
    for (const auto& ge : gad.g.edges()) edges.push_back(ge);
    std::string pi = h_in.get(kInV, nr.id, "-");
    for (const auto& gn : gad.g.nodes()) {
      VIn v = parse_vin(gad.in.get(kInV, gn.id, "-"));
      v.pi = pi;
      in.set(kInV, Carrier::V, gn.id, emit_vin(v));
    }
    for (int ei = 0; ei < gad.g.m(); ++ei)
      for (int side = 0; side < 2; ++side)
        in.set(kInB, Carrier::B, half_key(edge_off + ei, side),
               gad.in.get(kInB, half_key(ei, side), "-"));
  }

  // one PortEdge per base edge, joining the two matching port nodes
  for (int ei = 0; ei < h.m(); ++ei) {
    const auto& e = h.edges()[ei];
    EdgeRecord pe;
    for (int side = 0; side < 2; ++side) {
      int base = e.ep[side].node;
      int port = e.ep[side].port;
      int pnode = out.ports_of.at(base).at(port - 1);
      pe.ep[side].node = pnode;
      int used = ++extra_port[pnode];
      // gadget degree of the port node, then extra slots in base-edge order
      for (auto& nrec : nodes)
        if (nrec.id == pnode) pe.ep[side].port = nrec.degree + used;
    }
    int idx = static_cast<int>(edges.size());
    edges.push_back(pe);
    EIn ein;
    ein.kind = "PortEdge";
    ein.pi = h_in.get(kInE, ei, "-");
    in.set(kInE, Carrier::E, idx, emit_ein(ein));
    for (int side = 0; side < 2; ++side) {
      BIn b;
      b.dir = "-";
      b.color = parse_vin(in.get(kInV, pe.ep[side].node, "-")).color;
      b.pi = h_in.get(kInB, half_key(ei, side), "-");
      in.set(kInB, Carrier::B, half_key(idx, side), emit_bin(b));
    }
  }
  for (auto& nrec : nodes) {
    auto it = extra_port.find(nrec.id);
    if (it != extra_port.end()) nrec.degree += it->second;
  }
  out.g = PortedMultigraph::build(nodes, edges);
  out.in = in;
  return out;
}

PaddedGraph pad_graph(const PortedMultigraph& h, const Labeling& h_in,
                      const GadgetSpec& spec) {
  std::map<int, GadgetSpec> specs;
  for (const auto& nr : h.nodes()) specs[nr.id] = spec;
  return pad_graph(h, h_in, specs);
}

// ---------------------------------------------------------------------------
// Output label codec
// ---------------------------------------------------------------------------

namespace {

json list_to_json(const SigmaList& l) {
  json j;
  j["S"] = l.S;
  j["iv"] = l.iv;
  j["ie"] = l.ie;
  j["ib"] = l.ib;
  j["ov"] = l.ov;
  j["oe"] = l.oe;
  j["ob"] = l.ob;
  return j;
}

bool strings_from_json(const json& j, std::vector<std::string>& out, int arity) {
  if (!j.is_array() || static_cast<int>(j.size()) != arity) return false;
  for (const auto& e : j) {
    if (!e.is_string()) return false;
    out.push_back(e);
  }
  return true;
}

}  // namespace

std::string emit_ppv(const PiPrimeV& v) {
  json j;
  j["list"] = list_to_json(v.list);
  j["ps"] = v.ps;
  j["psi"] = v.psi;
  return j.dump();
}

PiPrimeV parse_ppv(const std::string& s, int delta) {
  PiPrimeV v;
  v.bad = true;
  json j = json::parse(s, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return v;
  if (!j.contains("list") || !j["list"].is_object() || !j.contains("ps") ||
      !j["ps"].is_string() || !j.contains("psi") || !j["psi"].is_string())
    return v;
  v.ps = j["ps"];
  v.psi = j["psi"];
  if (v.ps != "PortErr_1" && v.ps != "PortErr_2" && v.ps != "NoPortErr") return v;
  const json& l = j["list"];
  if (!l.contains("S") || !l["S"].is_array()) return v;
  int prev = 0;
  for (const auto& e : l["S"]) {
    if (!e.is_number_integer()) return v;
    int i = e;
    if (i <= prev || i > delta) return v;  // sorted, unique, in range
    v.list.S.push_back(i);
    prev = i;
  }
  if (!l.contains("iv") || !l["iv"].is_string() || !l.contains("ov") ||
      !l["ov"].is_string())
    return v;
  v.list.iv = l["iv"];
  v.list.ov = l["ov"];
  if (!strings_from_json(l.value("ie", json()), v.list.ie, delta)) return v;
  if (!strings_from_json(l.value("ib", json()), v.list.ib, delta)) return v;
  if (!strings_from_json(l.value("oe", json()), v.list.oe, delta)) return v;
  if (!strings_from_json(l.value("ob", json()), v.list.ob, delta)) return v;
  v.bad = false;
  return v;
}

SigmaList canonical_list(const NeLclProblem& pi, int delta) {
  SigmaList l;
  l.iv = pi.in_v.canonical;
  l.ov = pi.out_v.canonical;
  l.ie.assign(delta, pi.in_e.canonical);
  l.ib.assign(delta, pi.in_b.canonical);
  l.oe.assign(delta, pi.out_e.canonical);
  l.ob.assign(delta, pi.out_b.canonical);
  return l;
}

// ---------------------------------------------------------------------------
// Pi' verifier
// ---------------------------------------------------------------------------

namespace {

bool is_port_label(const std::string& p) {
  return p.rfind("Port_", 0) == 0 && label_index(p) >= 1;
}

// is this Psi_G-or-epsilon output label an L_Err label?
bool lerr_e(const std::string& s) { return s != "eps" && s != "Ok"; }
bool lerr_b(const std::string& s) { return s != "eps" && s != "Ok"; }

}  // namespace

NeLclProblem pi_prime_problem(const NeLclProblem& pi, int delta) {
  auto base = std::make_shared<const NeLclProblem>(pi);
  NeLclProblem p;
  p.name = "pi-prime(" + pi.name + ")";
  auto always = [](const std::string&) { return true; };
  p.in_v = {always, {}, "-"};
  p.in_e = {always, {}, "-"};
  p.in_b = {always, {}, "-"};
  p.out_v = {[base, delta](const std::string& s) {
               PiPrimeV v = parse_ppv(s, delta);
               if (v.bad) return false;
               PsiV pv = parse_psi_v(v.psi);
               if (pv.kind == PsiV::Kind::Bad) return false;
               if (!base->in_v.contains(v.list.iv)) return false;
               if (!base->out_v.contains(v.list.ov)) return false;
               for (int t = 0; t < delta; ++t) {
                 if (!base->in_e.contains(v.list.ie[t])) return false;
                 if (!base->in_b.contains(v.list.ib[t])) return false;
                 if (!base->out_e.contains(v.list.oe[t])) return false;
                 if (!base->out_b.contains(v.list.ob[t])) return false;
               }
               return true;
             },
             {},
             emit_ppv({canonical_list(pi, delta), "NoPortErr", "Ok", false})};
  p.out_e = {[](const std::string& s) {
               return s == "eps" || s == "Ok" || s == "Err";
             },
             {"eps", "Ok", "Err"},
             "eps"};
  p.out_b = {[](const std::string& s) {
               return s == "eps" || !parse_psi_b(s).bad;
             },
             {},
             "eps"};

  p.node_check = [base, delta](const NodeCtx& ctx) -> std::vector<std::string> {
    std::vector<std::string> out;
    auto emit = [&](const std::string& id) {
      if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
    };
    PiPrimeV v = parse_ppv(ctx.v_out, delta);
    if (v.bad) return {"pp.shape"};

    // Constraint 2: Psi_G node constraints, PortEdges ignored
    NodeCtx sub = ctx;
    sub.v_out = v.psi;
    for (const auto& id : psi_g_node_check(sub, delta)) emit(id);

    // Constraint 3
    VIn vin = parse_vin(ctx.v_in);
    int pedges = 0;
    for (const auto& hh : ctx.inc)
      if (parse_ein(hh.e_in).kind == "PortEdge") ++pedges;
    bool is_port = is_port_label(vin.port);
    bool must_pe2 = is_port && pedges != 1;
    if ((v.ps == "PortErr_2") != must_pe2) emit("pp.3");

    // Constraint 5 with its L_Err escape
    bool escaped = v.psi != "Ok";
    for (const auto& hh : ctx.inc) {
      if (lerr_e(hh.e_out)) escaped = true;
      if (lerr_b(hh.b_out)) escaped = true;
    }
    if (!escaped) {
      int i = is_port ? label_index(vin.port) : -1;
      bool in_s = is_port && std::find(v.list.S.begin(), v.list.S.end(), i) !=
                                 v.list.S.end();
      if (is_port && in_s != (v.ps == "NoPortErr")) emit("pp.5a");
      if (vin.port == "Port_1" && v.list.iv != vin.pi) emit("pp.5b");
      if (in_s) {
        for (const auto& hh : ctx.inc) {
          if (parse_ein(hh.e_in).kind != "PortEdge") continue;
          if (v.list.ie[i - 1] != parse_ein(hh.e_in).pi ||
              v.list.ib[i - 1] != parse_bin(hh.b_in).pi)
            emit("pp.5c");
        }
      }
      // the hypothetical virtual-node configuration
      NodeCtx hc;
      hc.v_in = v.list.iv;
      hc.v_out = v.list.ov;
      for (std::size_t t = 0; t < v.list.S.size(); ++t) {
        int idx = v.list.S[t];  // alpha(t+1)
        HalfInfo hh;
        hh.port = static_cast<int>(t) + 1;
        hh.e_in = v.list.ie[idx - 1];
        hh.e_out = v.list.oe[idx - 1];
        hh.b_in = v.list.ib[idx - 1];
        hh.b_out = v.list.ob[idx - 1];
        hc.inc.push_back(hh);
      }
      if (base->node_check && !base->node_check(hc).empty()) emit("pp.5d");
    }
    return out;
  };

  p.edge_check = [base, delta](const EdgeCtx& ctx) -> std::vector<std::string> {
    std::vector<std::string> out;
    auto emit = [&](const std::string& id) {
      if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
    };
    EIn ein = parse_ein(ctx.e_in);
    PiPrimeV u = parse_ppv(ctx.v_out[0], delta);
    PiPrimeV v = parse_ppv(ctx.v_out[1], delta);
    if (u.bad || v.bad) return {"pp.shape"};
    VIn vu = parse_vin(ctx.v_in[0]);
    VIn vv = parse_vin(ctx.v_in[1]);

    if (ein.kind == "PortEdge") {
      // Constraint 1: epsilon discipline
      if (ctx.e_out != "eps") emit("pp.1");
      if (ctx.b_out[0] != "eps" || ctx.b_out[1] != "eps") emit("pp.1");
      // Constraint 4
      bool pu = is_port_label(vu.port), pv = is_port_label(vv.port);
      if (pu && pv && u.psi == "Ok" && v.psi == "Ok" &&
          (u.ps == "PortErr_1" || v.ps == "PortErr_1"))
        emit("pp.4");
      bool any_bad = vu.port == "NoPort" || vv.port == "NoPort" ||
                     u.psi != "Ok" || v.psi != "Ok";
      if (pu && any_bad && u.ps == "NoPortErr") emit("pp.4");
      if (pv && any_bad && v.ps == "NoPortErr") emit("pp.4");
    } else {
      if (ctx.e_out == "eps" || ctx.b_out[0] == "eps" || ctx.b_out[1] == "eps" ||
          parse_psi_b(ctx.b_out[0]).bad || parse_psi_b(ctx.b_out[1]).bad)
        emit("pp.1");
      // Constraint 2: Psi_G edge constraints
      EdgeCtx sub = ctx;
      sub.v_out[0] = u.psi;
      sub.v_out[1] = v.psi;
      for (const auto& id : psi_g_edge_check(sub, delta)) emit(id);
    }

    // Constraint 6 with its L_Err escape
    bool escaped = u.psi != "Ok" || v.psi != "Ok" || lerr_e(ctx.e_out) ||
                   lerr_b(ctx.b_out[0]) || lerr_b(ctx.b_out[1]);
    if (!escaped) {
      if (ein.kind == "GadEdge") {
        if (list_to_json(u.list) != list_to_json(v.list)) emit("pp.6a");
      } else {
        bool pu = is_port_label(vu.port), pv = is_port_label(vv.port);
        if (pu && pv) {
          int i = label_index(vu.port), j = label_index(vv.port);
          if (u.list.ie[i - 1] != v.list.ie[j - 1] ||
              u.list.oe[i - 1] != v.list.oe[j - 1])
            emit("pp.6b");
          EdgeCtx hc;
          hc.e_in = u.list.ie[i - 1];
          hc.e_out = u.list.oe[i - 1];
          hc.v_in[0] = u.list.iv;
          hc.v_in[1] = v.list.iv;
          hc.v_out[0] = u.list.ov;
          hc.v_out[1] = v.list.ov;
          hc.b_in[0] = u.list.ib[i - 1];
          hc.b_in[1] = v.list.ib[j - 1];
          hc.b_out[0] = u.list.ob[i - 1];
          hc.b_out[1] = v.list.ob[j - 1];
          if (base->edge_check && !base->edge_check(hc).empty()) emit("pp.6b");
        }
      }
    }
    return out;
  };

  int max_deg = std::max(delta, 5) + 1;
  p.input_check = [max_deg](const PortedMultigraph& g,
                            const Labeling&) -> std::vector<Violation> {
    std::vector<Violation> v;
    for (const auto& nr : g.nodes())
      if (nr.degree > max_deg)
        v.push_back({Violation::Kind::Input, nr.id, "pp.delta"});
    return v;
  };
  return p;
}

NeLclProblem recurse(const NeLclProblem& base, int k, int delta) {
  if (k < 1) throw GraphError("recursion level must be >= 1");
  NeLclProblem p = base;
  for (int i = 1; i < k; ++i) p = pi_prime_problem(p, delta);
  return p;
}

// ---------------------------------------------------------------------------
// The solver
// ---------------------------------------------------------------------------

namespace {

struct GadgetData {
  int gid = 0;
  std::vector<int> nodes;  // sorted ids
  bool usable = true;      // V produced a coherent labeling
  bool valid = false;
  std::map<int, std::string> psi_v;
  std::map<std::int64_t, std::string> psi_b;  // orig half key -> label
  std::map<int, std::string> psi_e;           // orig edge -> label
  std::map<int, int> port_node;               // i -> node id
  std::string port1_pi = "-";
};

struct VCompData {
  bool ok = false;
  PortedMultigraph vg;
  Labeling vin;
  Labeling vout;
  std::vector<int> orig_pedge;                          // virtual edge -> orig edge
  std::map<int, std::vector<int>> S;                    // gid -> valid ports
  std::map<int, std::map<int, std::pair<int, int>>> pe;  // gid -> i -> (vedge, side)
};

struct Caches {
  std::map<int, GadgetData> gadget;
  std::map<int, VCompData> comp;
  std::map<int, int> comp_of;  // gid -> comp key
};

}  // namespace

LocalAlgorithm pi_prime_solver(const NeLclProblem& base,
                               const LocalAlgorithm& inner, int delta,
                               int radius) {
  auto caches = std::make_shared<Caches>();
  auto canon = std::make_shared<const SigmaList>(canonical_list(base, delta));
  LocalAlgorithm alg;
  alg.name = "pi-prime-solver(" + inner.name + ")";
  alg.radius = [radius](int n) { return radius < 0 ? n : radius; };
  alg.rule = [inner, delta, caches, canon](const View& view, int n, int,
                                           Rng&) -> RuleOut {
    RuleOut out;
    auto fail = [&](const std::string& why) {
      out.fail = why;
      return out;
    };

    auto visible = [&](int id) {
      return static_cast<int>(view.inc(id).size()) == view.node_degree(id);
    };
    auto edge_kind = [&](int local_edge) {
      return parse_ein(view.labels.get(kInE, local_edge, "-")).kind;
    };

    // gadget component of `start` over GadEdges; nullopt if any member or
    // boundary information is missing from the view
    auto gather = [&](int start) -> std::optional<std::vector<int>> {
      std::set<int> seen{start};
      std::deque<int> q{start};
      while (!q.empty()) {
        int x = q.front();
        q.pop_front();
        if (!visible(x)) return std::nullopt;
        for (const auto& [ei, side] : view.inc(x)) {
          if (edge_kind(ei) != "GadEdge") continue;
          int w = view.other(ei, side);
          if (!seen.count(w)) {
            seen.insert(w);
            q.push_back(w);
          }
        }
      }
      return std::vector<int>(seen.begin(), seen.end());
    };

    std::function<GadgetData*(int)> ensure_gadget = [&](int start) -> GadgetData* {
      auto comp = gather(start);
      if (!comp) return nullptr;
      int gid = comp->front();
      auto it = caches->gadget.find(gid);
      if (it != caches->gadget.end()) return &it->second;

      GadgetData gd;
      gd.gid = gid;
      gd.nodes = *comp;
      // rebuild the gadget as a standalone graph, edges in orig order
      std::vector<std::pair<int, int>> gedges;  // (orig, local)
      std::set<int> members(comp->begin(), comp->end());
      std::set<int> taken;
      for (int id : *comp)
        for (const auto& [ei, side] : view.inc(id)) {
          if (edge_kind(ei) != "GadEdge" || taken.count(ei)) continue;
          taken.insert(ei);
          gedges.emplace_back(view.orig_edge[ei], ei);
        }
      std::sort(gedges.begin(), gedges.end());
      std::vector<EdgeRecord> ge;
      std::map<int, int> next_port, deg;
      Labeling gin;
      gin.layer(kInV, Carrier::V);
      gin.layer(kInE, Carrier::E);
      gin.layer(kInB, Carrier::B);
      for (std::size_t t = 0; t < gedges.size(); ++t) {
        const EdgeRecord& src = view.vedges[gedges[t].second];
        EdgeRecord e;
        for (int side = 0; side < 2; ++side) {
          e.ep[side].node = src.ep[side].node;
          e.ep[side].port = ++next_port[src.ep[side].node];
          deg[src.ep[side].node] += 1;
          gin.set(kInB, Carrier::B, half_key(static_cast<int>(t), side),
                  view.labels.get(kInB, half_key(gedges[t].second, side), "-"));
        }
        gin.set(kInE, Carrier::E, static_cast<std::int64_t>(t),
                view.labels.get(kInE, gedges[t].second, "-"));
        ge.push_back(e);
      }
      std::vector<NodeRecord> gn;
      for (int id : *comp) gn.push_back({id, deg.count(id) ? deg[id] : 0});
      for (int id : *comp)
        gin.set(kInV, Carrier::V, id, view.labels.get(kInV, id, "-"));

      PortedMultigraph gc = PortedMultigraph::build(gn, ge);
      RunResult rv = run(gc, gin, algorithm_v(n, delta), 0);
      gd.usable = rv.ok();
      gd.valid = true;
      for (int id : *comp) {
        std::string s = rv.out.get(kOutV, id, "");
        gd.psi_v[id] = s;
        if (s != "Ok") gd.valid = false;
        VIn vi = parse_vin(gin.get(kInV, id, "-"));
        int pi_idx = label_index(vi.port);
        if (vi.port.rfind("Port_", 0) == 0 && pi_idx >= 1 &&
            !gd.port_node.count(pi_idx))
          gd.port_node[pi_idx] = id;
        if (vi.port == "Port_1") gd.port1_pi = vi.pi;
      }
      for (std::size_t t = 0; t < gedges.size(); ++t) {
        gd.psi_e[gedges[t].first] =
            rv.out.get(kOutE, static_cast<std::int64_t>(t), "");
        for (int side = 0; side < 2; ++side)
          gd.psi_b[half_key(gedges[t].first, side)] =
              rv.out.get(kOutB, half_key(static_cast<int>(t), side), "");
      }
      return &caches->gadget.emplace(gid, std::move(gd)).first->second;
    };

    // PortStatus of one (visible) node; empty string means "not enough view"
    auto status_of = [&](int id, const GadgetData& own) -> std::string {
      VIn vi = parse_vin(view.labels.get(kInV, id, "-"));
      if (!is_port_label(vi.port)) return "NoPortErr";
      std::vector<std::pair<int, int>> pes;
      for (const auto& [ei, side] : view.inc(id))
        if (edge_kind(ei) == "PortEdge") pes.emplace_back(ei, side);
      if (pes.size() != 1) return "PortErr_2";
      if (!own.valid) return "PortErr_1";
      int far = view.other(pes[0].first, pes[0].second);
      if (!view.has_node(far)) return "";
      VIn fv = parse_vin(view.labels.get(kInV, far, "-"));
      if (!is_port_label(fv.port)) return "PortErr_1";
      GadgetData* fg = ensure_gadget(far);
      if (!fg) return "";
      if (!fg->usable || !fg->valid) return "PortErr_1";
      int fpes = 0;
      for (const auto& [ei, side] : view.inc(far))
        if (edge_kind(ei) == "PortEdge") ++fpes;
      if (fpes != 1) return "PortErr_1";
      return "NoPortErr";
    };

    // virtual component of a valid gadget
    auto ensure_comp = [&](GadgetData* own) -> VCompData* {
      auto cit = caches->comp_of.find(own->gid);
      if (cit != caches->comp_of.end()) return &caches->comp.at(cit->second);

      std::map<int, GadgetData*> comp;  // gid -> data
      std::deque<int> q{own->gid};
      comp[own->gid] = own;
      VCompData vc;
      std::set<int> pedges;  // orig edge ids of virtual edges
      while (!q.empty()) {
        GadgetData* gd = comp[q.front()];
        q.pop_front();
        std::vector<int> s;
        for (const auto& [i, pid] : gd->port_node) {
          std::string st = status_of(pid, *gd);
          if (st.empty()) return nullptr;  // need a larger view
          if (st != "NoPortErr") continue;
          s.push_back(i);
          // the single PortEdge at this port
          for (const auto& [ei, side] : view.inc(pid)) {
            if (edge_kind(ei) != "PortEdge") continue;
            pedges.insert(view.orig_edge[ei]);
            int far = view.other(ei, side);
            GadgetData* fg = ensure_gadget(far);
            if (!fg) return nullptr;
            if (!comp.count(fg->gid)) {
              comp[fg->gid] = fg;
              q.push_back(fg->gid);
            }
          }
        }
        vc.S[gd->gid] = s;
      }
      // virtual graph
      std::map<int, int> local_pe;  // orig edge -> local view edge
      for (std::size_t ei = 0; ei < view.vedges.size(); ++ei)
        if (pedges.count(view.orig_edge[ei]))
          local_pe[view.orig_edge[ei]] = static_cast<int>(ei);
      std::vector<NodeRecord> vn;
      for (const auto& [gid, gd] : comp)
        vn.push_back({gid, static_cast<int>(vc.S[gid].size())});
      std::vector<EdgeRecord> ve;
      Labeling vin;
      vin.layer(kInV, Carrier::V);
      vin.layer(kInE, Carrier::E);
      vin.layer(kInB, Carrier::B);
      for (const auto& [gid, gd] : comp)
        vin.set(kInV, Carrier::V, gid, gd->port1_pi);
      for (const auto& [orig, lei] : local_pe) {
        EdgeRecord e;
        int t = static_cast<int>(ve.size());
        for (int side = 0; side < 2; ++side) {
          int pid = view.vedges[lei].ep[side].node;
          VIn pv = parse_vin(view.labels.get(kInV, pid, "-"));
          int i = label_index(pv.port);
          GadgetData* gd = ensure_gadget(pid);
          if (!gd) return nullptr;
          const auto& s = vc.S.at(gd->gid);
          int vport = static_cast<int>(
                          std::find(s.begin(), s.end(), i) - s.begin()) + 1;
          e.ep[side].node = gd->gid;
          e.ep[side].port = vport;
          vc.pe[gd->gid][i] = {t, side};
          vin.set(kInB, Carrier::B, half_key(t, side),
                  parse_bin(view.labels.get(kInB, half_key(lei, side), "-")).pi);
        }
        vin.set(kInE, Carrier::E, t,
                parse_ein(view.labels.get(kInE, lei, "-")).pi);
        ve.push_back(e);
        vc.orig_pedge.push_back(orig);
      }
      vc.vg = PortedMultigraph::build(vn, ve);
      vc.vin = vin;
      RunResult rv = run(vc.vg, vc.vin, inner, 0);
      vc.ok = rv.ok();
      vc.vout = rv.out;
      int key = comp.begin()->first;
      for (const auto& [gid, gd] : comp) caches->comp_of[gid] = key;
      return &caches->comp.emplace(key, std::move(vc)).first->second;
    };

    // ------------------------------------------------------------------
    int root = view.root;
    if (!visible(root)) return fail("view misses incident edges of the node");
    GadgetData* own = ensure_gadget(root);
    if (!own) return fail("gadget not fully contained in the view");
    if (!own->usable) return fail("validity prover produced no coherent labeling");

    PiPrimeV pv;
    pv.psi = own->psi_v.at(root);
    std::string st = status_of(root, *own);
    if (st.empty()) return fail("neighboring gadget not contained in the view");
    pv.ps = st;

    // canonical completion everywhere; valid gadgets overwrite the used slots
    pv.list = *canon;
    if (own->valid) {
      VCompData* vc = ensure_comp(own);
      if (!vc) return fail("virtual component not contained in the view");
      if (!vc->ok) return fail("inner solver failed on the virtual graph");
      pv.list.iv = own->port1_pi;
      pv.list.ov = vc->vout.get(kOutV, own->gid, "-");
      pv.list.S = vc->S.at(own->gid);
      for (int i : pv.list.S) {
        auto [t, side] = vc->pe.at(own->gid).at(i);
        pv.list.ie[i - 1] = vc->vin.get(kInE, t, "-");
        pv.list.ib[i - 1] = vc->vin.get(kInB, half_key(t, side), "-");
        pv.list.oe[i - 1] = vc->vout.get(kOutE, t, "");
        pv.list.ob[i - 1] = vc->vout.get(kOutB, half_key(t, side), "");
      }
    }
    out.v = emit_ppv(pv);
    for (const auto& [ei, side] : view.inc(root)) {
      if (edge_kind(ei) == "PortEdge") {
        out.e.push_back("eps");
        out.b.push_back("eps");
      } else {
        out.e.push_back(own->psi_e.at(view.orig_edge[ei]));
        out.b.push_back(own->psi_b.at(half_key(view.orig_edge[ei], side)));
      }
    }
    return out;
  };
  return alg;
}

AlgorithmFamily pi_prime_family(const NeLclProblem& base,
                                const LocalAlgorithm& inner, int delta) {
  return [base, inner, delta](int t) {
    return pi_prime_solver(base, inner, delta, t);
  };
}

RunResult solve_pi_prime(const PortedMultigraph& g, const Labeling& in,
                         const NeLclProblem& base, const LocalAlgorithm& inner,
                         int delta, std::uint64_t seed) {
  return run(g, in, pi_prime_solver(base, inner, delta, -1), seed);
}

// ---------------------------------------------------------------------------
// Virtual extraction
// ---------------------------------------------------------------------------

std::optional<VirtualSolution> extract_virtual_solution(
    const PortedMultigraph& g, const Labeling& in, const Labeling& out,
    int delta) {
  // gadget components over GadEdges
  std::map<int, std::vector<std::pair<int, int>>> gadj;
  std::vector<bool> portedge(g.m(), false);
  for (int ei = 0; ei < g.m(); ++ei) {
    if (parse_ein(in.get(kInE, ei, "-")).kind == "PortEdge") {
      portedge[ei] = true;
      continue;
    }
    for (int side = 0; side < 2; ++side)
      gadj[g.edges()[ei].ep[side].node].emplace_back(ei, side);
  }
  std::map<int, int> gid_of;
  std::map<int, std::vector<int>> members;
  for (const auto& nr : g.nodes()) {
    if (gid_of.count(nr.id)) continue;
    std::set<int> comp{nr.id};
    std::deque<int> q{nr.id};
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      for (const auto& [ei, side] : gadj[x]) {
        int w = g.other_endpoint(ei, side);
        if (!comp.count(w)) {
          comp.insert(w);
          q.push_back(w);
        }
      }
    }
    int gid = *comp.begin();
    for (int id : comp) gid_of[id] = gid;
    members[gid] = std::vector<int>(comp.begin(), comp.end());
  }

  struct GInfo {
    bool valid = true;
    PiPrimeV rep;  // list of any member (equal across the gadget if accepted)
    std::map<int, int> port_node;
  };
  std::map<int, GInfo> infos;
  for (const auto& [gid, ids] : members) {
    GInfo gi;
    for (int id : ids) {
      PiPrimeV pvv = parse_ppv(out.get(kOutV, id, ""), delta);
      if (pvv.bad || pvv.psi != "Ok") gi.valid = false;
      if (id == gid) gi.rep = pvv;
      VIn vi = parse_vin(in.get(kInV, id, "-"));
      if (vi.port.rfind("Port_", 0) == 0 && label_index(vi.port) >= 1)
        gi.port_node[label_index(vi.port)] = id;
    }
    infos[gid] = gi;
  }

  VirtualSolution vs;
  std::vector<NodeRecord> vn;
  std::vector<EdgeRecord> ve;
  vs.vin.layer(kInV, Carrier::V);
  vs.vin.layer(kInE, Carrier::E);
  vs.vin.layer(kInB, Carrier::B);
  vs.vout.layer(kOutV, Carrier::V);
  vs.vout.layer(kOutE, Carrier::E);
  vs.vout.layer(kOutB, Carrier::B);
  for (const auto& [gid, gi] : infos) {
    if (!gi.valid) continue;
    vn.push_back({gid, static_cast<int>(gi.rep.list.S.size())});
    vs.vin.set(kInV, Carrier::V, gid, gi.rep.list.iv);
    vs.vout.set(kOutV, Carrier::V, gid, gi.rep.list.ov);
  }
  for (int ei = 0; ei < g.m(); ++ei) {
    if (!portedge[ei]) continue;
    int id0 = g.edges()[ei].ep[0].node, id1 = g.edges()[ei].ep[1].node;
    PiPrimeV p0 = parse_ppv(out.get(kOutV, id0, ""), delta);
    PiPrimeV p1 = parse_ppv(out.get(kOutV, id1, ""), delta);
    if (p0.bad || p1.bad) continue;
    if (p0.ps != "NoPortErr" || p1.ps != "NoPortErr") continue;
    int g0 = gid_of[id0], g1 = gid_of[id1];
    if (!infos[g0].valid || !infos[g1].valid) continue;
    int i = label_index(parse_vin(in.get(kInV, id0, "-")).port);
    int j = label_index(parse_vin(in.get(kInV, id1, "-")).port);
    if (i < 1 || j < 1) continue;
    const auto& s0 = infos[g0].rep.list.S;
    const auto& s1 = infos[g1].rep.list.S;
    auto f0 = std::find(s0.begin(), s0.end(), i);
    auto f1 = std::find(s1.begin(), s1.end(), j);
    if (f0 == s0.end() || f1 == s1.end()) return std::nullopt;
    EdgeRecord e;
    e.ep[0] = {g0, static_cast<int>(f0 - s0.begin()) + 1};
    e.ep[1] = {g1, static_cast<int>(f1 - s1.begin()) + 1};
    int t = static_cast<int>(ve.size());
    ve.push_back(e);
    vs.vin.set(kInE, Carrier::E, t, p0.list.ie[i - 1]);
    vs.vin.set(kInB, Carrier::B, half_key(t, 0), p0.list.ib[i - 1]);
    vs.vin.set(kInB, Carrier::B, half_key(t, 1), p1.list.ib[j - 1]);
    vs.vout.set(kOutE, Carrier::E, t, p0.list.oe[i - 1]);
    vs.vout.set(kOutB, Carrier::B, half_key(t, 0), p0.list.ob[i - 1]);
    vs.vout.set(kOutB, Carrier::B, half_key(t, 1), p1.list.ob[j - 1]);
  }
  try {
    vs.vg = PortedMultigraph::build(vn, ve);
  } catch (const GraphError&) {
    return std::nullopt;
  }
  return vs;
}

// ---------------------------------------------------------------------------
// Hard instances
// ---------------------------------------------------------------------------

HardInstance hard_instance(int n, int delta) {
  if (delta < 2) throw GraphError("hard_instance needs delta >= 2");
  int f = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
  while ((f + 1) * (f + 1) <= n) ++f;  // guard against fp rounding
  while (f * f > n) --f;
  if (f < 3) throw GraphError("no gadget fits: base cycle too small");
  int budget = n / f;
  int h = 0, gadget_n = 0;
  for (int hh = 1; hh <= 24; ++hh) {
    long long size = static_cast<long long>(delta) * ((1LL << hh) - 1) + 1;
    if (size <= budget) {
      h = hh;
      gadget_n = static_cast<int>(size);
    } else {
      break;
    }
  }
  if (h == 0) throw GraphError("no gadget fits at this size");

  // base cycle on f nodes
  std::vector<NodeRecord> hn;
  std::vector<EdgeRecord> he;
  for (int i = 1; i <= f; ++i) hn.push_back({i, 2});
  for (int i = 1; i <= f; ++i) {
    EdgeRecord e;
    e.ep[0] = {i, 2};
    e.ep[1] = {i % f + 1, 1};
    he.push_back(e);
  }
  PortedMultigraph hg = PortedMultigraph::build(hn, he);
  Labeling h_in;
  GadgetSpec spec{delta, std::vector<int>(delta, h)};
  PaddedGraph padded = pad_graph(hg, h_in, spec);

  HardInstance out;
  out.f = f;
  out.gadget_n = gadget_n;
  out.height = h;
  out.isolated = n - gadget_n * f;
  if (out.isolated < 0) throw GraphError("internal sizing error");

  std::vector<NodeRecord> nodes = padded.g.nodes();
  int next = nodes.empty() ? 1 : nodes.back().id + 1;
  Labeling in = padded.in;
  for (int k = 0; k < out.isolated; ++k) {
    int id = next + k;
    nodes.push_back({id, 0});
    VIn vi;
    vi.node = "Center";
    vi.color = 0;
    in.set(kInV, Carrier::V, id, emit_vin(vi));
  }
  out.g = PortedMultigraph::build(nodes, padded.g.edges());
  out.in = in;
  return out;
}

}  // namespace lcl
