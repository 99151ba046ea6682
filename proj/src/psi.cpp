#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <set>

#include <json.hpp>

#include "lcl/gadget.hpp"

namespace lcl {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Pointer vocabulary
// ---------------------------------------------------------------------------

bool is_down(const std::string& s) {
  return s.rfind("Down_", 0) == 0 && label_index(s) >= 1;
}

bool is_pointer_label(const std::string& s) {
  return s == "Right" || s == "Left" || s == "Parent" || s == "RChild" ||
         s == "Up" || is_down(s);
}

// psi.3 constraint id for a pointer label
std::string psi3_id(const std::string& p) {
  if (p == "Right") return "psi.3a";
  if (p == "Left") return "psi.3b";
  if (p == "Parent") return "psi.3c";
  if (p == "RChild") return "psi.3d";
  if (p == "Up") return "psi.3e";
  return "psi.3f";  // Down_i
}

// May a node pointed at via `p` (own Index index own_i) carry output `t`?
// Error is always a legal target; Ok never is.
bool target_allowed(const std::string& p, int own_i, const PsiV& t) {
  if (t.kind == PsiV::Kind::Err) return true;
  if (t.kind != PsiV::Kind::Ptr) return false;
  const std::string& q = t.ptr;
  if (p == "Right") return q == "Right";
  if (p == "Left") return q == "Left";
  if (p == "Parent") return q == "Parent" || q == "Left" || q == "Right" || q == "Up";
  if (p == "RChild") return q == "RChild" || q == "Right" || q == "Left";
  if (p == "Up") return is_down(q) && (own_i < 1 || label_index(q) != own_i);
  if (is_down(p)) return q == "RChild" || q == "Right" || q == "Left";
  return false;
}

// ---------------------------------------------------------------------------
// Proof chains (sg.2c / sg.2d)
// ---------------------------------------------------------------------------

const std::vector<std::string>& chain_dirs(const std::string& kind) {
  static const std::vector<std::string> c2c = {"LChild", "Right", "Parent"};
  static const std::vector<std::string> c2d = {"Right", "LChild", "Left", "Parent"};
  return kind == "2c" ? c2c : c2d;
}

char chain_last(const std::string& kind) { return kind == "2c" ? 'D' : 'E'; }

// the labeled step a node holding letter `l` of kind `kind` must take, or ""
std::string chain_transition(const std::string& kind, char letter) {
  const auto& dirs = chain_dirs(kind);
  int i = letter - 'A';
  if (i < 0 || i >= static_cast<int>(dirs.size())) return "";
  return dirs[i];
}

json chains_to_json(const std::vector<ChainTag>& chains) {
  json a = json::array();
  for (const auto& t : chains)
    a.push_back({t.kind, t.color, std::string(1, t.letter)});
  return a;
}

std::vector<ChainTag> chains_from_json(const json& j) {
  std::vector<ChainTag> out;
  if (!j.is_array()) return out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 3) continue;
    if (!e[0].is_string() || !e[1].is_number_integer() || !e[2].is_string())
      continue;
    std::string l = e[2];
    if (l.size() != 1) continue;
    out.push_back({e[0], e[1], l[0]});
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool has_tag(const std::vector<ChainTag>& chains, const ChainTag& t) {
  return std::find(chains.begin(), chains.end(), t) != chains.end();
}

}  // namespace

// ---------------------------------------------------------------------------
// Output label codecs
// ---------------------------------------------------------------------------

std::string emit_psi_v(const PsiV& v) {
  if (v.kind == PsiV::Kind::Ok) return "Ok";
  json j;
  if (v.kind == PsiV::Kind::Err)
    j["err"] = v.reason;
  else
    j["ptr"] = v.ptr;
  if (!v.chains.empty()) j["chains"] = chains_to_json(v.chains);
  return j.dump();
}

PsiV parse_psi_v(const std::string& s) {
  PsiV v;
  if (s == "Ok") {
    v.kind = PsiV::Kind::Ok;
    return v;
  }
  if (s == "Error") {
    v.kind = PsiV::Kind::Err;
    return v;
  }
  if (is_pointer_label(s) || s == "LChild") {
    v.kind = PsiV::Kind::Ptr;
    v.ptr = s;
    return v;
  }
  json j = json::parse(s, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return v;  // Bad
  if (j.contains("err") && j["err"].is_string()) {
    v.kind = PsiV::Kind::Err;
    v.reason = j["err"];
  } else if (j.contains("ptr") && j["ptr"].is_string()) {
    v.kind = PsiV::Kind::Ptr;
    v.ptr = j["ptr"];
  } else {
    return v;
  }
  if (j.contains("chains")) v.chains = chains_from_json(j["chains"]);
  return v;
}

std::string emit_psi_b(const PsiB& b) {
  if (b.ok && !b.err && b.copy.empty() && !b.claim && !b.cw && !b.has_att &&
      b.chains.empty())
    return "Ok";
  json j;
  if (b.err) j["err"] = true;
  if (!b.copy.empty()) j["copy"] = b.copy;
  if (b.claim) {
    json c;
    c["n"] = b.claim->node;
    c["p"] = b.claim->port;
    c["c"] = b.claim->color;
    c["d"] = b.claim->dir;
    if (b.claim->has_flags) {
      c["R"] = b.claim->r;
      c["L"] = b.claim->l;
      c["C"] = b.claim->c;
      c["P"] = b.claim->p;
    }
    j["claim"] = c;
  }
  if (b.cw) j["cw"] = *b.cw;
  if (b.has_att)
    j["att"] = {{"R", b.att_r}, {"L", b.att_l}, {"C", b.att_c}, {"P", b.att_p}};
  if (!b.chains.empty()) j["chains"] = chains_to_json(b.chains);
  return j.dump();
}

PsiB parse_psi_b(const std::string& s) {
  PsiB b;
  if (s == "Ok") return b;  // plain ok
  b.ok = false;
  json j = json::parse(s, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    b.bad = true;
    return b;
  }
  if (j.contains("err") && j["err"].is_boolean()) b.err = j["err"];
  if (j.contains("copy") && j["copy"].is_string()) b.copy = j["copy"];
  if (j.contains("claim") && j["claim"].is_object()) {
    const json& c = j["claim"];
    Claim cl;
    if (c.contains("n") && c["n"].is_string()) cl.node = c["n"];
    if (c.contains("p") && c["p"].is_string()) cl.port = c["p"];
    if (c.contains("c") && c["c"].is_number_integer()) cl.color = c["c"];
    if (c.contains("d") && c["d"].is_string()) cl.dir = c["d"];
    if (c.contains("R") && c["R"].is_boolean()) {
      cl.has_flags = true;
      cl.r = c["R"];
      cl.l = c.value("L", false);
      cl.c = c.value("C", false);
      cl.p = c.value("P", false);
    }
    b.claim = cl;
  }
  if (j.contains("cw") && j["cw"].is_number_integer()) b.cw = j["cw"].get<int>();
  if (j.contains("att") && j["att"].is_object()) {
    b.has_att = true;
    b.att_r = j["att"].value("R", false);
    b.att_l = j["att"].value("L", false);
    b.att_c = j["att"].value("C", false);
    b.att_p = j["att"].value("P", false);
  }
  if (j.contains("chains")) b.chains = chains_from_json(j["chains"]);
  return b;
}

// ---------------------------------------------------------------------------
// Psi: the constant-radius (wide) form
// ---------------------------------------------------------------------------

namespace {

Alphabet any_alphabet(const std::string& canonical) {
  return {[](const std::string&) { return true; }, {}, canonical};
}

std::vector<std::string> psi_wide_check(const View& view, int delta) {
  int root = view.root;
  std::vector<std::string> out;
  PsiV v = parse_psi_v(view.labels.get(kOutV, root, ""));
  bool shape_ok = v.kind != PsiV::Kind::Bad &&
                  (v.kind != PsiV::Kind::Ptr || is_pointer_label(v.ptr));
  if (!shape_ok) {
    out.push_back("psi.1");
    return out;
  }
  bool failing = !gadget_local_check(view, root, delta).empty();
  if (failing != (v.kind == PsiV::Kind::Err)) out.push_back("psi.2");
  if (v.kind == PsiV::Kind::Ptr) {
    int own_i = label_index(parse_vin(view.labels.get(kInV, root, "-")).node);
    bool have_dir = false;
    bool bad_target = false;
    for (const auto& [ei, side] : view.inc(root)) {
      if (parse_ein(view.labels.get(kInE, ei, "-")).kind != "GadEdge") continue;
      BIn b = parse_bin(view.labels.get(kInB, half_key(ei, side), "-"));
      if (b.dir != v.ptr) continue;
      have_dir = true;
      int far = view.other(ei, side);
      PsiV t = parse_psi_v(view.labels.get(kOutV, far, ""));
      if (!target_allowed(v.ptr, own_i, t)) bad_target = true;
    }
    if (!have_dir || bad_target) out.push_back(psi3_id(v.ptr));
  }
  return out;
}

}  // namespace

NeLclProblem psi_problem(int delta) {
  NeLclProblem p;
  p.name = "psi";
  p.in_v = any_alphabet("-");
  p.in_e = any_alphabet("-");
  p.in_b = any_alphabet("-");
  p.out_v = {[](const std::string& s) {
               PsiV v = parse_psi_v(s);
               return v.kind != PsiV::Kind::Bad &&
                      (v.kind != PsiV::Kind::Ptr || is_pointer_label(v.ptr));
             },
             {},
             "Ok"};
  p.out_e = any_alphabet("Ok");
  p.out_b = any_alphabet("Ok");
  p.wide_radius = 2;
  p.wide_node_check = [delta](const View& view) {
    return psi_wide_check(view, delta);
  };
  return p;
}

// ---------------------------------------------------------------------------
// Psi_G: the node-edge-checkable form
// ---------------------------------------------------------------------------

namespace {

struct GadSlot {
  const HalfInfo* h;
  BIn b;
  PsiB pb;
};

bool plain_ok(const PsiB& b) {
  return b.ok && !b.bad && !b.err && b.copy.empty() && !b.claim && !b.cw &&
         !b.has_att && b.chains.empty();
}

struct StarDirs {
  bool r = false, l = false, c = false, p = false;
};

StarDirs star_dirs(const std::vector<GadSlot>& slots) {
  StarDirs d;
  for (const auto& s : slots) {
    if (s.b.dir == "Right") d.r = true;
    if (s.b.dir == "Left") d.l = true;
    if (s.b.dir == "LChild" || s.b.dir == "RChild") d.c = true;
    if (s.b.dir == "Parent") d.p = true;
  }
  return d;
}

// Can `reason` be concluded from the node's own star plus the (edge-verified)
// claims and color witnesses it carries?
bool err_justified(const std::string& reason, const VIn& vin,
                   const std::vector<GadSlot>& slots,
                   const std::vector<ChainTag>& chains, int delta) {
  bool center = vin.node == "Center";
  int own_i = label_index(vin.node);
  StarDirs d = star_dirs(slots);
  auto far_color = [](const GadSlot& s) -> std::optional<int> {
    if (s.pb.cw) return *s.pb.cw;
    if (s.pb.claim) return s.pb.claim->color;
    return std::nullopt;
  };

  if (reason == "sg.1a" || reason == "col.d2") {
    // a duplicate color within distance 2 witnessed from the star: either a
    // neighbor sharing the node's own color, or two neighbors sharing one
    for (std::size_t i = 0; i < slots.size(); ++i) {
      auto ci = far_color(slots[i]);
      if (!ci) continue;
      if (*ci == vin.color) return true;
      for (std::size_t j = i + 1; j < slots.size(); ++j) {
        auto cj = far_color(slots[j]);
        if (cj && *ci == *cj) return true;
      }
    }
    return false;
  }
  if (reason == "sg.1b") {
    std::set<std::string> seen;
    for (const auto& s : slots) {
      if (!(s.b.dir == "Parent" || s.b.dir == "Right" || s.b.dir == "Left" ||
            s.b.dir == "LChild" || s.b.dir == "RChild" || s.b.dir == "Up" ||
            (s.b.dir.rfind("Down_", 0) == 0 && label_index(s.b.dir) >= 1)))
        return true;
      if (seen.count(s.b.dir)) return true;
      seen.insert(s.b.dir);
    }
    return false;
  }
  if (reason == "sg.1c") {
    if (center) return false;
    if (vin.node.rfind("Index_", 0) != 0 || own_i < 1) return true;
    for (const auto& s : slots) {
      bool sub = s.b.dir == "Parent" || s.b.dir == "Right" || s.b.dir == "Left" ||
                 s.b.dir == "LChild" || s.b.dir == "RChild";
      if (sub && s.pb.claim && s.pb.claim->node != vin.node) return true;
    }
    return false;
  }
  if (reason == "sg.1d") {
    if (center) return vin.port != "NoPort";
    if (vin.port == "NoPort") return false;
    return vin.port.rfind("Port_", 0) != 0 || label_index(vin.port) != own_i;
  }
  if (reason == "sg.2a") {
    for (const auto& s : slots) {
      if (!s.pb.claim) continue;
      if (s.b.dir == "Right" && s.pb.claim->dir != "Left") return true;
      if (s.b.dir == "Left" && s.pb.claim->dir != "Right") return true;
    }
    return false;
  }
  if (reason == "sg.2b") {
    for (const auto& s : slots) {
      if (!s.pb.claim) continue;
      const std::string& fd = s.pb.claim->dir;
      if (s.b.dir == "Parent" && fd != "LChild" && fd != "RChild") return true;
      if ((s.b.dir == "LChild" || s.b.dir == "RChild") && fd != "Parent")
        return true;
    }
    return false;
  }
  if (reason == "sg.2c" || reason == "sg.2d") {
    std::string kind = reason == "sg.2c" ? "2c" : "2d";
    std::set<long long> starts, ends;
    for (const auto& t : chains) {
      if (t.kind != kind) continue;
      if (t.letter == 'A') starts.insert(t.color);
      if (t.letter == chain_last(kind)) ends.insert(t.color);
    }
    for (long long c : starts)
      if (!ends.count(c)) return true;
    return false;
  }
  if (reason == "sg.3a" || reason == "sg.3b") {
    for (const auto& s : slots) {
      if (s.b.dir != "Parent" || !s.pb.claim || !s.pb.claim->has_flags) continue;
      if (reason == "sg.3a" && s.pb.claim->r != d.r) return true;
      if (reason == "sg.3b" && s.pb.claim->l != d.l) return true;
    }
    return false;
  }
  if (reason == "sg.3c" || reason == "sg.3d") {
    for (const auto& s : slots) {
      if (s.b.dir != "Parent" || !s.pb.claim) continue;
      if (reason == "sg.3c" && !d.r && s.pb.claim->dir != "RChild") return true;
      if (reason == "sg.3d" && !d.l && s.pb.claim->dir != "LChild") return true;
    }
    return false;
  }
  if (reason == "sg.3e") {
    if (center || d.r || d.l) return false;
    int subs = 0;
    bool lc = false, rc = false, other = false;
    for (const auto& s : slots) {
      bool sub = s.b.dir == "Parent" || s.b.dir == "Right" || s.b.dir == "Left" ||
                 s.b.dir == "LChild" || s.b.dir == "RChild";
      if (!sub) continue;
      ++subs;
      if (s.b.dir == "LChild") lc = true;
      else if (s.b.dir == "RChild") rc = true;
      else other = true;
    }
    bool ok = (subs == 0) || (subs == 2 && lc && rc && !other);
    return !ok || d.p;
  }
  if (reason == "sg.3f") {
    bool lc = false, rc = false;
    for (const auto& s : slots) {
      if (s.b.dir == "LChild") lc = true;
      if (s.b.dir == "RChild") rc = true;
    }
    return lc != rc;
  }
  if (reason == "sg.3g") {
    if (d.c) return false;
    for (const auto& s : slots) {
      if (s.b.dir != "Right" && s.b.dir != "Left") continue;
      if (s.pb.claim && s.pb.claim->has_flags && s.pb.claim->c) return true;
    }
    return false;
  }
  if (reason == "sg.3h") {
    if (center) return false;
    bool rc = false;
    for (const auto& s : slots)
      if (s.b.dir == "RChild") rc = true;
    bool corner = !d.r && !d.c && !rc;
    return (vin.port != "NoPort") != corner;
  }
  if (reason == "g.1") {
    if (center) return false;
    bool all_claims = true;
    int centers = 0;
    for (const auto& s : slots) {
      if (s.b.dir.rfind("Down_", 0) == 0) return true;
      if (!s.pb.claim) {
        all_claims = false;
        continue;
      }
      if (s.pb.claim->node == "Center") ++centers;
      if (s.b.dir == "Up" && s.pb.claim->node != "Center") return true;
    }
    if (!all_claims) return false;
    if (!d.p && centers != 1) return true;
    if (d.p && centers != 0) return true;
    return false;
  }
  if (reason == "g.2a") {
    if (!center) return false;
    if (static_cast<int>(slots.size()) != delta) return true;
    for (const auto& s : slots) {
      if (!s.pb.claim) continue;
      if (s.pb.claim->node.rfind("Index_", 0) != 0 ||
          label_index(s.pb.claim->node) < 1)
        return true;
      if (s.pb.claim->has_flags && s.pb.claim->p) return true;
    }
    return false;
  }
  if (reason == "g.2b") {
    if (!center) return false;
    for (const auto& s : slots) {
      if (s.b.dir.rfind("Down_", 0) != 0 || label_index(s.b.dir) < 1) return true;
      if (s.pb.claim && label_index(s.b.dir) != label_index(s.pb.claim->node))
        return true;
    }
    return false;
  }
  if (reason == "g.2c") {
    if (!center) return false;
    for (const auto& s : slots)
      if (s.pb.claim && s.pb.claim->dir != "Up") return true;
    return false;
  }
  if (reason == "g.2d") {
    if (!center) return false;
    std::set<int> seen;
    for (const auto& s : slots) {
      if (!s.pb.claim) continue;
      int i = label_index(s.pb.claim->node);
      if (i >= 1 && seen.count(i)) return true;
      seen.insert(i);
    }
    return false;
  }
  if (reason == "col.rep") {
    if (vin.color < 0 || vin.color >= color_palette(delta)) return true;
    for (const auto& s : slots)
      if (s.b.color != vin.color) return true;
    return false;
  }
  return false;
}

}  // namespace

std::vector<std::string> psi_g_node_check(const NodeCtx& ctx, int delta) {
  std::vector<std::string> out;
  auto emit = [&](const std::string& id) {
    if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
  };
  PsiV v = parse_psi_v(ctx.v_out);
  if (v.kind == PsiV::Kind::Bad ||
      (v.kind == PsiV::Kind::Ptr && !is_pointer_label(v.ptr))) {
    return {"psi.1"};
  }
  std::vector<GadSlot> slots;
  for (const auto& h : ctx.inc) {
    if (parse_ein(h.e_in).kind != "GadEdge") continue;
    GadSlot s;
    s.h = &h;
    s.b = parse_bin(h.b_in);
    s.pb = parse_psi_b(h.b_out);
    slots.push_back(s);
  }
  std::vector<ChainTag> chains = v.chains;
  std::sort(chains.begin(), chains.end());

  if (v.kind == PsiV::Kind::Ok) {
    for (const auto& s : slots) {
      if (!plain_ok(s.pb)) emit("psig.node");
      if (s.h->e_out != "Ok") emit("psig.node");
    }
    return out;
  }

  // non-Ok: every gadget half-edge replicates the node's output
  StarDirs d = star_dirs(slots);
  for (const auto& s : slots) {
    if (s.pb.bad || plain_ok(s.pb)) emit("psig.node");
    if (s.h->e_out != "Err") emit("psig.node");
    if (v.kind == PsiV::Kind::Err) {
      if (!s.pb.err || !s.pb.copy.empty()) emit("psig.copy");
    } else {
      if (s.pb.err || s.pb.copy != v.ptr) emit("psig.copy");
    }
    std::vector<ChainTag> sc = s.pb.chains;
    std::sort(sc.begin(), sc.end());
    if (sc != chains) emit("psig.copy");
    if (!s.pb.has_att || s.pb.att_r != d.r || s.pb.att_l != d.l ||
        s.pb.att_c != d.c || s.pb.att_p != d.p)
      emit("psig.att");
  }
  if (v.kind == PsiV::Kind::Ptr) {
    bool have = false;
    for (const auto& s : slots)
      if (s.b.dir == v.ptr) have = true;
    if (!have) emit(psi3_id(v.ptr));
  }
  // every non-final chain letter forces the corresponding outgoing direction
  for (const auto& t : chains) {
    if (t.letter == chain_last(t.kind)) continue;
    std::string dir = chain_transition(t.kind, t.letter);
    bool have = false;
    for (const auto& s : slots)
      if (s.b.dir == dir) have = true;
    if (dir.empty() || !have) emit("psig.chain");
  }
  if (v.kind == PsiV::Kind::Err) {
    VIn vin = parse_vin(ctx.v_in);
    if (!err_justified(v.reason, vin, slots, chains, delta)) emit("psig.justify");
  }
  return out;
}

std::vector<std::string> psi_g_edge_check(const EdgeCtx& ctx, int delta) {
  (void)delta;
  if (parse_ein(ctx.e_in).kind != "GadEdge") return {};
  std::vector<std::string> out;
  auto emit = [&](const std::string& id) {
    if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
  };
  PsiV pv[2];
  PsiB pb[2];
  VIn vin[2];
  BIn bin[2];
  for (int s = 0; s < 2; ++s) {
    pv[s] = parse_psi_v(ctx.v_out[s]);
    pb[s] = parse_psi_b(ctx.b_out[s]);
    vin[s] = parse_vin(ctx.v_in[s]);
    bin[s] = parse_bin(ctx.b_in[s]);
  }
  bool ok0 = pv[0].kind == PsiV::Kind::Ok, ok1 = pv[1].kind == PsiV::Kind::Ok;
  if (ok0 != ok1) emit("psig.mix");
  if (ctx.e_out != (ok0 && ok1 ? "Ok" : "Err")) emit("psig.mix");
  if (ok0 && ok1) return out;

  for (int s = 0; s < 2; ++s) {
    if (pv[s].kind == PsiV::Kind::Ok) continue;
    int f = 1 - s;
    // the claim this side carries about the far endpoint must be true
    if (!pb[s].claim) {
      emit("psig.claim");
    } else {
      const Claim& c = *pb[s].claim;
      if (c.node != vin[f].node || c.port != vin[f].port ||
          c.color != vin[f].color || c.dir != bin[f].dir)
        emit("psig.claim");
      if (c.has_flags) {
        if (!pb[f].has_att) {
          emit("psig.claim");
        } else if (c.r != pb[f].att_r || c.l != pb[f].att_l ||
                   c.c != pb[f].att_c || c.p != pb[f].att_p) {
          emit("psig.claim");
        }
      }
    }
    if (pb[s].cw && *pb[s].cw != vin[f].color) emit("psig.cw");
    // pointer target rule along the pointed edge
    if (pv[s].kind == PsiV::Kind::Ptr && bin[s].dir == pv[s].ptr) {
      if (!target_allowed(pv[s].ptr, label_index(vin[s].node), pv[f]))
        emit(psi3_id(pv[s].ptr));
    }
    // chain propagation across this edge
    for (const auto& t : pb[s].chains) {
      if (t.letter == chain_last(t.kind)) continue;
      if (bin[s].dir != chain_transition(t.kind, t.letter)) continue;
      ChainTag next{t.kind, t.color, static_cast<char>(t.letter + 1)};
      if (!has_tag(pb[f].chains, next)) emit("psig.chain");
    }
  }
  return out;
}

NeLclProblem psi_g_problem(int delta) {
  NeLclProblem p;
  p.name = "psi-g";
  p.in_v = any_alphabet("-");
  p.in_e = any_alphabet("-");
  p.in_b = any_alphabet("-");
  p.out_v = {[](const std::string& s) {
               PsiV v = parse_psi_v(s);
               return v.kind != PsiV::Kind::Bad &&
                      (v.kind != PsiV::Kind::Ptr || is_pointer_label(v.ptr));
             },
             {},
             "Ok"};
  p.out_e = {[](const std::string& s) { return s == "Ok" || s == "Err"; },
             {"Ok", "Err"},
             "Ok"};
  p.out_b = {[](const std::string& s) { return !parse_psi_b(s).bad; }, {}, "Ok"};
  p.node_check = [delta](const NodeCtx& ctx) { return psi_g_node_check(ctx, delta); };
  p.edge_check = [delta](const EdgeCtx& ctx) { return psi_g_edge_check(ctx, delta); };
  return p;
}

// ---------------------------------------------------------------------------
// Algorithm V
// ---------------------------------------------------------------------------

namespace {

struct VSlot {
  int edge = 0;  // local edge index
  int side = 0;
  std::string dir;
  int far = 0;
};

std::map<int, std::vector<VSlot>> gad_slots(const View& view) {
  std::map<int, std::vector<VSlot>> slots;
  std::vector<bool> gad(view.vedges.size(), false);
  for (std::size_t ei = 0; ei < view.vedges.size(); ++ei)
    gad[ei] =
        parse_ein(view.labels.get(kInE, static_cast<std::int64_t>(ei), "-")).kind ==
        "GadEdge";
  for (const auto& nr : view.vnodes) {
    auto& v = slots[nr.id];
    for (const auto& [ei, side] : view.inc(nr.id)) {
      if (!gad[ei]) continue;
      VSlot s;
      s.edge = ei;
      s.side = side;
      s.dir = parse_bin(view.labels.get(kInB, half_key(ei, side), "-")).dir;
      s.far = view.other(ei, side);
      v.push_back(s);
    }
  }
  return slots;
}

std::map<int, int> gad_dist(const std::map<int, std::vector<VSlot>>& slots,
                            int root) {
  std::map<int, int> d;
  std::deque<int> q{root};
  d[root] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    auto it = slots.find(u);
    if (it == slots.end()) continue;
    for (const auto& s : it->second)
      if (!d.count(s.far)) {
        d[s.far] = d[u] + 1;
        q.push_back(s.far);
      }
  }
  return d;
}

std::set<int> step_all(const std::map<int, std::vector<VSlot>>& slots,
                       const std::set<int>& from, const std::string& dir) {
  std::set<int> to;
  for (int u : from) {
    auto it = slots.find(u);
    if (it == slots.end()) continue;
    for (const auto& s : it->second)
      if (s.dir == dir) to.insert(s.far);
  }
  return to;
}

// all nodes reachable by 1..budget steps labeled `dir`
std::set<int> plus_closure(const std::map<int, std::vector<VSlot>>& slots,
                           const std::set<int>& start, const std::string& dir,
                           int budget) {
  std::set<int> reached;
  std::set<int> frontier = start;
  for (int k = 0; k < budget; ++k) {
    std::set<int> next = step_all(slots, frontier, dir);
    std::size_t before = reached.size();
    reached.insert(next.begin(), next.end());
    if (reached.size() == before) break;
    frontier = std::move(next);
  }
  return reached;
}

// S extended by Right* and Left* runs
std::set<int> row_closure(const std::map<int, std::vector<VSlot>>& slots,
                          const std::set<int>& start, int budget) {
  std::set<int> all = start;
  for (const char* dir : {"Right", "Left"}) {
    std::set<int> run = plus_closure(slots, start, dir, budget);
    all.insert(run.begin(), run.end());
  }
  return all;
}

struct ChainClosure {
  std::map<int, std::vector<ChainTag>> tags;
};

// tag propagation of one proof chain started at `w` (color = w's id)
void propagate_chain(const std::map<int, std::vector<VSlot>>& slots,
                     std::map<int, std::set<ChainTag>>& tags, int w,
                     const std::string& kind) {
  long long color = w;
  tags[w].insert({kind, color, 'A'});
  const auto& dirs = chain_dirs(kind);
  std::set<int> level{w};
  for (std::size_t t = 0; t < dirs.size(); ++t) {
    std::set<int> next = step_all(slots, level, dirs[t]);
    char letter = static_cast<char>('A' + t + 1);
    for (int z : next) tags[z].insert({kind, color, letter});
    level = std::move(next);
    if (level.empty()) break;
  }
}

}  // namespace

LocalAlgorithm algorithm_v(int n_upper, int delta) {
  int t = 4;
  int nn = std::max(2, n_upper);
  int lg = 0;
  while ((1 << lg) < nn) ++lg;
  t = 4 * lg + 4;
  int radius = t;
  int detect = t - 2;  // detection radius D

  // violated-constraint cache shared across nodes of one run; the result for
  // a node depends only on its radius-2 gadget neighborhood, so any view that
  // contains it computes the same answer
  auto cache = std::make_shared<std::map<int, std::vector<std::string>>>();

  LocalAlgorithm alg;
  alg.name = "algorithm-v";
  alg.radius = [radius](int) { return radius; };
  alg.rule = [delta, detect, cache](const View& view, int, int, Rng&) -> RuleOut {
    RuleOut out;
    int root = view.root;
    auto slots = gad_slots(view);
    auto dist = gad_dist(slots, root);

    // structural violations of every gadget node within the detection radius
    std::map<int, std::vector<std::string>> errs;
    for (const auto& [id, d] : dist) {
      if (d > detect) continue;
      auto it = cache->find(id);
      if (it == cache->end())
        it = cache->emplace(id, gadget_local_check(view, id, delta)).first;
      if (!it->second.empty()) errs[id] = it->second;
    }
    auto failing = [&](const std::set<int>& s) {
      for (int u : s)
        if (errs.count(u)) return true;
      return false;
    };

    VIn vin = parse_vin(view.labels.get(kInV, root, "-"));
    const auto& own = slots[root];

    PsiV v;
    if (errs.count(root)) {
      v.kind = PsiV::Kind::Err;
      v.reason = errs[root].front();
    } else if (errs.empty()) {
      v.kind = PsiV::Kind::Ok;
    } else if (vin.node == "Center") {
      // smallest Down_i whose sub-gadget shows an error along the
      // Down RChild* (Right*|Left*) sweep
      v.kind = PsiV::Kind::Ptr;
      std::vector<int> indices;
      for (const auto& s : own)
        if (s.dir.rfind("Down_", 0) == 0 && label_index(s.dir) >= 1)
          indices.push_back(label_index(s.dir));
      std::sort(indices.begin(), indices.end());
      indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
      std::string pick;
      for (int i : indices) {
        std::set<int> s0 = step_all(slots, {root}, "Down_" + std::to_string(i));
        std::set<int> spine = s0;
        auto down = plus_closure(slots, s0, "RChild", detect);
        spine.insert(down.begin(), down.end());
        if (failing(row_closure(slots, spine, detect))) {
          pick = "Down_" + std::to_string(i);
          break;
        }
      }
      if (pick.empty() && !indices.empty())
        pick = "Down_" + std::to_string(indices.front());
      if (pick.empty()) pick = own.empty() ? "Up" : own.front().dir;
      v.ptr = pick;
    } else {
      v.kind = PsiV::Kind::Ptr;
      std::set<int> self{root};
      bool has_parent = false, has_up = false;
      for (const auto& s : own) {
        if (s.dir == "Parent") has_parent = true;
        if (s.dir == "Up") has_up = true;
      }
      if (failing(plus_closure(slots, self, "Right", detect))) {
        v.ptr = "Right";
      } else if (failing(plus_closure(slots, self, "Left", detect))) {
        v.ptr = "Left";
      } else if (failing(row_closure(
                     slots, plus_closure(slots, self, "Parent", detect), detect))) {
        v.ptr = "Parent";
      } else if (failing(row_closure(
                     slots, plus_closure(slots, self, "RChild", detect), detect))) {
        v.ptr = "RChild";
      } else if (has_parent) {
        v.ptr = "Parent";
      } else if (has_up) {
        v.ptr = "Up";
      } else {
        v.ptr = own.empty() ? "Up" : own.front().dir;
      }
    }

    // proof chains: closures started at nearby failing nodes whose first
    // violation is sg.2c/sg.2d; only chains within 4 steps can reach root
    if (v.kind != PsiV::Kind::Ok) {
      std::map<int, std::set<ChainTag>> tags;
      for (const auto& [w, ids] : errs) {
        auto dit = dist.find(w);
        if (dit == dist.end() || dit->second > 8) continue;
        if (ids.front() == "sg.2c") propagate_chain(slots, tags, w, "2c");
        if (ids.front() == "sg.2d") propagate_chain(slots, tags, w, "2d");
      }
      auto it = tags.find(root);
      if (it != tags.end())
        v.chains.assign(it->second.begin(), it->second.end());
    }

    out.v = emit_psi_v(v);

    // half-edge and edge outputs, port order over all incident slots
    StarDirs d;
    for (const auto& s : own) {
      if (s.dir == "Right") d.r = true;
      if (s.dir == "Left") d.l = true;
      if (s.dir == "LChild" || s.dir == "RChild") d.c = true;
      if (s.dir == "Parent") d.p = true;
    }
    for (const auto& [ei, side] : view.inc(root)) {
      EIn ein = parse_ein(view.labels.get(kInE, ei, "-"));
      if (ein.kind != "GadEdge") {
        out.e.push_back("eps");
        out.b.push_back("eps");
        continue;
      }
      if (v.kind == PsiV::Kind::Ok) {
        out.e.push_back("Ok");
        out.b.push_back("Ok");
        continue;
      }
      out.e.push_back("Err");
      int far = view.other(ei, side);
      PsiB b;
      b.ok = false;
      if (v.kind == PsiV::Kind::Err)
        b.err = true;
      else
        b.copy = v.ptr;
      VIn fv = parse_vin(view.labels.get(kInV, far, "-"));
      Claim c;
      c.node = fv.node;
      c.port = fv.port;
      c.color = fv.color;
      c.dir = parse_bin(view.labels.get(kInB, half_key(ei, 1 - side), "-")).dir;
      c.has_flags = true;
      auto fit = slots.find(far);
      if (fit != slots.end()) {
        StarDirs fd;
        for (const auto& s : fit->second) {
          if (s.dir == "Right") fd.r = true;
          if (s.dir == "Left") fd.l = true;
          if (s.dir == "LChild" || s.dir == "RChild") fd.c = true;
          if (s.dir == "Parent") fd.p = true;
        }
        c.r = fd.r;
        c.l = fd.l;
        c.c = fd.c;
        c.p = fd.p;
      }
      b.claim = c;
      b.cw = fv.color;
      b.has_att = true;
      b.att_r = d.r;
      b.att_l = d.l;
      b.att_c = d.c;
      b.att_p = d.p;
      b.chains = v.chains;
      out.b.push_back(emit_psi_b(b));
    }
    return out;
  };
  return alg;
}

RunResult run_v(const PortedMultigraph& g, const Labeling& in, int n_upper,
                int delta) {
  return run(g, in, algorithm_v(n_upper, delta), 0);
}

// ---------------------------------------------------------------------------
// No-cheat backtracking oracle over Psi
// ---------------------------------------------------------------------------

std::optional<Labeling> search_error_labeling(const PortedMultigraph& g,
                                              const Labeling& in, int delta,
                                              int budget_nodes) {
  if (g.n() > budget_nodes) throw GraphError("search budget exceeded");

  struct NodeInfo {
    int id = 0;
    bool failing = false;
    int index = -1;  // own Index_i
    std::vector<std::string> domain;
    std::vector<std::pair<std::string, int>> dirs;  // (dir, far id), GadEdge
  };
  std::vector<NodeInfo> nodes;
  std::map<int, int> pos;
  for (const auto& nr : g.nodes()) {
    NodeInfo ni;
    ni.id = nr.id;
    View b2 = ball(g, in, nr.id, 2);
    ni.failing = !gadget_local_check(b2, nr.id, delta).empty();
    ni.index = label_index(parse_vin(in.get(kInV, nr.id, "-")).node);
    for (const auto& [ei, side] : g.incident(nr.id)) {
      if (parse_ein(in.get(kInE, ei, "-")).kind != "GadEdge") continue;
      std::string dir = parse_bin(in.get(kInB, half_key(ei, side), "-")).dir;
      ni.dirs.emplace_back(dir, g.other_endpoint(ei, side));
    }
    if (ni.failing) {
      ni.domain.push_back("Error");
    } else {
      std::set<std::string> ds;
      for (const auto& [dir, far] : ni.dirs)
        if (is_pointer_label(dir)) ds.insert(dir);
      ni.domain.assign(ds.begin(), ds.end());
      if (ni.domain.empty()) return std::nullopt;  // no legal output exists
    }
    pos[nr.id] = static_cast<int>(nodes.size());
    nodes.push_back(std::move(ni));
  }

  std::vector<std::string> assign(nodes.size());
  // pointer consistency between an assigned pointer and an assigned target
  auto compatible = [&](int i) {
    const NodeInfo& u = nodes[i];
    const std::string& lu = assign[i];
    if (lu != "Error") {
      for (const auto& [dir, far] : u.dirs) {
        if (dir != lu) continue;
        const std::string& lf = assign[pos[far]];
        if (lf.empty()) continue;
        if (!target_allowed(lu, u.index, parse_psi_v(lf))) return false;
      }
    }
    // incoming pointers aimed at u
    for (const auto& [dir, far] : u.dirs) {
      const NodeInfo& w = nodes[pos[far]];
      const std::string& lw = assign[pos[far]];
      if (lw.empty() || lw == "Error") continue;
      for (const auto& [wdir, wfar] : w.dirs) {
        if (wfar != u.id || wdir != lw) continue;
        if (!target_allowed(lw, w.index, parse_psi_v(lu))) return false;
      }
    }
    return true;
  };

  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == nodes.size()) return true;
    for (const auto& val : nodes[i].domain) {
      assign[i] = val;
      if (compatible(static_cast<int>(i)) && rec(i + 1)) return true;
    }
    assign[i].clear();
    return false;
  };
  if (!rec(0)) return std::nullopt;

  Labeling out;
  out.layer(kOutV, Carrier::V);
  out.layer(kOutE, Carrier::E);
  out.layer(kOutB, Carrier::B);
  for (std::size_t i = 0; i < nodes.size(); ++i)
    out.set(kOutV, Carrier::V, nodes[i].id, assign[i]);
  for (int ei = 0; ei < g.m(); ++ei) {
    out.set(kOutE, Carrier::E, ei, "-");
    out.set(kOutB, Carrier::B, half_key(ei, 0), "-");
    out.set(kOutB, Carrier::B, half_key(ei, 1), "-");
  }
  return out;
}

}  // namespace lcl
