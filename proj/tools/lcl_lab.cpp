// lcl_lab: command-line front end for the LCL laboratory.
//
// Artifacts are deterministic: the same command with the same flags and seed
// produces byte-identical bytes. Graph artifacts embed the generating config
// under meta.config; JSONL artifacts start with a config record; CSV rows
// carry their config in the last column.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>

#include <lcl/gadget.hpp>
#include <lcl/local_sim.hpp>
#include <lcl/padding.hpp>
#include <lcl/problem.hpp>
#include <lcl/serialize.hpp>
#include <lcl/sinkless.hpp>

using nlohmann::json;
using namespace lcl;

namespace {

struct Options {
  std::uint64_t seed = 0;
  int n = 0;
  int delta = 3;
  std::vector<int> height;
  std::string problem = "sinkless-orientation";
  std::string inner;
  int t_max = 64;
  int budget = 20;
  std::string out;
  std::string file;
};

json config_json(const std::string& command, const Options& o) {
  json c;
  c["command"] = command;
  c["seed"] = o.seed;
  c["n"] = o.n;
  c["delta"] = o.delta;
  c["height"] = o.height;
  c["problem"] = o.problem;
  if (!o.inner.empty()) c["inner"] = o.inner;
  c["t_max"] = o.t_max;
  c["budget"] = o.budget;
  return c;
}

void emit_text(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw FormatError("cannot open " + o.out);
  f << text;
}

void emit_graph(const Options& o, const json& config, const PortedMultigraph& g,
                const Labeling& labels) {
  json doc = json::parse(encode(g, labels));
  doc["meta"]["config"] = config;
  emit_text(o, doc.dump(2) + "\n");
}

std::string violations_jsonl(const json& config,
                             const std::vector<Violation>& viol) {
  std::ostringstream out;
  out << json{{"config", config}}.dump() << "\n";
  for (const auto& v : viol) {
    const char* kind = v.kind == Violation::Kind::Node     ? "node"
                       : v.kind == Violation::Kind::Edge   ? "edge"
                                                           : "input";
    out << json{{"kind", kind},
                {"location", v.location},
                {"constraint", v.constraint}}
               .dump()
        << "\n";
  }
  return out.str();
}

GadgetSpec spec_from(const Options& o) {
  GadgetSpec spec;
  spec.delta = o.delta;
  if (o.height.empty())
    spec.heights.assign(o.delta, 2);
  else if (o.height.size() == 1)
    spec.heights.assign(o.delta, o.height[0]);
  else
    spec.heights = o.height;
  if (static_cast<int>(spec.heights.size()) != spec.delta)
    throw GraphError("need one height, or one per sub-gadget");
  return spec;
}

int pi_prime_level(const std::string& name) {
  if (name.rfind("pi-prime@", 0) != 0) return -1;
  return std::stoi(name.substr(9));
}

// pi-prime@k = k applications of the padding transform over SO
NeLclProblem make_problem(const std::string& name, int delta) {
  if (name == "sinkless-orientation") return sinkless_orientation();
  if (name == "psi") return psi_problem(delta);
  if (name == "psi-g") return psi_g_problem(delta);
  int k = pi_prime_level(name);
  if (k >= 0) return recurse(sinkless_orientation(), k + 1, delta);
  throw GraphError("unknown problem: " + name);
}

LocalAlgorithm make_solver(const std::string& problem, int delta) {
  if (problem == "sinkless-orientation") return so_full_gather_solver();
  int k = pi_prime_level(problem);
  if (k < 0) throw GraphError("no registered solver for " + problem);
  LocalAlgorithm s = so_full_gather_solver();
  for (int i = 1; i <= k; ++i)
    s = pi_prime_solver(recurse(sinkless_orientation(), i, delta), s, delta);
  return s;
}

AlgorithmFamily make_family(const std::string& problem,
                            const std::string& inner, int delta) {
  if (problem == "sinkless-orientation") return so_family();
  int k = pi_prime_level(problem);
  if (k < 0) throw GraphError("no registered solver family for " + problem);
  LocalAlgorithm in_alg = inner.empty() && k >= 2
                              ? make_solver("pi-prime@" + std::to_string(k - 1), delta)
                          : inner.empty() ? so_full_gather_solver()
                                          : make_solver(inner, delta);
  return pi_prime_family(recurse(sinkless_orientation(), k, delta), in_alg, delta);
}

std::string csv_table(const std::vector<std::array<std::string, 5>>& rows,
                      const json& config) {
  std::ostringstream out;
  out << "n,h,delta,T_min,accept,seed,config\n";
  std::string cfg = config.dump();
  std::string quoted = "\"";
  for (char c : cfg) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
  quoted += "\"";
  for (const auto& r : rows)
    out << r[0] << "," << r[1] << "," << r[2] << "," << r[3] << "," << r[4]
        << "," << config["seed"].dump() << "," << quoted << "\n";
  return out.str();
}

int cmd_gen_gadget(const Options& o) {
  Gadget gad = build_gadget(spec_from(o));
  emit_graph(o, config_json("gen-gadget", o), gad.g, gad.in);
  return 0;
}

int cmd_check_gadget(const Options& o) {
  auto [g, in] = load_graph(o.file);
  auto viol = check_gadget(g, in, o.delta);
  std::vector<Violation> out;
  for (const auto& [id, c] : viol)
    out.push_back({Violation::Kind::Node, id, c});
  emit_text(o, violations_jsonl(config_json("check-gadget", o), out));
  return viol.empty() ? 0 : 1;
}

int cmd_prove_error(const Options& o) {
  auto [g, in] = load_graph(o.file);
  RunResult rv = run_v(g, in, g.n(), o.delta);
  if (!rv.ok()) throw GraphError("prover failed: " + rv.errors[0]);
  Labeling merged = in;
  for (const auto& [name, layer] : rv.out.layers)
    for (const auto& [key, value] : layer.values)
      merged.set(name, layer.carrier, key, value);
  emit_graph(o, config_json("prove-error", o), g, merged);
  return 0;
}

int cmd_no_cheat(const Options& o) {
  auto [g, in] = load_graph(o.file);
  auto sol = search_error_labeling(g, in, o.delta, o.budget);
  json r;
  r["config"] = config_json("no-cheat", o);
  r["result"] = sol ? "labeling-found" : "none";
  if (sol) {
    json lab = json::object();
    for (const auto& [key, value] : sol->layers.at(kOutV).values)
      lab[std::to_string(key)] = value;
    r["labeling"] = lab;
  }
  emit_text(o, r.dump(2) + "\n");
  return sol ? 1 : 0;
}

int cmd_pad(const Options& o) {
  auto [g, in] = load_graph(o.file);
  PaddedGraph pg = pad_graph(g, in, spec_from(o));
  emit_graph(o, config_json("pad", o), pg.g, pg.in);
  return 0;
}

int cmd_solve(const Options& o) {
  auto [g, in] = load_graph(o.file);
  LocalAlgorithm alg = make_solver(o.problem, o.delta);
  RunResult rr = run(g, in, alg, o.seed);
  if (!rr.ok()) throw GraphError("solver failed: " + rr.errors[0]);
  Labeling merged = in;
  for (const auto& [name, layer] : rr.out.layers)
    for (const auto& [key, value] : layer.values)
      merged.set(name, layer.carrier, key, value);
  emit_graph(o, config_json("solve", o), g, merged);
  return 0;
}

int cmd_verify(const Options& o) {
  auto [g, labels] = load_graph(o.file);
  NeLclProblem p = make_problem(o.problem, o.delta);
  auto viol = verify(p, g, labels, labels);
  emit_text(o, violations_jsonl(config_json("verify", o), viol));
  return viol.empty() ? 0 : 1;
}

int cmd_extract(const Options& o) {
  auto [g, labels] = load_graph(o.file);
  auto vs = extract_virtual_solution(g, labels, labels, o.delta);
  if (!vs) throw GraphError("no virtual solution extractable");
  Labeling merged = vs->vin;
  for (const auto& [name, layer] : vs->vout.layers)
    for (const auto& [key, value] : layer.values)
      merged.set(name, layer.carrier, key, value);
  emit_graph(o, config_json("extract", o), vs->vg, merged);
  return 0;
}

int cmd_hard_instance(const Options& o) {
  HardInstance hi = hard_instance(o.n, o.delta);
  json config = config_json("hard-instance", o);
  config["f"] = hi.f;
  config["gadget_n"] = hi.gadget_n;
  config["gadget_height"] = hi.height;
  config["isolated"] = hi.isolated;
  emit_graph(o, config, hi.g, hi.in);
  return 0;
}

int cmd_recurse(const Options& o) {
  int k = o.n > 0 ? o.n : 2;
  json r;
  r["config"] = config_json("recurse", o);
  json levels = json::array();
  for (int i = 1; i <= k; ++i) {
    NeLclProblem p = recurse(sinkless_orientation(), i, o.delta);
    levels.push_back({{"level", i},
                      {"name", p.name},
                      {"canonical_out_v_bytes", p.out_v.canonical.size()}});
  }
  r["levels"] = levels;
  emit_text(o, r.dump(2) + "\n");
  return 0;
}

int cmd_fuzz(const Options& o) {
  GadgetSpec spec = spec_from(o);
  Gadget gad = build_gadget(spec);
  const MutationKind kinds[] = {MutationKind::DeleteEdge, MutationKind::AddEdge,
                                MutationKind::RelabelHalfEdge,
                                MutationKind::RelabelNode, MutationKind::SwapPort,
                                MutationKind::Recolor};
  const char* kind_names[] = {"delete-edge", "add-edge",  "relabel-half-edge",
                              "relabel-node", "swap-port", "recolor"};
  int count = o.n > 0 ? o.n : 60;
  std::ostringstream out;
  out << json{{"config", config_json("fuzz", o)}}.dump() << "\n";
  int bad = 0;
  for (int i = 0; i < count; ++i) {
    std::uint64_t seed = o.seed + static_cast<std::uint64_t>(i);
    MutationKind k = kinds[i % 6];
    json rec;
    rec["seed"] = seed;
    rec["kind"] = kind_names[i % 6];
    Mutant mu;
    try {
      mu = mutate_gadget(gad.g, gad.in, k, seed);
    } catch (const GraphError& e) {
      rec["status"] = "inapplicable";
      out << rec.dump() << "\n";
      continue;
    }
    rec["description"] = mu.description;
    auto viol = check_gadget(mu.g, mu.in, o.delta);
    if (viol.empty()) {
      bool iso = multigraph_isomorphic(mu.g, gad.g);
      rec["status"] = iso ? "still-valid-isomorphic" : "UNDETECTED";
      if (!iso) ++bad;
      out << rec.dump() << "\n";
      continue;
    }
    RunResult rv = run_v(mu.g, mu.in, mu.g.n(), o.delta);
    int errs = 0;
    for (const auto& nr : mu.g.nodes())
      if (parse_psi_v(rv.out.get(kOutV, nr.id, "")).kind == PsiV::Kind::Err)
        ++errs;
    bool accepted =
        rv.ok() && errs >= 1 &&
        verify(psi_problem(o.delta), mu.g, mu.in, rv.out).empty();
    rec["status"] = accepted ? "flagged-and-proven" : "PROOF-FAILED";
    rec["violations"] = viol.size();
    rec["errors"] = errs;
    if (!accepted) ++bad;
    out << rec.dump() << "\n";
  }
  out << json{{"summary", bad == 0 ? "pass" : "fail"}, {"cases", count}}.dump()
      << "\n";
  emit_text(o, out.str());
  return bad == 0 ? 0 : 1;
}

int cmd_measure_locality(const Options& o) {
  auto [g, in] = load_graph(o.file);
  NeLclProblem p = make_problem(o.problem, o.delta);
  AlgorithmFamily fam = make_family(o.problem, o.inner, o.delta);
  auto t = measure_locality(g, in, p, fam, o.t_max, o.seed);
  std::vector<std::array<std::string, 5>> rows;
  rows.push_back({std::to_string(g.n()),
                  o.height.empty() ? "-" : std::to_string(o.height[0]),
                  std::to_string(o.delta), t ? std::to_string(*t) : "-",
                  t ? "1" : "0"});
  emit_text(o, csv_table(rows, config_json("measure-locality", o)));
  return t ? 0 : 1;
}

int cmd_report(const Options& o) {
  // deterministic summary across the gadget family and the padded 6-cycle
  std::ostringstream body;
  json config = config_json("report", o);
  body << "# laboratory report\n\n## gadget family\n\n";
  body << "| delta | h | nodes | edges | valid |\n|---|---|---|---|---|\n";
  for (int delta = 1; delta <= 4; ++delta)
    for (int h = 1; h <= 4; ++h) {
      Gadget gad = build_gadget({delta, std::vector<int>(delta, h)});
      body << "| " << delta << " | " << h << " | " << gad.g.n() << " | "
           << gad.g.m() << " | "
           << (check_gadget(gad.g, gad.in, delta).empty() ? "yes" : "no")
           << " |\n";
    }
  body << "\n## locality of the padded 6-cycle (delta=2)\n\n";
  body << "| h | nodes | T_min |\n|---|---|---|\n";
  for (int h = 1; h <= 2; ++h) {
    std::vector<NodeRecord> nodes;
    std::vector<EdgeRecord> edges;
    for (int i = 1; i <= 6; ++i) nodes.push_back({i, 2});
    for (int i = 1; i <= 6; ++i) {
      EdgeRecord e;
      e.ep[0] = {i, 2};
      e.ep[1] = {i % 6 + 1, 1};
      edges.push_back(e);
    }
    PortedMultigraph c6 = PortedMultigraph::build(nodes, edges);
    Labeling empty;
    PaddedGraph pg = pad_graph(c6, empty, GadgetSpec{2, {h, h}});
    auto t = measure_locality(
        pg.g, pg.in, recurse(sinkless_orientation(), 2, 2),
        pi_prime_family(sinkless_orientation(), so_full_gather_solver(), 2),
        pg.g.n(), o.seed);
    body << "| " << h << " | " << pg.g.n() << " | " << (t ? *t : -1) << " |\n";
  }
  body << "\nconfig: " << config.dump() << "\n";
  emit_text(o, body.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"laboratory for locally checkable labelings"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool with_file) {
    sub->add_option("--seed", o.seed, "master random seed");
    sub->add_option("--n", o.n, "size / count parameter");
    sub->add_option("--delta", o.delta, "maximum degree parameter");
    sub->add_option("--height", o.height, "sub-gadget heights");
    sub->add_option("--problem", o.problem, "problem registry name");
    sub->add_option("--inner", o.inner, "inner solver registry name");
    sub->add_option("--t-max", o.t_max, "largest radius to scan");
    sub->add_option("--budget", o.budget, "search budget (nodes)");
    sub->add_option("--out", o.out, "output artifact path");
    if (with_file) sub->add_option("file", o.file, "input graph file")->required();
  };

  struct Cmd {
    const char* name;
    bool with_file;
    int (*fn)(const Options&);
  };
  const Cmd cmds[] = {
      {"gen-gadget", false, cmd_gen_gadget},
      {"check-gadget", true, cmd_check_gadget},
      {"prove-error", true, cmd_prove_error},
      {"no-cheat", true, cmd_no_cheat},
      {"pad", true, cmd_pad},
      {"solve", true, cmd_solve},
      {"verify", true, cmd_verify},
      {"extract", true, cmd_extract},
      {"hard-instance", false, cmd_hard_instance},
      {"recurse", false, cmd_recurse},
      {"fuzz", false, cmd_fuzz},
      {"measure-locality", true, cmd_measure_locality},
      {"report", false, cmd_report},
  };
  std::map<std::string, const Cmd*> dispatch;
  for (const auto& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name);
    add_common(sub, c.with_file);
    dispatch[c.name] = &c;
  }

  CLI11_PARSE(app, argc, argv);
  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return dispatch.at(name)->fn(o);
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}, {"command", name}}.dump() << "\n";
    return 2;
  }
}
