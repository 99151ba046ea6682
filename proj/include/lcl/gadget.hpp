#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lcl/local_sim.hpp"
#include "lcl/problem.hpp"

namespace lcl {

// ---------------------------------------------------------------------------
// Gadget construction. A gadget is Delta sub-gadgets (complete binary trees
// with horizontal level paths) whose roots hang off one Center node. All
// structure is carried by input labels: node labels Index_i/Center, port
// labels Port_i/NoPort, per-side edge labels
// Parent/Right/Left/LChild/RChild/Up/Down_i, and a distance-2 color
// replicated onto half-edges.
// ---------------------------------------------------------------------------

struct GadgetSpec {
  int delta = 1;
  std::vector<int> heights;  // one per sub-gadget, each >= 1

  int node_count() const;  // sum of (2^h - 1) + 1
};

struct Gadget {
  PortedMultigraph g;
  Labeling in;
  GadgetSpec spec;
  int center_id = 0;
  std::vector<int> port_ids;  // port node of sub-gadget i at index i-1
};

// Deterministic construction; node ids start at id_base (center first).
Gadget build_gadget(const GadgetSpec& spec, int id_base = 1);

// ---------------------------------------------------------------------------
// Input label encoding (single-label convention, canonical JSON):
//   in.v  {"node":..,"port":..,"color":..}        (+ optional "pi")
//   in.e  {"kind":"GadEdge"|"PortEdge"}           (+ optional "pi"); "-" = GadEdge
//   in.b  {"dir":..,"color":..}                   (+ optional "pi")
// ---------------------------------------------------------------------------

struct VIn {
  std::string node;  // Index_i or Center
  std::string port = "NoPort";
  int color = -1;
  std::string pi = "-";
};
struct BIn {
  std::string dir;
  int color = -1;
  std::string pi = "-";
};
struct EIn {
  std::string kind = "GadEdge";
  std::string pi = "-";
};

std::string emit_vin(const VIn&);
std::string emit_bin(const BIn&);
std::string emit_ein(const EIn&);
VIn parse_vin(const std::string&);
BIn parse_bin(const std::string&);
EIn parse_ein(const std::string&);

// index i of Index_i / Port_i / Down_i, or -1
int label_index(const std::string& label);

inline int color_palette(int delta) { return (delta + 5) * (delta + 5) + 1; }

// ---------------------------------------------------------------------------
// Structural checking. gadget_local_check evaluates every structural
// constraint at `root` using only the radius-2 neighborhood of root inside
// the GadEdge subgraph of the view (the frozen constant-radius form).
// Returned ids: sg.1a..sg.3h, g.1..g.2d, col.rep, col.d2.
// ---------------------------------------------------------------------------

std::vector<std::string> gadget_local_check(const View& view, int root, int delta);

// All (node id, constraint id) violations; empty iff the gadget is valid.
std::vector<std::pair<int, std::string>> check_gadget(const PortedMultigraph& g,
                                                      const Labeling& in, int delta);

// ---------------------------------------------------------------------------
// Mutation fuzzing
// ---------------------------------------------------------------------------

enum class MutationKind {
  DeleteEdge,
  AddEdge,
  RelabelHalfEdge,
  RelabelNode,
  SwapPort,
  Recolor,
};

struct Mutant {
  PortedMultigraph g;
  Labeling in;
  std::string description;
};

// Applies one seeded mutation; throws GraphError when inapplicable.
Mutant mutate_gadget(const PortedMultigraph& g, const Labeling& in,
                     MutationKind kind, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Psi output labels. out.v is "Ok", or a JSON object with "ptr" (pointer) or
// "err" (violated constraint id), plus optional "chains" tags
// [kind, chain-color, letter]. out.b is "Ok" or a JSON object carrying
// replication ("err"/"copy"), a far-end claim, an attestation of the own
// star, a duplicate-color witness "cw", and replicated chain tags. out.e is
// "Ok"/"Err" ("eps" on PortEdges inside the padded problem).
// ---------------------------------------------------------------------------

struct ChainTag {
  std::string kind;   // "2c" or "2d"
  long long color = 0;
  char letter = 'A';
  friend bool operator==(const ChainTag& a, const ChainTag& b) {
    return a.kind == b.kind && a.color == b.color && a.letter == b.letter;
  }
  friend bool operator<(const ChainTag& a, const ChainTag& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.color != b.color) return a.color < b.color;
    return a.letter < b.letter;
  }
};

struct PsiV {
  enum class Kind { Ok, Err, Ptr, Bad };
  Kind kind = Kind::Bad;
  std::string ptr;     // pointer label when kind == Ptr
  std::string reason;  // violated constraint id when kind == Err
  std::vector<ChainTag> chains;
};

struct Claim {
  std::string node, port, dir;
  int color = -1;
  // far-star attestation mirror (presence of Right/Left/children/Parent)
  bool has_flags = false;
  bool r = false, l = false, c = false, p = false;
};

struct PsiB {
  bool ok = true;     // plain "Ok"
  bool bad = false;   // unparseable
  bool err = false;   // replicates a node Error
  std::string copy;   // replicates a node pointer
  std::optional<Claim> claim;
  std::optional<int> cw;  // duplicate-color witness
  bool has_att = false;
  bool att_r = false, att_l = false, att_c = false, att_p = false;
  std::vector<ChainTag> chains;
};

std::string emit_psi_v(const PsiV&);
std::string emit_psi_b(const PsiB&);
PsiV parse_psi_v(const std::string&);  // also accepts plain "Error", "Right", ...
PsiB parse_psi_b(const std::string&);

// ---------------------------------------------------------------------------
// The error-labeling problems and algorithm V
// ---------------------------------------------------------------------------

// Psi: the constant-radius form. Verifies out.v only, with radius-2 wide
// checks: psi.1 label shape, psi.2 "Error iff the radius-2 structural check
// fails", psi.3a-f pointer target rules.
NeLclProblem psi_problem(int delta);

// Psi_G: the strictly node-edge-checkable form over the full out.v/e/b
// encoding above. Reusable pieces for the padded problem:
std::vector<std::string> psi_g_node_check(const NodeCtx& ctx, int delta);
std::vector<std::string> psi_g_edge_check(const EdgeCtx& ctx, int delta);
NeLclProblem psi_g_problem(int delta);

// Algorithm V as a local algorithm with T = 4*ceil(log2(n_upper)) + 4.
// Emits the full Psi_G encoding; PortEdge-incident slots get "eps".
LocalAlgorithm algorithm_v(int n_upper, int delta);

// Centralized convenience wrapper: run() with seed 0.
RunResult run_v(const PortedMultigraph& g, const Labeling& in, int n_upper,
                int delta);

// Backtracking no-cheat oracle over Psi (plain out.v labels): searches for an
// all-error labeling (Error at exactly the locally failing nodes, pointers
// elsewhere) satisfying psi_problem; nullopt if none exists.
std::optional<Labeling> search_error_labeling(const PortedMultigraph& g,
                                              const Labeling& in, int delta,
                                              int budget_nodes = 20);

}  // namespace lcl
