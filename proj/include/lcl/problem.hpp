#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lcl/graph.hpp"

namespace lcl {

// Problems use the single-label convention: one input and one output label
// per carrier, in fixed layers "in.v"/"in.e"/"in.b" and "out.v"/"out.e"/
// "out.b". Conceptually composite labels are tupled into one string
// (canonical JSON for structured labels).
inline constexpr const char* kInV = "in.v";
inline constexpr const char* kInE = "in.e";
inline constexpr const char* kInB = "in.b";
inline constexpr const char* kOutV = "out.v";
inline constexpr const char* kOutE = "out.e";
inline constexpr const char* kOutB = "out.b";

struct Alphabet {
  std::function<bool(const std::string&)> contains;
  std::vector<std::string> values;  // finite listing; empty if not enumerated
  std::string canonical;            // default/"smallest" member

  static Alphabet unit() {
    return {[](const std::string& s) { return s == "-"; }, {"-"}, "-"};
  }
  static Alphabet of(std::vector<std::string> vals) {
    auto copy = vals;
    return {[copy](const std::string& s) {
              for (const auto& v : copy)
                if (v == s) return true;
              return false;
            },
            vals, vals.front()};
  }
};

// Star of a node as seen by a node constraint: the node's own labels plus
// the input/output labels of incident edges and half-edges in port order.
// A self-loop contributes two entries, one per side.
struct HalfInfo {
  int port = 0;
  std::string e_in, e_out;  // labels of the edge itself
  std::string b_in, b_out;  // labels of this (v, e) half-edge
};

struct NodeCtx {
  std::string v_in, v_out;
  std::vector<HalfInfo> inc;
};

struct EdgeCtx {
  std::string e_in, e_out;
  std::string v_in[2], v_out[2];  // node labels, side 0 and 1
  std::string b_in[2], b_out[2];  // half-edge labels per side
};

struct Violation {
  enum class Kind { Node, Edge, Input };
  Kind kind = Kind::Node;
  int location = 0;  // node id or edge index
  std::string constraint;

  friend bool operator==(const Violation& a, const Violation& b) {
    return a.kind == b.kind && a.location == b.location && a.constraint == b.constraint;
  }
};

// Node-edge-checkable LCL: node and edge predicates over labels only,
// invariant under id renaming and port permutation. The optional wide check
// exists for the constant-radius (non-ne) form of the gadget error problem.
struct NeLclProblem {
  std::string name;
  Alphabet in_v = Alphabet::unit(), in_e = Alphabet::unit(), in_b = Alphabet::unit();
  Alphabet out_v = Alphabet::unit(), out_e = Alphabet::unit(), out_b = Alphabet::unit();
  std::function<std::vector<std::string>(const NodeCtx&)> node_check;
  std::function<std::vector<std::string>(const EdgeCtx&)> edge_check;
  // wide form: evaluated on a radius-`wide_radius` view carrying all in/out
  // layers; returns violated constraint ids at the view root.
  int wide_radius = 0;
  std::function<std::vector<std::string>(const View&)> wide_node_check;
  // optional extra validation of the instance itself (degree bounds etc.)
  std::function<std::vector<Violation>(const PortedMultigraph&, const Labeling&)>
      input_check;
};

NodeCtx make_node_ctx(const PortedMultigraph& g, const Labeling& in,
                      const Labeling& out, int id);
EdgeCtx make_edge_ctx(const PortedMultigraph& g, const Labeling& in,
                      const Labeling& out, int edge_index);

// Empty result = accept. Checks totality and alphabet membership of the
// output layers, then every node and edge predicate.
std::vector<Violation> verify(const NeLclProblem& p, const PortedMultigraph& g,
                              const Labeling& in, const Labeling& out);

// Exhaustive enumeration of accepting outputs, with edge-constraint pruning
// during assignment. Requires finite output alphabets.
struct EnumerationResult {
  long long count = 0;
  std::vector<Labeling> solutions;  // up to `keep` of them
};
EnumerationResult enumerate_solutions(const NeLclProblem& p,
                                      const PortedMultigraph& g,
                                      const Labeling& in, long long cap,
                                      int keep = 4);

// Labeling with out.v/out.e/out.b all set to the canonical alphabet member.
Labeling canonical_output(const NeLclProblem& p, const PortedMultigraph& g);

}  // namespace lcl
