#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lcl/gadget.hpp"
#include "lcl/local_sim.hpp"
#include "lcl/problem.hpp"

namespace lcl {

// ---------------------------------------------------------------------------
// Padded graphs: every base node is replaced by a gadget; every base edge
// {u port a, v port b} becomes one PortEdge joining Port_a of u's gadget to
// Port_b of v's gadget. Base-problem inputs ride along in the "pi" field of
// the gadget input labels.
// ---------------------------------------------------------------------------

struct PaddedGraph {
  PortedMultigraph g;
  Labeling in;
  std::map<int, int> center_of;            // base node id -> gadget center id
  std::map<int, std::vector<int>> ports_of;  // base node id -> port node ids
};

PaddedGraph pad_graph(const PortedMultigraph& h, const Labeling& h_in,
                      const std::map<int, GadgetSpec>& specs);
// same gadget everywhere
PaddedGraph pad_graph(const PortedMultigraph& h, const Labeling& h_in,
                      const GadgetSpec& spec);

// ---------------------------------------------------------------------------
// The lifted problem: output labels
// ---------------------------------------------------------------------------

// the Sigma_list component: valid ports S, copied port inputs, virtual outputs
struct SigmaList {
  std::vector<int> S;  // sorted subset of {1..delta}
  std::string iv;
  std::vector<std::string> ie, ib;  // arity delta
  std::string ov;
  std::vector<std::string> oe, ob;  // arity delta
};

struct PiPrimeV {
  SigmaList list;
  std::string ps = "NoPortErr";  // PortErr_1 | PortErr_2 | NoPortErr
  std::string psi = "Ok";        // the Psi_G node output
  bool bad = false;
};

std::string emit_ppv(const PiPrimeV& v);
PiPrimeV parse_ppv(const std::string& s, int delta);

// lexicographically smallest alphabet-conformant Sigma_list
SigmaList canonical_list(const NeLclProblem& pi, int delta);

// ---------------------------------------------------------------------------
// Pi': the lifted ne-LCL with Constraints 1-6. Violation ids: pp.shape,
// pp.1, Psi_G ids (Constraint 2), pp.3, pp.4, pp.5a-pp.5d, pp.6a, pp.6b,
// pp.delta (input validation).
// ---------------------------------------------------------------------------

NeLclProblem pi_prime_problem(const NeLclProblem& pi, int delta);

// Pi^k: k = 1 is the base problem; each further level applies pi_prime.
NeLclProblem recurse(const NeLclProblem& base, int k, int delta);

// ---------------------------------------------------------------------------
// The solver: per-gadget validity proofs via algorithm V, port statuses,
// canonical completion on invalid gadgets, and simulation of `inner` on the
// virtual graph obtained by contracting valid gadgets. radius < 0 means
// T(n) = n. Insufficient views and inner failures are declared failures.
// ---------------------------------------------------------------------------

LocalAlgorithm pi_prime_solver(const NeLclProblem& base,
                               const LocalAlgorithm& inner, int delta,
                               int radius = -1);
AlgorithmFamily pi_prime_family(const NeLclProblem& base,
                                const LocalAlgorithm& inner, int delta);
RunResult solve_pi_prime(const PortedMultigraph& g, const Labeling& in,
                         const NeLclProblem& base, const LocalAlgorithm& inner,
                         int delta, std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Test-side inverse of the lifting: contract valid gadgets (all-Ok Psi_G
// part), read S and the copied inputs/outputs off their Sigma_list, and
// reassemble the virtual graph plus a base-problem labeling on it.
// ---------------------------------------------------------------------------

struct VirtualSolution {
  PortedMultigraph vg;
  Labeling vin;   // in.v/in.e/in.b for the base problem
  Labeling vout;  // out.v/out.e/out.b for the base problem
};

std::optional<VirtualSolution> extract_virtual_solution(
    const PortedMultigraph& g, const Labeling& in, const Labeling& out,
    int delta);

// ---------------------------------------------------------------------------
// Hard instances: H = f(n)-cycle with f(x) = floor(sqrt(x)), padded with the
// largest equal-height gadget of size N <= n/f(n), plus n - N*f(n) isolated
// nodes. Exactly n nodes.
// ---------------------------------------------------------------------------

struct HardInstance {
  PortedMultigraph g;
  Labeling in;
  int f = 0;         // base cycle length
  int gadget_n = 0;  // N
  int height = 0;    // chosen equal height
  int isolated = 0;  // padding nodes
};

HardInstance hard_instance(int n, int delta);

}  // namespace lcl
