#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lcl/graph.hpp"
#include "lcl/problem.hpp"

namespace lcl {

// Deterministic per-node random stream: splitmix64 keyed on (master seed,
// node id). Equal seeds give equal streams.
class Rng {
 public:
  Rng(std::uint64_t master_seed, std::uint64_t node_id);
  std::uint64_t next_u64();
  // uniform value in [0, bound) for bound >= 1
  std::uint64_t next_below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

// What one node's rule emits: its own label plus one edge label and one
// half-edge label per incident port, in port order (layers out.v/out.e/out.b
// of the single-label convention). A set `fail` declares a run failure.
struct RuleOut {
  std::string v;
  std::vector<std::string> e;
  std::vector<std::string> b;
  std::optional<std::string> fail;
};

struct LocalAlgorithm {
  std::string name;
  std::function<int(int)> radius;  // T(n)
  std::function<RuleOut(const View&, int n, int delta, Rng&)> rule;
};

struct RunResult {
  Labeling out;
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
};

// Gather-compute-output execution: each node sees ball(g, in, v, T(n)) and
// labels itself and its incident elements. Endpoint disagreement on an edge
// label is a run error, never silently resolved. If `alphabets` is given,
// emitted labels are checked against its output alphabets.
RunResult run(const PortedMultigraph& g, const Labeling& in,
              const LocalAlgorithm& alg, std::uint64_t seed,
              const NeLclProblem* alphabets = nullptr);

using AlgorithmFamily = std::function<LocalAlgorithm(int)>;  // T -> algorithm

// Smallest T <= t_max for which family(T) runs without errors and the output
// passes verify(); nullopt if none does.
std::optional<int> measure_locality(const PortedMultigraph& g, const Labeling& in,
                                    const NeLclProblem& problem,
                                    const AlgorithmFamily& family, int t_max,
                                    std::uint64_t seed = 0);

}  // namespace lcl
